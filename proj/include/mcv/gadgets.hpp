#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcv/scene.hpp"

namespace mcv {

// Finite downward-closed family of faces over vertices 0..n-1; the empty face
// is always a member. Faces are sorted member lists, listed in ascending
// lexicographic order without duplicates.
struct SimplicialComplex {
  int n = 0;
  std::vector<std::vector<int>> faces;
};

// nullopt when well-formed, else a description of the first defect.
std::optional<std::string> validate_complex(const SimplicialComplex& K);

// Inclusion-maximal faces, in ascending lexicographic order.
std::vector<std::vector<int>> maximal_faces(const SimplicialComplex& K);

using VecQ = std::vector<Rat>;

// A choice-encoding instance: X = D ⊔ ⊔_i B_i where every maximal convex
// subset W of X has D ⊆ W and meets each block B_i in exactly one point.
// Scene-backed instances carry a decorated polytope: D is the open kernel
// together with the relative interiors of kernel_faces, and each block is a
// finite decorated point set on one edge. Abstract instances (kind == ac)
// carry membership predicates instead of a scene.
struct GadgetInstance {
  enum class Kind { cc, prism, sc, ac } kind = Kind::cc;

  std::optional<Scene> scene;

  struct Block {
    int edge_fid = -1;        // carrier edge face id
    std::vector<Rat> params;  // sorted edge parameters of the block points
    std::vector<Rat> source;  // aligned original choice values
  };
  std::vector<Block> blocks;

  // face ids whose relative interiors belong to D besides the open kernel
  std::vector<int> kernel_faces;

  // kind == sc
  SimplicialComplex complex;
  std::vector<Pt> simplex;  // abstract vertex r -> ambient point

  // kind == ac
  int ac_dim = 0;
  std::vector<std::vector<int>> ac_blocks;  // set index -> coordinate indices
  std::function<bool(const VecQ&)> ac_in_D, ac_in_X;
};

// Polygon with lower boundary the polyline through (n, n^2), n = 0..N, closed
// off above by cap vertices (-1, M), (N+1, M); polyline edge n carries the
// isolated decoration points choices[n] in edge parameters. D = the interior.
// Throws std::invalid_argument on N < 1, wrong choice count, an empty choice
// set, or a parameter outside (0,1).
GadgetInstance gen_cc_scene(int N, const std::vector<std::vector<Rat>>& choices);

// Height-1 prism over a rational convex m-gon inscribed in the unit circle.
// Vertical edge i carries the isolated points at heights choices[i]; every
// facet is decorated full, horizontal edges empty, vertices off, so D is the
// prism minus its 1-skeleton. Throws std::invalid_argument on m < 3, wrong
// choice count, an empty choice set, or a height outside (0,1).
GadgetInstance gen_unif_prism(int m, const std::vector<std::vector<Rat>>& choices);

// X = union over S ∈ K of the closed sub-simplex conv{b_r : r ∈ S} of the
// standard (n-1)-simplex. A full Scene when K contains the whole vertex set;
// a combinatorial instance solved by solve_sc otherwise. n must be 3 or 4.
GadgetInstance gen_sc_scene(const SimplicialComplex& K);

// Abstract instance in R^d, d = sum of the set sizes: coordinates are the
// pairs (set, element), D = nonnegative vectors whose support meets at least
// two sets, blocks = the unit vectors of each set. Verify-only (no scene).
GadgetInstance gen_ac_instance(const std::vector<int>& family_sizes);

struct ConditionsReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks the three choice-encoding conditions: (1) open chords from X into D
// stay in D, (2) no open chord between two points of one block lies in X,
// (3) open chords between distinct blocks lie in D; plus the block
// disjointness invariants. Exact face-join classification for scene-backed
// instances; `samples` rational points per chord for abstract ones.
ConditionsReport verify_conditions(const GadgetInstance& g, int samples);

// Scene-backed instances: block index -> the unique selected edge parameter.
// Throws std::logic_error when some block meets W in 0 or >= 2 points.
std::vector<Rat> extract_choice(const GadgetInstance& g, const ConvexWitness& w);

// Abstract instances: set index -> the unique chosen element index, tested
// through a W-membership oracle. Throws std::logic_error on 0 or >= 2.
std::vector<int> extract_choice(const GadgetInstance& g,
                                const std::function<bool(const VecQ&)>& in_w);

// Deterministic maximal convex subset of an sc instance, as sample points
// (the chosen face's vertices plus its barycenter). The choice is the
// lexicographically first maximal face; 2-element faces go through the
// dimension-1 solver on their carrier line.
std::vector<Pt> solve_sc(const GadgetInstance& g);

// The support P_W of a point list: all abstract vertices r with a positive
// barycentric coordinate at some point, ascending.
std::vector<int> sc_support(const GadgetInstance& g, const std::vector<Pt>& w);

}  // namespace mcv
