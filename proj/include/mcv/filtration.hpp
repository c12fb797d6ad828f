#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mcv/scene.hpp"

namespace mcv {

// Increasing sequence of upward-closed face-id sets; the last stage holds
// every face. Stored as the faces added per stage (sorted, disjoint), so a
// filtration with many stages stays linear in the number of faces.
struct FaceFiltration {
  std::vector<std::vector<int>> added_per_stage;

  int n_stages() const { return static_cast<int>(added_per_stage.size()); }
  const std::vector<int>& added(int i) const { return added_per_stage[i]; }
  // The cumulative sorted face set of stage i (materialized on demand).
  std::vector<int> stage_faces(int i) const;
};

// Face ids of one dimension in canonical order (lexicographic on the sorted
// vertex-id tuple).
std::vector<int> canonical_face_order(const FaceLattice& L, int dim);

// 2D: {C}; + all edges; + (nothing); then one vertex per stage.
FaceFiltration build_face_filtration_2d(const FaceLattice& L);
// 3D: {C}; + all facets; + (nothing); one edge per stage; + all vertices.
FaceFiltration build_face_filtration_3d(const FaceLattice& L);

// Every stage upward closed and every successor step's added faces pairwise
// ⊆-incomparable.
bool check_fine(const FaceFiltration& F, const FaceLattice& L);

// Region descriptors of the derived convex filtration: the stage region is
// the union of rint(face) over `faces`; `cells` are this stage's partition
// cells (the added faces' relative interiors).
struct ConvexFiltrationStage {
  std::vector<int> faces;
  std::vector<int> cells;
};

// Throws std::invalid_argument unless F passes check_fine.
std::vector<ConvexFiltrationStage> derive_convex_filtration(const FaceFiltration& F,
                                                            const FaceLattice& L);

bool region_contains(const FaceLattice& L, const std::vector<int>& faces, const Pt& p);

// What a chooser selects for the faces added at one stage.
struct StageSelection {
  std::map<int, Iv> edge_sel;
  std::map<int, FacetSel> facet_sel;
  std::vector<int> verts;
};

// Pure per-stage strategy: sees the scene, the witness accumulated so far,
// and the faces added at this stage.
using Chooser = std::function<StageSelection(const Scene&, const ConvexWitness&,
                                             const std::vector<int>& added, int stage)>;

// Runs the chooser over the filtration. After every stage the faces selected
// at that stage are checked against the decorations, the new items' chord
// conditions against nearby items are verified, and each unselected
// decoration piece in the stage's cells is tested for addability; any
// violation throws std::logic_error naming the stage. One full witness check
// runs at the end. Per-stage work is local in the face lattice, so a long
// filtration runs in near-linear total time. Appends one line per stage to
// `trace` when given. The result carries the structured complement.
ConvexWitness run_driver(const Scene& S, const FaceFiltration& F, const Chooser& chooser,
                         std::vector<std::string>* trace = nullptr);

}  // namespace mcv
