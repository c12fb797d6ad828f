#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcv/polytope.hpp"

namespace mcv {

// Decoration of one open edge rint E, in edge parameter space: for the edge
// with sorted vertex ids {i, j} (i < j), parameter t maps to v_i + t(v_j-v_i).
// Pieces are pairwise disjoint, sorted, strictly inside (0, 1) as sets.
struct EdgeDecoration {
  std::vector<Iv> pieces;
};

// A relatively open convex subset of a facet's relative interior.
struct FacetPiece {
  enum Kind { point, segment, polygon } kind = point;
  Pt p;                  // point
  Pt a, b;               // open segment endpoints
  std::vector<Pt> poly;  // closure vertices, cyclic (relatively open polygon)
};

struct FacetDecoration {
  enum class Mode { empty, full, pieces } mode = Mode::empty;
  std::vector<FacetPiece> pieces;
};

// Raw scene description keyed by vertex ids (the file-level form).
struct SceneData {
  int dim = 2;
  std::vector<Pt> vertices;
  std::vector<std::vector<int>> facets;  // 3D: facet vertex cycles
  std::map<std::pair<int, int>, EdgeDecoration> edge_decorations;
  std::map<std::vector<int>, FacetDecoration> facet_decorations;  // sorted tuples
  std::vector<bool> vertex_flags;
};

// Decorated polytope: X with int C ⊆ X ⊆ C. Decorations are attached to face
// ids of the enumerated lattice; absent entries mean empty decorations.
struct Scene {
  Polytope C;
  FaceLattice L;
  std::map<int, EdgeDecoration> edges;
  std::map<int, FacetDecoration> facets;
  std::vector<bool> vertex_flags;

  const EdgeDecoration* edge_dec(int eid) const;
  const FacetDecoration* facet_dec(int fid) const;
  Pt edge_point(int eid, const Rat& t) const;
  Rat edge_param(int eid, const Pt& p) const;  // p must lie on the edge line
  std::vector<int> edge_face_ids() const;      // canonical (id) order
  std::vector<int> facet_face_ids() const;     // 3D facet faces, canonical order
};

// Builds the lattice and attaches decorations. Throws std::invalid_argument if
// the vertex list is not the canonical hull vertex list, facet cycles mismatch,
// or a decoration references a non-existent face.
Scene build_scene(const SceneData& d);
SceneData scene_data(const Scene& s);  // inverse (canonical form)

struct FacetSel {
  enum class Kind { none, full, piece } kind = Kind::none;
  int piece = -1;
};

struct ComplementItem {
  enum Kind { edge_gap, facet_piece, facet_all, vertex } kind = edge_gap;
  int face_id = -1;
  Iv gap;          // edge_gap: excluded parameter interval
  int piece = -1;  // facet_piece: decoration piece index
};

// Finite description of a convex W ⊆ X: the open kernel, one interval/point
// per edge, one facet selection per facet, and a set of flagged vertices.
struct ConvexWitness {
  bool kernel_included = true;
  std::map<int, Iv> edge_sel;        // edge face id -> selected interval/point
  std::map<int, FacetSel> facet_sel; // facet face id -> selection
  std::vector<int> verts;            // selected vertex ids, sorted
  std::vector<ComplementItem> complement;
};

std::vector<std::string> validate_scene(const Scene& s);

bool membership(const Scene& s, const Pt& p);

// Membership in the witness-described set W.
bool witness_member(const Scene& s, const ConvexWitness& w, const Pt& p);

struct WitnessCheck {
  bool contained = false;
  bool convex = false;
  std::string detail;  // first violation, for diagnostics
};

WitnessCheck witness_check(const Scene& s, const ConvexWitness& w);

// Reference to one selected item of a witness. Face ids are unique across item
// kinds (vertex faces carry the vertex id), so fid identifies the item.
struct WitnessItemRef {
  enum Kind { vert, edge, facet } kind = vert;
  int fid = -1;
};

std::vector<WitnessItemRef> witness_items_of(const ConvexWitness& w);

// Items whose face join with `fid` is a proper face (all others join through
// the interior). Only faces sharing a containing proper face qualify, so this
// is local in the lattice.
std::vector<WitnessItemRef> witness_items_near(const Scene& s, const ConvexWitness& w,
                                               int fid);

// The pairwise chord condition between two distinct selected items; exact.
bool witness_pair_ok(const Scene& s, const ConvexWitness& w, const WitnessItemRef& a,
                     const WitnessItemRef& b, std::string* why = nullptr);

// The structured complement: W = X ∩ (C ∖ excluded pieces).
std::vector<ComplementItem> compute_complement(const Scene& s, const ConvexWitness& w);

// ---- addability: is W ∪ {p} still convex? ----
// p must lie in X ∖ W; exact finite tests against every selected item.

bool vertex_addable(const Scene& s, const ConvexWitness& w, int vid);
bool edge_point_addable(const Scene& s, const ConvexWitness& w, int eid, const Rat& t);
bool facet_point_addable(const Scene& s, const ConvexWitness& w, int fid, const Pt& p);

// ---- dimension-1 solver ----

struct LinePiece {
  bool lo_inf = false, hi_inf = false;
  Iv iv;  // ignored bounds when the corresponding *_inf flag is set
};

struct LineSubset {
  Pt base, dir;
  std::vector<LinePiece> pieces;  // sorted, pairwise disjoint
};

// The connected component of X containing seed (a maximal convex subset of a
// 1-dimensional X). Throws std::invalid_argument if seed ∉ X.
LinePiece solve_dim1(const LineSubset& X, const Pt& seed);

// ---- embedding transfer ----

struct AffinePlacement {
  // x2d = (s, t) maps to offset + s*col0 + t*col1.
  Pt offset, col0, col1;  // 3D points/vectors
};

struct EmbeddedScene {
  Scene scene;                 // dim-2 polytope living in R^3
  std::vector<int> vertex_map; // original vertex id -> embedded vertex id
};

// Affinely embeds a 2D scene into R^3 (rank-2 placement required; throws
// std::invalid_argument otherwise). Decorations are carried along exactly.
EmbeddedScene embed_scene(const Scene& s, const AffinePlacement& placement);

// Pulls a witness on the embedded scene back to the original scene.
ConvexWitness pullback_witness(const Scene& orig, const EmbeddedScene& emb,
                               const ConvexWitness& w);

// ---- shared exact chord-test machinery ----

// A point or line segment with per-endpoint inclusion flags (a == b with both
// flags set is a point). The relative interior is always part of the set.
struct Seg1 {
  Pt a, b;
  bool a_in = true, b_in = true;
};

// Geometry of a container piece (relatively open convex subset of a facet
// plane, or lower-dimensional).
struct PieceGeom {
  const FacetPiece* piece = nullptr;  // null = represents a full facet rint
  Frame2 frame;                       // facet plane frame (for polygon pieces)
  const FaceLattice* L = nullptr;
  int facet_id = -1;

  bool in_closure(const Pt& x) const;
  bool in_relopen(const Pt& x) const;
};

PieceGeom make_piece_geom(const FaceLattice& L, int facet_id, const FacetPiece* piece);

// True iff every open chord (x, y), x ∈ A, y ∈ B, lies inside the relatively
// open convex container. Exact; finitely many predicate evaluations.
bool chords_in_piece(const Seg1& A, const Seg1& B, const PieceGeom& P);

// True iff every chord from every x ∈ A into the relatively open convex piece
// P lands in P (⟺ cl A ⊆ cl P).
bool chords_into_own_piece(const Seg1& A, const PieceGeom& P);

}  // namespace mcv
