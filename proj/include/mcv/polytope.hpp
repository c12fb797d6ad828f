#pragma once

#include <map>
#include <vector>

#include "mcv/geom.hpp"

namespace mcv {

struct Halfspace {
  Pt n;
  Rat off;  // constraint dot(n, x) <= off; boundary plane dot(n, x) == off
};

// Affine frame of a plane in R^2/R^3: x = origin + s*u + t*v. Used to run 2D
// computations on facets and degenerate (dim-2 in R^3) polytopes.
struct Frame2 {
  Pt origin, u, v;
  Pt to_plane(const Pt& x) const;              // (s, t) as a 2D point
  Pt from_plane(const Pt& st) const;           // back to ambient
  bool on_plane(const Pt& x) const;
};

Frame2 make_frame(const Pt& origin, const Pt& u, const Pt& v);

struct Polytope {
  int ambient = 0;
  int dim = -1;
  std::vector<Pt> verts;  // canonical order (see convex_hull)
  // dim-1 faces for dim >= 2: vertex cycles (ccw seen from outside; 2D: pairs),
  // sorted by sorted vertex tuple, each cycle starting at its smallest id.
  std::vector<std::vector<int>> facet_cycles;
  std::vector<Halfspace> facet_planes;  // aligned with facet_cycles, outward
  std::vector<Halfspace> affine_eqs;    // equalities cutting out the affine hull
};

// Canonical order: 2D full-dim — counterclockwise from the lexicographic
// minimum; dim-2 in R^3 — cyclic in a deterministic frame, starting at the
// lexicographic minimum; 3D — lexicographically sorted vertices.
Polytope convex_hull(const std::vector<Pt>& points);

struct Face {
  int id = -1;
  int dim = -1;
  std::vector<int> verts;   // sorted polytope vertex indices
  std::vector<int> covers;  // faces one dimension up containing this face
};

struct FaceLattice {
  Polytope P;
  std::vector<Face> faces;  // ids 0..n-1; vertex faces first (id == vertex id)
  int top = -1;
  std::vector<std::vector<int>> up;    // strict superfaces (including top)
  std::vector<std::vector<int>> down;  // strict subfaces
  std::map<std::vector<int>, int> by_verts;

  const Face& face(int id) const { return faces[id]; }
  int n_faces() const { return static_cast<int>(faces.size()); }
  bool is_vertex(int id) const { return faces[id].dim == 0 && id != top; }
  // Barycenter of the face's vertices; lies in rint(face).
  Pt rint_point(int id) const;
  Pt vertex(int vid) const { return P.verts[vid]; }
};

FaceLattice enumerate_faces(const Polytope& P);

// Smallest face containing both; throws on invalid ids.
int face_join(const FaceLattice& L, int f, int g);

// Unique face with p in its relative interior, or -1 if p is outside.
int locate_face(const FaceLattice& L, const Pt& p);

// Test helper for the join-segment property: the midpoint and samples of
// (p, q) with p in rint(f), q in rint(g) must locate to face_join(f, g).
bool rint_segment_face(const FaceLattice& L, int f, int g, const Pt& p, const Pt& q);

struct ProjectionWindow {
  Pt center;            // c: plane passes through it
  Pt normal;            // p0 - c
  Frame2 plane;         // frame of the projection plane
  std::vector<int> facet_ids;  // lattice face ids of the window facets
};

// Facets visible from p0 (outward normal has positive dot with p0-c); the
// orthogonal projection onto the plane through c normal to p0-c is injective
// there and the projected facet interiors are pairwise disjoint (verified
// exactly; a violation throws std::logic_error).
ProjectionWindow projection_window(const FaceLattice& L, const Pt& c, const Pt& p0);

// Projection of an ambient point into window-plane coordinates.
Pt window_project(const ProjectionWindow& w, const Pt& x);

// Frame for the plane of a dim-2 face (facet of a 3-polytope, or the polytope
// itself when dim == 2).
Frame2 face_frame(const FaceLattice& L, int fid);

}  // namespace mcv
