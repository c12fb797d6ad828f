#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "mcv/polytope.hpp"

namespace mcv {

// Center plus at least three arm endpoints; open arms pairwise disjoint.
struct StarConfiguration {
  Pt center;
  std::vector<Pt> arms;
};

// The star as a point set: the union of the closed segments [center, arm].
// nullopt when valid; otherwise the first arm index pair whose open arms
// overlap (two arms on one ray from the center). Throws std::invalid_argument
// on fewer than three arms or an arm equal to the center.
std::optional<std::pair<int, int>> validate_star(const StarConfiguration& s);

// Exact rational witness point of the intersection of the two stars (closed
// arms), or nullopt when disjoint. Deterministic: equal centers first, then
// the first intersecting arm pair in order.
std::optional<Pt> stars_intersect(const StarConfiguration& s1,
                                  const StarConfiguration& s2);

using ArcSignature = std::array<int, 3>;

// Classification parameters: circle of radius 2/(3k) about p0, cut into 2l
// half-open arcs by fixed rational separator directions (l in {3,4,5,6}).
struct MooreClass {
  long k = 1;
  Pt p0;
  long l = 3;
  ArcSignature arcs{};
};

// For each configuration: if its center lies in the open ball B(p0, 1/(3k))
// and its star crosses the circle of radius 2/(3k) about p0 in three points
// lying in pairwise non-adjacent arcs of the 2l-partition, the first such
// arc triple in lexicographic order; otherwise nullopt. Crossing points may
// be quadratic irrationals; all decisions are exact sign tests.
std::vector<std::optional<ArcSignature>> moore_classify(
    const std::vector<StarConfiguration>& family, long k, const Pt& p0, long l);

// Both stars must classify to cls.arcs under (cls.k, cls.p0, cls.l) — checked,
// std::invalid_argument otherwise. The classification forces the stars to
// intersect; returns a witness. An empty intersection is a geometry bug and
// throws std::logic_error.
Pt forced_intersection(const StarConfiguration& s1, const StarConfiguration& s2,
                       const MooreClass& cls);

// A finite graph drawn with straight open edges on a polytope boundary.
struct LinearRealization {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;  // node index pairs, first < second
  std::vector<Pt> embedding;               // node index -> boundary point
};

// Checks the three realization conditions exactly: injective embedding, every
// open edge segment inside the boundary minus all node images, and distinct
// open edge segments disjoint. nullopt when valid, else a description.
// Throws std::invalid_argument when a node image is off the boundary.
std::optional<std::string> validate_realization(const LinearRealization& r,
                                                const FaceLattice& L);

// Nodes of graph degree >= 3, ascending.
std::vector<int> degree3_nodes(const LinearRealization& r);

// The shrunken star of one node projected to the window plane: arm endpoints
// ((n+2)p + q)/(n+3) toward each neighbor q, with the least n keeping the
// shrunken arm inside the window, then projected via window_project. Throws
// std::invalid_argument when the node is outside the window or has no
// neighbors.
StarConfiguration window_star(const LinearRealization& r, const FaceLattice& L,
                              const ProjectionWindow& w, int node);

}  // namespace mcv
