#pragma once

#include <functional>

#include "mcv/filtration.hpp"

namespace mcv {

// ---- full solvers ----

// Maximal convex subset of a validated 2D scene: kernel always included, per
// edge the first connected component of the decoration, vertices added in
// canonical order when the adjacent selections admit them. Deterministic.
ConvexWitness solve2d(const Scene& S, std::vector<std::string>* trace = nullptr);

// Maximal convex subset of a validated 3D scene: facet phase (full facets in
// full, pieces-mode facets resolve to their first piece), edge phase (first
// connected component of the addable set, one edge per stage), vertex phase
// (independent-set machinery on the vertex graph). Deterministic.
ConvexWitness solve3d(const Scene& S, std::vector<std::string>* trace = nullptr);

// Dispatch on scene dimension (2 or 3).
ConvexWitness solve_scene(const Scene& S, std::vector<std::string>* trace = nullptr);

// ---- vertex-phase machinery ----

// Graph over the addable flagged vertices after the facet and edge phases:
// nodes carry vertex ids; an edge joins p, q when the open chord (p, q) is
// disjoint from the current W. For every node pair the chord is either inside
// W or disjoint from it; a violation throws std::logic_error (geometry bug).
struct VertexGraph {
  std::vector<int> nodes;                    // sorted vertex ids
  std::vector<std::pair<int, int>> edges;    // id pairs, first < second
};

VertexGraph vertex_graph(const Scene& S, const ConvexWitness& w);

// Greedy maximal independent set of a max-degree-2 graph, scanning nodes in
// the given order. adj is indexed by node position in `order`'s value domain.
// Throws std::invalid_argument when some degree exceeds 2.
std::vector<int> independent_set_deg2(const std::vector<std::vector<int>>& adj,
                                      const std::vector<int>& order);

// ---- infinite-component selection rules ----

// One-ended path indexed by 0, 1, 2, ...: select the even indices.
bool ray_select(long n);

// Fixed enumeration of the rationals: 0, 1, -1, 2, 1/2, -2, -1/2, ...
// (level n lists the positive p/q with max(p,q) = n in descending value
// order, then their negations in the same order).
Rat rat_enum(long j);

// Two-ended path indexed by the integers with rational 3D labels. The rule
// splits at the first coordinate taking two values and the first enumerated
// rational separating the labels into two nonempty sides, selects evens on
// each resulting run (finite runs greedily in label order), and drops the
// B-side nodes adjacent to a selected A-side node.
struct LineSelectRule {
  std::function<Pt(long)> f;
  long horizon = 64;  // runs longer than this are treated as rays
  int i0 = -1;        // splitting coordinate
  Rat r;              // splitting rational r_{j0}
  long j0 = -1;

  bool side_a(long n) const;     // label coordinate i0 <= r
  bool selected(long n) const;
};

// Probes f on [-window, window] to fix i0 and j0. Throws
// std::invalid_argument when all probed labels agree in every coordinate.
LineSelectRule line_select(std::function<Pt(long)> f, long window = 8,
                           long horizon = 64);

// ---- greedy baseline ----

// Keeps each candidate (in order) iff the convex hull of the kept points
// stays inside the scene's point set X; exact. Candidates must lie in X.
std::vector<Pt> greedy_baseline(const Scene& S, const std::vector<Pt>& candidates);

// Oracle variant for point sets given only by a membership predicate: the
// hull-containment test checks the candidate itself plus every probe point
// that falls inside the hull. Exact for sets of the form C minus finitely
// many excluded points when the probes include the exclusions.
std::vector<Pt> greedy_baseline(const std::function<bool(const Pt&)>& in_x,
                                const std::vector<Pt>& candidates,
                                const std::vector<Pt>& probes);

// ---- independent maximality verification ----

struct MaximalityVerdict {
  bool maximal = true;
  Pt counterexample;  // a point of X addable to W (valid when !maximal)
  std::string where;  // face / description of the violation
};

// Exact decision: is the witness's W maximal convex in X? Tests finitely
// many candidate extensions: the kernel, whole facet pieces / full facets,
// edge intervals with endpoints on the canonical breakpoint subdivision, and
// single vertices. Throws std::invalid_argument when witness_check fails.
MaximalityVerdict verify_maximal(const Scene& S, const ConvexWitness& w);

}  // namespace mcv
