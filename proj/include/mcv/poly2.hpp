#pragma once

#include <vector>

#include "mcv/geom.hpp"

namespace mcv {

// Small utilities for convex polygons in R^2, given as vertex lists in
// counterclockwise order without repeated or collinear vertices unless noted.

Rat poly_area2(const std::vector<Pt>& poly);  // twice the signed area

// Keep the part with dot(n,x) <= off (Sutherland-Hodgman step). Result may be
// degenerate (segment/point); consecutive duplicates are removed.
std::vector<Pt> poly_clip(const std::vector<Pt>& poly, const Pt& n, const Rat& off);

std::vector<Pt> poly_intersect(const std::vector<Pt>& a, const std::vector<Pt>& b);

// +1 interior, 0 boundary, -1 outside (closed polygon).
int point_vs_convex_polygon(const std::vector<Pt>& poly, const Pt& p);

// True iff the open interiors do not meet (touching boundaries allowed).
bool poly_interiors_disjoint(const std::vector<Pt>& a, const std::vector<Pt>& b);

}  // namespace mcv
