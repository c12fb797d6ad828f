#pragma once

#include <optional>
#include <vector>

#include "mcv/rat.hpp"

namespace mcv {

enum class SegKind { open, closed, half_open_a, half_open_b };

struct Segment {
  Pt a, b;
  SegKind kind = SegKind::open;

  bool a_in() const { return kind == SegKind::closed || kind == SegKind::half_open_b; }
  bool b_in() const { return kind == SegKind::closed || kind == SegKind::half_open_a; }
};

struct SegIsect {
  enum Kind { empty, point, segment } kind = empty;
  Pt p;           // point witness, or segment endpoint
  Pt q;           // other endpoint when kind == segment
  bool p_in = true, q_in = true;  // endpoint inclusion of the witness subsegment
};

// Exact intersection of two (possibly open/half-open) segments in R^2 or R^3.
SegIsect segments_intersect(const Segment& s1, const Segment& s2);

inline SegIsect open_segments_intersect(const Segment& s1, const Segment& s2) {
  return segments_intersect(s1, s2);
}

// Exact intersection of the closed segments [a1,b1], [a2,b2]; convenience.
SegIsect closed_segments_intersect(const Pt& a1, const Pt& b1, const Pt& a2, const Pt& b2);

// Dimension of the affine hull: -1 empty, 0 point, ... Exact rank computation.
int affine_dim(const std::vector<Pt>& points);

// Closed/open/half-open rational interval; lo == hi with both ends closed is a
// point. Invalid (empty) intervals are never stored.
struct Iv {
  Rat lo, hi;
  bool lo_in = false, hi_in = false;

  bool is_point() const { return lo == hi; }
  bool contains(const Rat& t) const {
    int cl = cmp(t, lo), ch = cmp(t, hi);
    if (cl < 0 || ch > 0) return false;
    if (cl == 0 && !lo_in) return false;
    if (ch == 0 && !hi_in) return false;
    return true;
  }
  bool operator==(const Iv& o) const {
    return lo == o.lo && hi == o.hi && lo_in == o.lo_in && hi_in == o.hi_in;
  }
};

inline bool iv_valid(const Iv& v) {
  int c = cmp(v.lo, v.hi);
  return c < 0 || (c == 0 && v.lo_in && v.hi_in);
}

std::optional<Iv> iv_intersect(const Iv& a, const Iv& b);
bool iv_subset(const Iv& a, const Iv& b);       // a ⊆ b
bool iv_disjoint(const Iv& a, const Iv& b);
// Union is connected (touching or overlapping).
bool iv_mergeable(const Iv& a, const Iv& b);
Iv iv_merge(const Iv& a, const Iv& b);

// Sorted disjoint interval list helpers (operands need not be normalized).
std::vector<Iv> iv_set_normalize(std::vector<Iv> xs);           // sort + merge connected
std::vector<Iv> iv_set_subtract(const std::vector<Iv>& xs, const Iv& y);
bool iv_set_contains(const std::vector<Iv>& xs, const Rat& t);
bool iv_set_covers(const std::vector<Iv>& xs, const Iv& y);     // y ⊆ ∪xs

}  // namespace mcv
