#include "mcv/geom.hpp"

#include <algorithm>

namespace mcv {

namespace {

bool parallel(const Pt& d1, const Pt& d2) {
  if (d1.dim == 2) return sign(cross2(d1, d2)) == 0;
  Pt c = cross3(d1, d2);
  return sign(c[0]) == 0 && sign(c[1]) == 0 && sign(c[2]) == 0;
}

Iv seg_param_iv(const Segment& s) {
  return Iv{Rat(0), Rat(1), s.a_in(), s.b_in()};
}

}  // namespace

SegIsect segments_intersect(const Segment& s1, const Segment& s2) {
  require_same_dim(s1.a, s2.a);
  require_same_dim(s1.a, s1.b);
  require_same_dim(s2.a, s2.b);
  Pt d1 = s1.b - s1.a, d2 = s2.b - s2.a;
  Pt w = s2.a - s1.a;
  SegIsect out;

  if (!parallel(d1, d2)) {
    // Unique line intersection: solve t*d1 - u*d2 = w on two independent rows,
    // then verify the remaining row (3D lines may be skew).
    int r0 = -1, r1 = -1;
    Rat det;
    for (int i = 0; i < d1.dim && r1 < 0; ++i)
      for (int j = i + 1; j < d1.dim; ++j) {
        det = d1[i] * (-d2[j]) - (-d2[i]) * d1[j];
        if (sign(det) != 0) { r0 = i; r1 = j; break; }
      }
    if (r0 < 0) return out;  // degenerate direction (shouldn't happen: a != b)
    Rat t = (w[r0] * (-d2[r1]) - (-d2[r0]) * w[r1]) / det;
    Rat u = (d1[r0] * w[r1] - w[r0] * d1[r1]) / det;
    for (int i = 0; i < d1.dim; ++i)
      if (t * d1[i] - u * d2[i] != w[i]) return out;  // skew
    if (!seg_param_iv(s1).contains(t) || !seg_param_iv(s2).contains(u)) return out;
    out.kind = SegIsect::point;
    out.p = s1.a + t * d1;
    return out;
  }

  if (!parallel(d1, w) && !(w == Pt{} && s1.a == s2.a)) {
    // Parallel distinct lines (w == 0 means same start, hence collinear).
    bool zero = true;
    for (int i = 0; i < w.dim; ++i) zero = zero && sign(w[i]) == 0;
    if (!zero) return out;
  }

  // Collinear: map s2's endpoints to s1's parameter.
  Rat dd = dot(d1, d1);
  Rat ta = dot(s2.a - s1.a, d1) / dd;
  Rat tb = dot(s2.b - s1.a, d1) / dd;
  Iv i2{ta, tb, s2.a_in(), s2.b_in()};
  if (cmp(ta, tb) > 0) i2 = Iv{tb, ta, s2.b_in(), s2.a_in()};
  auto isect = iv_intersect(seg_param_iv(s1), i2);
  if (!isect) return out;
  if (isect->is_point()) {
    out.kind = SegIsect::point;
    out.p = s1.a + isect->lo * d1;
  } else {
    out.kind = SegIsect::segment;
    out.p = s1.a + isect->lo * d1;
    out.q = s1.a + isect->hi * d1;
    out.p_in = isect->lo_in;
    out.q_in = isect->hi_in;
  }
  return out;
}

SegIsect closed_segments_intersect(const Pt& a1, const Pt& b1, const Pt& a2, const Pt& b2) {
  if (a1 == b1 || a2 == b2) {
    // Degenerate (point) operands: handle directly.
    SegIsect out;
    auto on_closed = [](const Pt& p, const Pt& a, const Pt& b) {
      if (a == b) return p == a;
      Pt d = b - a, w = p - a;
      if (!parallel(d, w)) {
        bool zero = true;
        for (int i = 0; i < w.dim; ++i) zero = zero && sign(w[i]) == 0;
        if (!zero) return false;
      }
      Rat t = dot(w, d) / dot(d, d);
      return p == a + t * d && sign(t) >= 0 && cmp(t, Rat(1)) <= 0;
    };
    const Pt& p = (a1 == b1) ? a1 : a2;
    bool hit = (a1 == b1) ? on_closed(p, a2, b2) : on_closed(p, a1, b1);
    if (hit) { out.kind = SegIsect::point; out.p = p; }
    return out;
  }
  return segments_intersect(Segment{a1, b1, SegKind::closed},
                            Segment{a2, b2, SegKind::closed});
}

int affine_dim(const std::vector<Pt>& points) {
  if (points.empty()) return -1;
  int d = points[0].dim;
  std::vector<std::array<Rat, 3>> rows;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].dim != d) throw DimMismatch("affine_dim: mixed dimensions");
    Pt v = points[i] - points[0];
    rows.push_back(v.c);
  }
  int rank = 0;
  for (int col = 0; col < d && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (sign(rows[r][col]) != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || sign(rows[r][col]) == 0) continue;
      Rat f = rows[r][col] / rows[rank][col];
      for (int cc = 0; cc < d; ++cc) rows[r][cc] -= f * rows[rank][cc];
    }
    ++rank;
  }
  return rank;
}

std::optional<Iv> iv_intersect(const Iv& a, const Iv& b) {
  Iv r;
  int cl = cmp(a.lo, b.lo);
  r.lo = cl >= 0 ? a.lo : b.lo;
  r.lo_in = cl > 0 ? a.lo_in : (cl < 0 ? b.lo_in : (a.lo_in && b.lo_in));
  int ch = cmp(a.hi, b.hi);
  r.hi = ch <= 0 ? a.hi : b.hi;
  r.hi_in = ch < 0 ? a.hi_in : (ch > 0 ? b.hi_in : (a.hi_in && b.hi_in));
  if (!iv_valid(r)) return std::nullopt;
  return r;
}

bool iv_subset(const Iv& a, const Iv& b) {
  auto i = iv_intersect(a, b);
  return i && *i == a;
}

bool iv_disjoint(const Iv& a, const Iv& b) { return !iv_intersect(a, b); }

bool iv_mergeable(const Iv& a, const Iv& b) {
  if (!iv_disjoint(a, b)) return true;
  if (a.hi == b.lo && (a.hi_in || b.lo_in)) return true;
  if (b.hi == a.lo && (b.hi_in || a.lo_in)) return true;
  return false;
}

Iv iv_merge(const Iv& a, const Iv& b) {
  Iv r;
  int cl = cmp(a.lo, b.lo);
  r.lo = cl <= 0 ? a.lo : b.lo;
  r.lo_in = cl < 0 ? a.lo_in : (cl > 0 ? b.lo_in : (a.lo_in || b.lo_in));
  int ch = cmp(a.hi, b.hi);
  r.hi = ch >= 0 ? a.hi : b.hi;
  r.hi_in = ch > 0 ? a.hi_in : (ch < 0 ? b.hi_in : (a.hi_in || b.hi_in));
  return r;
}

std::vector<Iv> iv_set_normalize(std::vector<Iv> xs) {
  std::sort(xs.begin(), xs.end(), [](const Iv& a, const Iv& b) {
    int c = cmp(a.lo, b.lo);
    if (c != 0) return c < 0;
    if (a.lo_in != b.lo_in) return a.lo_in;
    return cmp(a.hi, b.hi) < 0;
  });
  std::vector<Iv> out;
  for (const Iv& x : xs) {
    if (!out.empty() && iv_mergeable(out.back(), x))
      out.back() = iv_merge(out.back(), x);
    else
      out.push_back(x);
  }
  return out;
}

std::vector<Iv> iv_set_subtract(const std::vector<Iv>& xs, const Iv& y) {
  std::vector<Iv> out;
  for (const Iv& x : xs) {
    if (iv_disjoint(x, y)) {
      out.push_back(x);
      continue;
    }
    int cl = cmp(y.lo, x.lo);
    if (cl > 0 || (cl == 0 && x.lo_in && !y.lo_in)) {
      Iv left{x.lo, y.lo, x.lo_in, !y.lo_in};
      if (cmp(left.hi, x.hi) == 0) left.hi_in = left.hi_in && x.hi_in;
      if (iv_valid(left)) out.push_back(left);
    }
    int ch = cmp(y.hi, x.hi);
    if (ch < 0 || (ch == 0 && x.hi_in && !y.hi_in)) {
      Iv right{y.hi, x.hi, !y.hi_in, x.hi_in};
      if (cmp(right.lo, x.lo) == 0) right.lo_in = right.lo_in && x.lo_in;
      if (iv_valid(right)) out.push_back(right);
    }
  }
  return out;
}

bool iv_set_contains(const std::vector<Iv>& xs, const Rat& t) {
  for (const Iv& x : xs)
    if (x.contains(t)) return true;
  return false;
}

bool iv_set_covers(const std::vector<Iv>& xs, const Iv& y) {
  std::vector<Iv> rem{y};
  for (const Iv& x : xs) {
    rem = iv_set_subtract(rem, x);
    if (rem.empty()) return true;
  }
  return rem.empty();
}

}  // namespace mcv
