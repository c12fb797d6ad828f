#include "mcv/poly2.hpp"

namespace mcv {

Rat poly_area2(const std::vector<Pt>& poly) {
  Rat a = 0;
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) a += cross2(poly[i], poly[(i + 1) % n]);
  return a;
}

std::vector<Pt> poly_clip(const std::vector<Pt>& poly, const Pt& n, const Rat& off) {
  std::vector<Pt> out;
  int m = static_cast<int>(poly.size());
  if (m == 0) return out;
  for (int i = 0; i < m; ++i) {
    const Pt& cur = poly[i];
    const Pt& nxt = poly[(i + 1) % m];
    Rat dc = dot(n, cur) - off, dn = dot(n, nxt) - off;
    if (sign(dc) <= 0) out.push_back(cur);
    if ((sign(dc) < 0 && sign(dn) > 0) || (sign(dc) > 0 && sign(dn) < 0)) {
      Rat t = dc / (dc - dn);
      out.push_back(lerp(cur, nxt, t));
    }
  }
  std::vector<Pt> dedup;
  for (const Pt& p : out)
    if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(p);
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  return dedup;
}

std::vector<Pt> poly_intersect(const std::vector<Pt>& a, const std::vector<Pt>& b) {
  std::vector<Pt> cur = a;
  int m = static_cast<int>(b.size());
  if (m == 1) {  // single point: intersection is that point if inside a
    if (!cur.empty() && point_vs_convex_polygon(a, b[0]) >= 0) return {b[0]};
    return {};
  }
  for (int i = 0; i < m && !cur.empty(); ++i) {
    if (m == 2 && i == 1) break;  // segment: the reverse edge would repeat
    Pt e = b[(i + 1) % m] - b[i];
    Pt n(e[1], Rat(-1) * e[0]);
    cur = poly_clip(cur, n, dot(n, b[i]));
  }
  if (m == 2) {  // segment: also clip to the strip around the segment line
    Pt e = b[1] - b[0];
    Pt n(e[1], Rat(-1) * e[0]);
    cur = poly_clip(cur, Pt(Rat(-1) * n[0], Rat(-1) * n[1]), Rat(-1) * dot(n, b[0]));
    // and to the two endpoint halfplanes along the segment direction
    cur = poly_clip(cur, Pt(Rat(-1) * e[0], Rat(-1) * e[1]), Rat(-1) * dot(e, b[0]));
    cur = poly_clip(cur, e, dot(e, b[1]));
  }
  return cur;
}

int point_vs_convex_polygon(const std::vector<Pt>& poly, const Pt& p) {
  int n = static_cast<int>(poly.size());
  if (n == 0) return -1;
  if (n == 1) return poly[0] == p ? 0 : -1;
  if (n == 2) {
    auto r = closed_segments_intersect(poly[0], poly[1], p, p);
    return r.kind == SegIsect::empty ? -1 : 0;
  }
  bool on_edge = false;
  for (int i = 0; i < n; ++i) {
    int o = orientation2(poly[i], poly[(i + 1) % n], p);
    if (o < 0) return -1;
    if (o == 0) on_edge = true;
  }
  return on_edge ? 0 : 1;
}

bool poly_interiors_disjoint(const std::vector<Pt>& a, const std::vector<Pt>& b) {
  if (a.size() < 3 || b.size() < 3) return true;  // no interior at all
  std::vector<Pt> r = poly_intersect(a, b);
  std::vector<Pt> pts(r.begin(), r.end());
  return affine_dim(pts) < 2;
}

}  // namespace mcv
