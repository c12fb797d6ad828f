#include <doctest.h>

#include <algorithm>

#include "mcv/geom.hpp"
#include "mcv/polytope.hpp"
#include "test_util.hpp"

using namespace mcv;

namespace testutil {

bool in_convex_hull_lp(const std::vector<Pt>& pts, const Pt& p) {
  // Feasibility of: sum l_i * pts_i = p, sum l_i = 1, l >= 0.
  int d = p.dim;
  int m = static_cast<int>(pts.size());
  if (m == 0) return false;
  int rows = d + 1, cols = m + rows;  // variables + artificials
  std::vector<std::vector<Rat>> T(rows + 1, std::vector<Rat>(cols + 1, Rat(0)));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < m; ++j) T[i][j] = pts[j][i];
    T[i][cols] = p[i];
  }
  for (int j = 0; j < m; ++j) T[d][j] = 1;
  T[d][cols] = 1;
  for (int i = 0; i < rows; ++i)
    if (sign(T[i][cols]) < 0)
      for (int j = 0; j <= cols; ++j) T[i][j] = -T[i][j];
  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) {
    T[i][m + i] = 1;
    basis[i] = m + i;
  }
  // objective row: minimize sum of artificials -> reduced costs
  for (int j = 0; j <= cols; ++j) {
    Rat s = 0;
    for (int i = 0; i < rows; ++i) s += T[i][j];
    T[rows][j] = (j >= m && j < cols) ? s - 1 : s;
  }
  while (true) {
    int col = -1;
    for (int j = 0; j < cols; ++j)
      if (sign(T[rows][j]) > 0) { col = j; break; }  // Bland
    if (col < 0) break;
    int row = -1;
    for (int i = 0; i < rows; ++i) {
      if (sign(T[i][col]) <= 0) continue;
      if (row < 0) { row = i; continue; }
      Rat a = T[i][cols] / T[i][col], b = T[row][cols] / T[row][col];
      if (cmp(a, b) < 0 || (cmp(a, b) == 0 && basis[i] < basis[row])) row = i;
    }
    if (row < 0) break;  // unbounded (cannot happen here)
    Rat piv = T[row][col];
    for (int j = 0; j <= cols; ++j) T[row][j] /= piv;
    for (int i = 0; i <= rows; ++i) {
      if (i == row || sign(T[i][col]) == 0) continue;
      Rat f = T[i][col];
      for (int j = 0; j <= cols; ++j) T[i][j] -= f * T[row][j];
    }
    basis[row] = col;
  }
  return sign(T[rows][cols]) == 0;
}

}  // namespace testutil

namespace {
Pt P2(long x, long y) { return Pt(Rat(x), Rat(y)); }
Pt P3(long x, long y, long z) { return Pt(Rat(x), Rat(y), Rat(z)); }
}  // namespace

TEST_CASE("orientation2 basics") {
  CHECK(orientation2(P2(0, 0), P2(1, 0), P2(0, 1)) == 1);
  CHECK(orientation2(P2(0, 0), P2(1, 1), P2(2, 2)) == 0);
  CHECK(orientation2(P2(0, 0), P2(0, 1), P2(1, 0)) == -1);
  CHECK_THROWS_AS(orientation2(P2(0, 0), P2(1, 0), P3(0, 1, 0)), DimMismatch);
}

TEST_CASE("orientation2 antisymmetry (random)") {
  testutil::Rng rng(11);
  for (int it = 0; it < 200; ++it) {
    Pt p(rng.rat(5), rng.rat(5)), q(rng.rat(5), rng.rat(5)), r(rng.rat(5), rng.rat(5));
    CHECK(orientation2(p, q, r) == -orientation2(p, r, q));
  }
}

TEST_CASE("segment intersection: spec examples") {
  Segment s1{P2(0, 0), P2(2, 2), SegKind::open};
  Segment s2{P2(0, 2), P2(2, 0), SegKind::open};
  auto r = open_segments_intersect(s1, s2);
  REQUIRE(r.kind == SegIsect::point);
  CHECK(r.p == P2(1, 1));

  Segment s3{P2(0, 0), P2(1, 0), SegKind::open};
  Segment s4{P2(1, 0), P2(2, 0), SegKind::open};
  CHECK(open_segments_intersect(s3, s4).kind == SegIsect::empty);

  Segment s5{P2(0, 0), P2(4, 0), SegKind::open};
  Segment s6{P2(1, 0), P2(2, 0), SegKind::closed};
  auto r2 = open_segments_intersect(s5, s6);
  REQUIRE(r2.kind == SegIsect::segment);
  CHECK(r2.p == P2(1, 0));
  CHECK(r2.q == P2(2, 0));
  CHECK(r2.p_in);
  CHECK(r2.q_in);
}

TEST_CASE("segment intersection: open endpoint contact and 3D") {
  // endpoint-only contact of two open segments is empty even when crossing-like
  Segment a{P2(0, 0), P2(1, 1), SegKind::open};
  Segment b{P2(1, 1), P2(2, 0), SegKind::open};
  CHECK(segments_intersect(a, b).kind == SegIsect::empty);
  Segment ac{P2(0, 0), P2(1, 1), SegKind::closed};
  Segment bc{P2(1, 1), P2(2, 0), SegKind::closed};
  auto r = segments_intersect(ac, bc);
  REQUIRE(r.kind == SegIsect::point);
  CHECK(r.p == P2(1, 1));

  // skew 3D lines
  Segment u{P3(0, 0, 0), P3(1, 0, 0), SegKind::closed};
  Segment v{P3(0, 0, 1), P3(0, 1, 1), SegKind::closed};
  CHECK(segments_intersect(u, v).kind == SegIsect::empty);
  // crossing 3D segments
  Segment w{P3(0, 0, 0), P3(2, 2, 2), SegKind::closed};
  Segment x{P3(2, 0, 0), P3(0, 2, 2), SegKind::closed};
  auto r3 = segments_intersect(w, x);
  REQUIRE(r3.kind == SegIsect::point);
  CHECK(r3.p == P3(1, 1, 1));
}

TEST_CASE("segment intersection symmetric + parametric oracle (random)") {
  testutil::Rng rng(23);
  for (int it = 0; it < 300; ++it) {
    Pt a(rng.rat(3), rng.rat(3)), b(rng.rat(3), rng.rat(3));
    Pt c(rng.rat(3), rng.rat(3)), d(rng.rat(3), rng.rat(3));
    if (a == b || c == d) continue;
    auto kind1 = static_cast<SegKind>(rng.below(4));
    auto kind2 = static_cast<SegKind>(rng.below(4));
    Segment s1{a, b, kind1}, s2{c, d, kind2};
    auto r12 = segments_intersect(s1, s2);
    auto r21 = segments_intersect(s2, s1);
    CHECK(r12.kind == r21.kind);
    // brute parametric oracle on a fine rational grid
    bool found = false;
    for (int i = 0; i <= 24 && !found; ++i)
      for (int j = 0; j <= 24 && !found; ++j) {
        Rat t = testutil::frac(i, 24), u = testutil::frac(j, 24);
        Iv iv1{Rat(0), Rat(1), s1.a_in(), s1.b_in()};
        Iv iv2{Rat(0), Rat(1), s2.a_in(), s2.b_in()};
        if (!iv1.contains(t) || !iv2.contains(u)) continue;
        if (lerp(a, b, t) == lerp(c, d, u)) found = true;
      }
    if (r12.kind == SegIsect::empty) {
      CHECK_FALSE(found);
    }
    if (found) CHECK(r12.kind != SegIsect::empty);
  }
}

TEST_CASE("affine_dim") {
  CHECK(affine_dim({}) == -1);
  CHECK(affine_dim({P2(1, 2)}) == 0);
  CHECK(affine_dim({P2(1, 2), P2(3, 4)}) == 1);
  CHECK(affine_dim({P3(0, 0, 0), P3(1, 0, 0), P3(0, 1, 0), P3(1, 1, 0)}) == 2);
  CHECK(affine_dim({P3(0, 0, 0), P3(1, 0, 0), P3(0, 1, 0), P3(0, 0, 1)}) == 3);
}

TEST_CASE("interval set algebra") {
  Iv a{Rat(0), Rat(1), false, false};
  Iv b{Rat(1, 2), Rat(2), true, true};
  auto i = iv_intersect(a, b);
  REQUIRE(i);
  CHECK(*i == Iv{Rat(1, 2), Rat(1), true, false});
  CHECK(iv_subset(*i, a));
  CHECK(iv_subset(*i, b));

  Iv c{Rat(0), Rat(1, 2), false, false};
  Iv d{Rat(1, 2), Rat(1), false, false};
  CHECK(iv_disjoint(c, d));
  CHECK_FALSE(iv_mergeable(c, d));
  Iv dpt{Rat(1, 2), Rat(1, 2), true, true};
  CHECK(iv_mergeable(c, dpt));
  CHECK(iv_merge(iv_merge(c, dpt), d) == Iv{Rat(0), Rat(1), false, false});

  auto norm = iv_set_normalize({d, dpt, c});
  REQUIRE(norm.size() == 1);
  CHECK(norm[0] == Iv{Rat(0), Rat(1), false, false});

  auto sub = iv_set_subtract({Iv{Rat(0), Rat(1), true, true}}, dpt);
  REQUIRE(sub.size() == 2);
  CHECK(sub[0] == Iv{Rat(0), Rat(1, 2), true, false});
  CHECK(sub[1] == Iv{Rat(1, 2), Rat(1), false, true});

  CHECK(iv_set_covers({c, dpt, d}, Iv{Rat(1, 4), Rat(3, 4), true, true}));
  CHECK_FALSE(iv_set_covers({c, d}, Iv{Rat(1, 4), Rat(3, 4), true, true}));
}

TEST_CASE("convex_hull 2D basics") {
  auto P = convex_hull({P2(0, 0), P2(1, 0), P2(0, 1), Pt(Rat(1, 4), Rat(1, 4))});
  CHECK(P.dim == 2);
  REQUIRE(P.verts.size() == 3);
  CHECK(P.verts[0] == P2(0, 0));  // lex min first, ccw

  auto S = convex_hull({P2(0, 0), P2(1, 0), P2(2, 0)});
  CHECK(S.dim == 1);
  REQUIRE(S.verts.size() == 2);
  CHECK(S.verts[0] == P2(0, 0));
  CHECK(S.verts[1] == P2(2, 0));
}

TEST_CASE("convex_hull cube") {
  std::vector<Pt> corners;
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y)
      for (int z = 0; z <= 1; ++z) corners.push_back(P3(x, y, z));
  corners.push_back(P3(0, 0, 0));  // duplicate, should be harmless
  auto P = convex_hull(corners);
  CHECK(P.dim == 3);
  CHECK(P.verts.size() == 8);
  CHECK(P.facet_cycles.size() == 6);
  for (const auto& cyc : P.facet_cycles) CHECK(cyc.size() == 4);
  // every vertex satisfies every facet halfspace
  for (const Pt& v : P.verts)
    for (const auto& h : P.facet_planes) CHECK(sign(dot(h.n, v) - h.off) <= 0);
}

TEST_CASE("convex_hull idempotent + vertex oracle (random)") {
  testutil::Rng rng(47);
  for (int it = 0; it < 40; ++it) {
    int dim = it % 2 == 0 ? 2 : 3;
    int n = 3 + static_cast<int>(rng.below(10));
    std::vector<Pt> pts;
    for (int i = 0; i < n; ++i) {
      if (dim == 2)
        pts.push_back(Pt(rng.rat(4), rng.rat(4)));
      else
        pts.push_back(Pt(rng.rat(3), rng.rat(3), rng.rat(3)));
    }
    auto P = convex_hull(pts);
    auto Q = convex_hull(P.verts);
    CHECK(P.verts == Q.verts);
    CHECK(P.facet_cycles == Q.facet_cycles);

    // brute-force vertex characterization via exact LP
    std::vector<Pt> uniq = pts;
    std::sort(uniq.begin(), uniq.end(), lex_less);
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<Pt> expect;
    for (const Pt& p : uniq) {
      std::vector<Pt> others;
      for (const Pt& q : uniq)
        if (!(q == p)) others.push_back(q);
      if (!testutil::in_convex_hull_lp(others, p)) expect.push_back(p);
    }
    std::vector<Pt> got = P.verts;
    std::sort(got.begin(), got.end(), lex_less);
    CHECK(got == expect);
  }
}

TEST_CASE("degenerate hulls in 3D") {
  auto F = convex_hull({P3(0, 0, 0), P3(1, 0, 0), P3(0, 1, 0), P3(1, 1, 0)});
  CHECK(F.dim == 2);
  CHECK(F.verts.size() == 4);
  REQUIRE(F.affine_eqs.size() == 1);
  for (const Pt& v : F.verts) CHECK(dot(F.affine_eqs[0].n, v) == F.affine_eqs[0].off);

  auto E = convex_hull({P3(0, 0, 0), P3(1, 1, 1), P3(2, 2, 2)});
  CHECK(E.dim == 1);
  CHECK(E.verts.size() == 2);
  CHECK(E.affine_eqs.size() == 2);
}
