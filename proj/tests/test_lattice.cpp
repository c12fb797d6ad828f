#include <doctest.h>

#include <algorithm>

#include "mcv/polytope.hpp"
#include "test_util.hpp"

using namespace mcv;

namespace {

Pt P2(long x, long y) { return Pt(Rat(x), Rat(y)); }
Pt P3(long x, long y, long z) { return Pt(Rat(x), Rat(y), Rat(z)); }

FaceLattice unit_square() {
  return enumerate_faces(convex_hull({P2(0, 0), P2(1, 0), P2(1, 1), P2(0, 1)}));
}

FaceLattice unit_cube() {
  std::vector<Pt> c;
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y)
      for (int z = 0; z <= 1; ++z) c.push_back(P3(x, y, z));
  return enumerate_faces(convex_hull(c));
}

int count_dim(const FaceLattice& L, int d) {
  int n = 0;
  for (const auto& f : L.faces)
    if (f.dim == d && f.id != L.top) ++n;
  return n;
}

Pt rand_in_hull(testutil::Rng& rng, const std::vector<Pt>& verts) {
  std::vector<Rat> w;
  Rat tot = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    Rat x = testutil::frac(static_cast<long>(rng.below(8)),
                           1 + static_cast<long>(rng.below(3)));
    w.push_back(x);
    tot += x;
  }
  if (sign(tot) == 0) { w[0] = 1; tot = 1; }
  Pt p;
  p.dim = verts[0].dim;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (int k = 0; k < p.dim; ++k) p[k] += w[i] / tot * verts[i][k];
  return p;
}

std::vector<Polytope> random_polytopes(int count, std::uint64_t seed) {
  testutil::Rng rng(seed);
  std::vector<Polytope> out;
  while (static_cast<int>(out.size()) < count) {
    int dim = out.size() % 2 == 0 ? 2 : 3;
    int n = 4 + static_cast<int>(rng.below(8));
    std::vector<Pt> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back(dim == 2 ? Pt(rng.rat(5), rng.rat(5))
                             : Pt(rng.rat(3), rng.rat(3), rng.rat(3)));
    Polytope P = convex_hull(pts);
    if (P.dim < 1) continue;
    out.push_back(P);
  }
  return out;
}

}  // namespace

TEST_CASE("enumerate_faces counts: square, cube, segment") {
  auto S = unit_square();
  CHECK(count_dim(S, 0) == 4);
  CHECK(count_dim(S, 1) == 4);
  CHECK(S.faces[S.top].dim == 2);

  auto C = unit_cube();
  CHECK(count_dim(C, 0) == 8);
  CHECK(count_dim(C, 1) == 12);
  CHECK(count_dim(C, 2) == 6);
  CHECK(8 - 12 + 6 == 2);

  auto E = enumerate_faces(convex_hull({P2(0, 0), P2(2, 0)}));
  CHECK(count_dim(E, 0) == 2);
  CHECK(E.faces[E.top].dim == 1);
  CHECK(E.n_faces() == 3);
}

TEST_CASE("face_join spec examples") {
  auto S = unit_square();
  // vertex 0 = (0,0); find the edge containing vertices 0 and 1
  int e01 = S.by_verts.at({0, 1});
  CHECK(face_join(S, 0, e01) == e01);
  // opposite corners of the square -> C
  int v_opp = -1;
  for (int v = 0; v < 4; ++v)
    if (S.vertex(v) == P2(1, 1)) v_opp = v;
  REQUIRE(v_opp >= 0);
  CHECK(face_join(S, 0, v_opp) == S.top);

  auto C = unit_cube();
  // two non-adjacent edges of the bottom facet z=0: verts 0=(0,0,0),2=(0,1,0),4=(1,0,0),6=(1,1,0)
  int a = C.by_verts.at({0, 4});
  int b = C.by_verts.at({2, 6});
  int j = face_join(C, a, b);
  CHECK(C.faces[j].dim == 2);
  CHECK(C.faces[j].verts == std::vector<int>{0, 2, 4, 6});
  CHECK_THROWS_AS(face_join(C, 0, 999), std::out_of_range);
}

TEST_CASE("locate_face spec examples") {
  auto S = unit_square();
  CHECK(locate_face(S, Pt(Rat(1, 2), Rat(1, 2))) == S.top);
  int f = locate_face(S, Pt(Rat(1, 2), Rat(0)));
  CHECK(S.faces[f].dim == 1);
  CHECK(locate_face(S, P2(2, 2)) == -1);
  CHECK(locate_face(S, P2(0, 0)) == 0);
}

TEST_CASE("locate_face on degenerate polytopes") {
  auto E = enumerate_faces(convex_hull({P3(0, 0, 0), P3(2, 2, 2)}));
  CHECK(locate_face(E, P3(1, 1, 1)) == E.top);
  CHECK(locate_face(E, P3(0, 0, 0)) == 0);
  CHECK(locate_face(E, P3(3, 3, 3)) == -1);
  CHECK(locate_face(E, P3(1, 1, 0)) == -1);

  auto F = enumerate_faces(convex_hull({P3(0, 0, 0), P3(1, 0, 0), P3(0, 1, 0), P3(1, 1, 0)}));
  CHECK(locate_face(F, Pt(Rat(1, 2), Rat(1, 2), Rat(0))) == F.top);
  CHECK(locate_face(F, Pt(Rat(1, 2), Rat(1, 2), Rat(1))) == -1);
  int e = locate_face(F, Pt(Rat(1, 2), Rat(0), Rat(0)));
  CHECK(F.faces[e].dim == 1);
}

TEST_CASE("lattice invariants on random polytopes") {
  testutil::Rng rng(99);
  for (const Polytope& P : random_polytopes(24, 321)) {
    FaceLattice L = enumerate_faces(P);
    // rint_point of every face locates back to that face
    for (const Face& f : L.faces) CHECK(locate_face(L, L.rint_point(f.id)) == f.id);
    // proper faces sit strictly below the top dimension
    for (const Face& f : L.faces)
      if (f.id != L.top) CHECK(f.dim < P.dim);
    // Euler relation for 3-polytopes
    if (P.dim == 3)
      CHECK(count_dim(L, 0) - count_dim(L, 1) + count_dim(L, 2) == 2);
    // random closure points always locate somewhere
    for (int s = 0; s < 40; ++s)
      CHECK(locate_face(L, rand_in_hull(rng, P.verts)) != -1);
    // face-of-face: sub-polytope faces appear in the parent lattice
    for (const Face& f : L.faces) {
      if (f.dim < 1 || f.id == L.top) continue;
      std::vector<Pt> fv;
      for (int v : f.verts) fv.push_back(P.verts[v]);
      Polytope sub = convex_hull(fv);
      FaceLattice subL = enumerate_faces(sub);
      for (const Face& g : subL.faces) {
        std::vector<int> mapped;
        for (int v : g.verts)
          for (int w : f.verts)
            if (P.verts[w] == sub.verts[v]) mapped.push_back(w);
        std::sort(mapped.begin(), mapped.end());
        CHECK(L.by_verts.count(mapped));
      }
    }
  }
}

TEST_CASE("join laws and join-segment property") {
  testutil::Rng rng(7);
  for (const Polytope& P : random_polytopes(10, 555)) {
    if (P.dim < 2) continue;
    FaceLattice L = enumerate_faces(P);
    int n = L.n_faces();
    for (int f = 0; f < n; ++f) {
      CHECK(face_join(L, f, f) == f);
      for (int g = 0; g < n; ++g) CHECK(face_join(L, f, g) == face_join(L, g, f));
    }
    for (int t = 0; t < 200; ++t) {
      int f = static_cast<int>(rng.below(n));
      int g = static_cast<int>(rng.below(n));
      int h = static_cast<int>(rng.below(n));
      CHECK(face_join(L, face_join(L, f, g), h) == face_join(L, f, face_join(L, g, h)));
    }
    for (int t = 0; t < 100; ++t) {
      int f = static_cast<int>(rng.below(n));
      int g = static_cast<int>(rng.below(n));
      Pt p = L.rint_point(f), q = L.rint_point(g);
      if (p == q) continue;
      CHECK(rint_segment_face(L, f, g, p, q));
    }
  }
}

TEST_CASE("projection_window examples") {
  auto C = unit_cube();
  Pt center(Rat(1, 2), Rat(1, 2), Rat(1, 2));

  auto w1 = projection_window(C, center, Pt(Rat(1, 2), Rat(1, 2), Rat(1)));
  REQUIRE(w1.facet_ids.size() == 1);
  CHECK(C.faces[w1.facet_ids[0]].verts == std::vector<int>{1, 3, 5, 7});  // z=1 facet

  auto w2 = projection_window(C, center, P3(1, 1, 1));
  CHECK(w2.facet_ids.size() == 3);
  for (int fid : w2.facet_ids) {
    auto& vs = C.faces[fid].verts;
    bool has7 = std::find(vs.begin(), vs.end(), 7) != vs.end();
    CHECK(has7);  // all three contain the vertex (1,1,1)
  }

  auto T = enumerate_faces(convex_hull({P3(0, 0, 0), P3(4, 0, 0), P3(0, 4, 0), P3(0, 0, 4)}));
  Pt cen(Rat(1), Rat(1), Rat(1));
  // centroid of facet {(4,0,0),(0,4,0),(0,0,4)}
  Pt fc(Rat(4, 3), Rat(4, 3), Rat(4, 3));
  auto w3 = projection_window(T, cen, fc);
  REQUIRE(w3.facet_ids.size() == 1);

  CHECK_THROWS_AS(projection_window(C, P3(5, 5, 5), P3(1, 1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(projection_window(C, center, center), std::invalid_argument);
}
