#include <doctest.h>

#include <algorithm>
#include <set>

#include "mcv/gadgets.hpp"
#include "mcv/solver.hpp"
#include "test_util.hpp"

using namespace mcv;
using testutil::frac;
using testutil::Rng;

namespace {

std::vector<std::vector<Rat>> sets(std::vector<std::vector<Rat>> xs) { return xs; }

SimplicialComplex close_down(int n, std::vector<std::vector<int>> faces) {
  std::set<std::vector<int>> all(faces.begin(), faces.end());
  all.insert(std::vector<int>{});
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& f : std::vector<std::vector<int>>(all.begin(), all.end()))
      for (size_t i = 0; i < f.size(); ++i) {
        std::vector<int> g = f;
        g.erase(g.begin() + i);
        grew |= all.insert(g).second;
      }
  }
  return SimplicialComplex{n, {all.begin(), all.end()}};
}

bool has_face(const std::vector<std::vector<int>>& fs, const std::vector<int>& f) {
  return std::find(fs.begin(), fs.end(), f) != fs.end();
}

}  // namespace

TEST_CASE("gen_cc_scene builds the expected polygon and blocks") {
  auto g = gen_cc_scene(2, sets({{frac(1, 2)}, {frac(1, 3), frac(2, 3)}}));
  const Scene& S = *g.scene;
  REQUIRE(S.C.verts.size() == 5);
  CHECK(S.C.verts[0] == Pt(Rat(-1), Rat(10)));
  CHECK(S.C.verts[1] == Pt(Rat(0), Rat(0)));
  CHECK(S.C.verts[2] == Pt(Rat(1), Rat(1)));
  CHECK(S.C.verts[3] == Pt(Rat(2), Rat(4)));
  CHECK(S.C.verts[4] == Pt(Rat(3), Rat(10)));
  CHECK(validate_scene(S).empty());

  REQUIRE(g.blocks.size() == 2);
  CHECK(S.edge_point(g.blocks[0].edge_fid, frac(1, 2)) ==
        Pt(frac(1, 2), frac(1, 2)));
  CHECK(g.blocks[1].params == std::vector<Rat>{frac(1, 3), frac(2, 3)});
  CHECK(S.edge_point(g.blocks[1].edge_fid, frac(1, 3)) == Pt(frac(4, 3), Rat(2)));

  // block points sit in the relative interiors of the intended edges
  for (const auto& b : g.blocks)
    for (const Rat& t : b.params) {
      CHECK(sign(t) > 0);
      CHECK(t < 1);
      CHECK(locate_face(S.L, S.edge_point(b.edge_fid, t)) == b.edge_fid);
    }

  // every decoration piece is an isolated point
  for (const auto& [eid, dec] : S.edges)
    for (const Iv& piece : dec.pieces) CHECK(piece.is_point());

  CHECK_THROWS_AS(gen_cc_scene(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(gen_cc_scene(2, sets({{frac(1, 2)}})), std::invalid_argument);
  CHECK_THROWS_AS(gen_cc_scene(1, sets({{}})), std::invalid_argument);
  CHECK_THROWS_AS(gen_cc_scene(1, sets({{Rat(1)}})), std::invalid_argument);
  CHECK_THROWS_AS(gen_cc_scene(1, sets({{Rat(0)}})), std::invalid_argument);
}

TEST_CASE("cc gadget passes the choice conditions exactly") {
  auto g = gen_cc_scene(
      3, sets({{frac(1, 2)}, {frac(1, 4), frac(3, 4)}, {frac(2, 5)}}));
  auto rep = verify_conditions(g, 0);
  CHECK(rep.ok);
  CHECK(rep.violations.empty());
}

TEST_CASE("cc gadget solves and extracts the first choice per block") {
  auto g = gen_cc_scene(2, sets({{frac(1, 2)}, {frac(1, 3), frac(2, 3)}}));
  ConvexWitness w = solve2d(*g.scene);
  auto chk = witness_check(*g.scene, w);
  CHECK(chk.contained);
  CHECK(chk.convex);
  CHECK(verify_maximal(*g.scene, w).maximal);
  auto choice = extract_choice(g, w);
  REQUIRE(choice.size() == 2);
  CHECK(choice[0] == frac(1, 2));
  CHECK(choice[1] == frac(1, 3));
}

TEST_CASE("cc gadget round trip on random instances") {
  Rng rng(71);
  for (int iter = 0; iter < 10; ++iter) {
    int N = 1 + (int)rng.below(4);
    std::vector<std::vector<Rat>> choices(N);
    for (auto& cs : choices) {
      std::set<Rat> vals;
      int k = 1 + (int)rng.below(3);
      while ((int)vals.size() < k) vals.insert(rng.unit_rat());
      cs = {vals.begin(), vals.end()};
    }
    auto g = gen_cc_scene(N, choices);
    CHECK(verify_conditions(g, 0).ok);
    ConvexWitness w = solve2d(*g.scene);
    CHECK(witness_check(*g.scene, w).convex);
    auto choice = extract_choice(g, w);
    REQUIRE((int)choice.size() == N);
    for (int n = 0; n < N; ++n) CHECK(choice[n] == choices[n].front());
  }
}

TEST_CASE("corrupted decoration trips condition (2) with a witness") {
  auto g = gen_cc_scene(2, sets({{frac(1, 2)}, {frac(1, 3), frac(2, 3)}}));
  g.scene->edges[g.blocks[1].edge_fid].pieces = {
      Iv{frac(1, 3), frac(2, 3), true, true}};
  auto rep = verify_conditions(g, 0);
  CHECK_FALSE(rep.ok);
  REQUIRE(!rep.violations.empty());
  bool mentions_two = false;
  for (const auto& v : rep.violations)
    mentions_two |= v.find("condition (2)") != std::string::npos;
  CHECK(mentions_two);
}

TEST_CASE("prism gadget solves to one height per vertical edge") {
  auto g = gen_unif_prism(3, sets({{frac(1, 2)}, {frac(1, 4)}, {frac(3, 4)}}));
  const Scene& S = *g.scene;
  CHECK(S.C.verts.size() == 6);
  CHECK(validate_scene(S).empty());
  CHECK(verify_conditions(g, 0).ok);

  ConvexWitness w = solve3d(S);
  auto chk = witness_check(S, w);
  CHECK(chk.contained);
  CHECK(chk.convex);
  auto choice = extract_choice(g, w);
  REQUIRE(choice.size() == 3);
  CHECK(choice[0] == frac(1, 2));
  CHECK(choice[1] == frac(1, 4));
  CHECK(choice[2] == frac(3, 4));
}

TEST_CASE("prism two-point block breaks the tie toward the first component") {
  auto g = gen_unif_prism(
      4, sets({{frac(1, 3), frac(2, 3)}, {frac(1, 2)}, {frac(1, 2)}, {frac(1, 2)}}));
  CHECK(verify_conditions(g, 0).ok);
  ConvexWitness w = solve3d(*g.scene);
  auto choice = extract_choice(g, w);
  REQUIRE(choice.size() == 4);
  CHECK(choice[0] == frac(1, 3));
}

TEST_CASE("prism gadget round trip on random instances") {
  Rng rng(72);
  for (int iter = 0; iter < 5; ++iter) {
    int m = 3 + (int)rng.below(3);
    std::vector<std::vector<Rat>> choices(m);
    for (auto& cs : choices) {
      std::set<Rat> vals;
      int k = 1 + (int)rng.below(2);
      while ((int)vals.size() < k) vals.insert(rng.unit_rat());
      cs = {vals.begin(), vals.end()};
    }
    auto g = gen_unif_prism(m, choices);
    CHECK(verify_conditions(g, 0).ok);
    ConvexWitness w = solve3d(*g.scene);
    CHECK(witness_check(*g.scene, w).convex);
    auto choice = extract_choice(g, w);
    REQUIRE((int)choice.size() == m);
    for (int j = 0; j < m; ++j) CHECK(choice[j] == g.blocks[j].source.front());
  }
}

TEST_CASE("shrinking the kernel region is caught by the verifier") {
  auto g = gen_unif_prism(3, sets({{frac(1, 2)}, {frac(1, 4)}, {frac(3, 4)}}));
  REQUIRE(g.kernel_faces.size() == 5);
  g.kernel_faces.pop_back();
  auto rep = verify_conditions(g, 0);
  CHECK_FALSE(rep.ok);
  // chords between blocks on the dropped facet now leave the declared D
  bool three = false;
  for (const auto& v : rep.violations)
    three |= v.find("condition (3)") != std::string::npos;
  CHECK(three);
}

TEST_CASE("extraction failure on an incomplete witness is a soundness error") {
  auto g = gen_unif_prism(3, sets({{frac(1, 2)}, {frac(1, 4)}, {frac(3, 4)}}));
  ConvexWitness w = solve3d(*g.scene);
  w.edge_sel.erase(g.blocks[0].edge_fid);
  CHECK_THROWS_AS(extract_choice(g, w), std::logic_error);
}

TEST_CASE("simplicial complex validation and maximal faces") {
  SimplicialComplex bad1{3, {{0}, {1}}};
  CHECK(validate_complex(bad1).has_value());  // empty face missing
  SimplicialComplex bad2{3, {{}, {0, 1}}};
  CHECK(validate_complex(bad2).has_value());  // not downward closed
  SimplicialComplex bad3{3, {{}, {1, 0}}};
  CHECK(validate_complex(bad3).has_value());  // unsorted members

  auto K = close_down(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK_FALSE(validate_complex(K).has_value());
  auto mf = maximal_faces(K);
  REQUIRE(mf.size() == 3);
  CHECK(mf[0] == std::vector<int>{0, 1});
  CHECK(mf[1] == std::vector<int>{0, 2});
  CHECK(mf[2] == std::vector<int>{1, 2});
}

TEST_CASE("sc gadget: full complex yields the whole simplex") {
  auto K = close_down(3, {{0, 1, 2}});
  auto g = gen_sc_scene(K);
  REQUIRE(g.scene.has_value());
  CHECK(validate_scene(*g.scene).empty());
  auto w = solve_sc(g);
  REQUIRE(w.size() == 4);
  CHECK(sc_support(g, w) == std::vector<int>{0, 1, 2});

  ConvexWitness sw = solve_scene(*g.scene);
  CHECK(witness_check(*g.scene, sw).convex);
  CHECK(sw.complement.empty());
}

TEST_CASE("sc gadget: boundary complexes pick a closed facet") {
  auto K3 = close_down(3, {{0, 1}, {0, 2}, {1, 2}});
  auto g3 = gen_sc_scene(K3);
  CHECK_FALSE(g3.scene.has_value());
  auto w3 = solve_sc(g3);
  REQUIRE(w3.size() == 3);
  CHECK(w3[0] == Pt(Rat(0), Rat(0)));
  CHECK(w3[1] == Pt(Rat(1), Rat(0)));
  CHECK(w3[2] == Pt(frac(1, 2), Rat(0)));
  CHECK(sc_support(g3, w3) == std::vector<int>{0, 1});

  auto K4 = close_down(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  auto g4 = gen_sc_scene(K4);
  auto w4 = solve_sc(g4);
  CHECK(sc_support(g4, w4) == std::vector<int>{0, 1, 2});

  auto K0 = close_down(3, {});
  auto g0 = gen_sc_scene(K0);
  CHECK(solve_sc(g0).empty());
  CHECK(sc_support(g0, {}).empty());

  CHECK_THROWS_AS(gen_sc_scene(SimplicialComplex{2, {{}}}), std::invalid_argument);
  CHECK_THROWS_AS(gen_sc_scene(SimplicialComplex{3, {{0, 1}}}), std::invalid_argument);
}

TEST_CASE("sc round trip: exhaustive complexes on three vertices") {
  std::vector<std::vector<int>> pool = {{0}, {1}, {2},      {0, 1},
                                        {0, 2}, {1, 2}, {0, 1, 2}};
  int tested = 0;
  for (int mask = 0; mask < (1 << 7); ++mask) {
    std::vector<std::vector<int>> faces = {{}};
    for (int b = 0; b < 7; ++b)
      if (mask & (1 << b)) faces.push_back(pool[b]);
    std::sort(faces.begin(), faces.end());
    SimplicialComplex K{3, faces};
    if (validate_complex(K)) continue;
    ++tested;
    auto g = gen_sc_scene(K);
    auto supp = sc_support(g, solve_sc(g));
    CHECK(has_face(maximal_faces(K), supp));
  }
  CHECK(tested >= 10);
}

TEST_CASE("sc round trip: random complexes on four vertices") {
  Rng rng(73);
  std::vector<std::vector<int>> pool;
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<int> f;
    for (int v = 0; v < 4; ++v)
      if (mask & (1 << v)) f.push_back(v);
    pool.push_back(f);
  }
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<std::vector<int>> gen;
    for (const auto& f : pool)
      if (rng.below(3) == 0) gen.push_back(f);
    SimplicialComplex K = close_down(4, gen);
    REQUIRE_FALSE(validate_complex(K).has_value());
    auto g = gen_sc_scene(K);
    auto supp = sc_support(g, solve_sc(g));
    CHECK(has_face(maximal_faces(K), supp));
  }
}

TEST_CASE("ac instance: predicates and sampled conditions") {
  auto g = gen_ac_instance({1, 1});
  CHECK(g.ac_dim == 2);
  CHECK(g.ac_in_D({Rat(1), Rat(2)}));
  CHECK_FALSE(g.ac_in_D({Rat(1), Rat(0)}));
  CHECK(g.ac_in_X({Rat(1), Rat(0)}));  // a unit vector
  CHECK_FALSE(g.ac_in_X({Rat(2), Rat(0)}));
  CHECK(verify_conditions(g, 25).ok);

  // single set: the midpoint of two same-block unit vectors must leave X
  auto g1 = gen_ac_instance({2});
  CHECK_FALSE(g1.ac_in_X({frac(1, 2), frac(1, 2)}));
  CHECK(verify_conditions(g1, 25).ok);

  auto g2 = gen_ac_instance({2, 3});
  CHECK(verify_conditions(g2, 400).ok);  // > 10^4 sampled chord points

  CHECK_THROWS_AS(gen_ac_instance({}), std::invalid_argument);
  CHECK_THROWS_AS(gen_ac_instance({2, 0}), std::invalid_argument);
}

TEST_CASE("ac extraction through a membership oracle") {
  auto g = gen_ac_instance({2, 3});
  auto unit = [&](int c) {
    VecQ v(g.ac_dim, Rat(0));
    v[c] = 1;
    return v;
  };
  auto in_w = [&](const VecQ& p) {
    return g.ac_in_D(p) || p == unit(g.ac_blocks[0][1]) || p == unit(g.ac_blocks[1][0]);
  };
  auto choice = extract_choice(g, in_w);
  REQUIRE(choice.size() == 2);
  CHECK(choice[0] == 1);
  CHECK(choice[1] == 0);

  auto both = [&](const VecQ& p) {
    return in_w(p) || p == unit(g.ac_blocks[0][0]);
  };
  CHECK_THROWS_AS(extract_choice(g, both), std::logic_error);
  auto none = [&](const VecQ& p) { return g.ac_in_D(p); };
  CHECK_THROWS_AS(extract_choice(g, none), std::logic_error);
}
