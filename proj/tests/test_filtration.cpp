#include <doctest.h>

#include <algorithm>

#include "mcv/filtration.hpp"
#include "test_util.hpp"

using namespace mcv;

namespace {

Pt P2(long x, long y) { return Pt(Rat(x), Rat(y)); }
Pt P3(long x, long y, long z) { return Pt(Rat(x), Rat(y), Rat(z)); }

Iv open01() { return Iv{Rat(0), Rat(1), false, false}; }

SceneData square_data() {
  SceneData d;
  d.dim = 2;
  d.vertices = {P2(0, 0), P2(1, 0), P2(1, 1), P2(0, 1)};
  d.vertex_flags = {false, false, false, false};
  return d;
}

SceneData cube_data() {
  SceneData d;
  d.dim = 3;
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y)
      for (int z = 0; z <= 1; ++z) d.vertices.push_back(P3(x, y, z));
  return d;
}

FaceLattice lattice_of(const std::vector<Pt>& pts) {
  return enumerate_faces(convex_hull(pts));
}

// First-connected-component chooser: per edge, merge the decoration run
// starting at the first piece; facets full when fully decorated; vertices
// selected when flagged and addable.
StageSelection basic_choice(const Scene& S, const ConvexWitness& w,
                            const std::vector<int>& added, int) {
  StageSelection sel;
  for (int f : added) {
    if (f == S.L.top) continue;
    const Face& face = S.L.faces[f];
    if (face.dim == 1) {
      const EdgeDecoration* dec = S.edge_dec(f);
      if (!dec || dec->pieces.empty()) continue;
      Iv run = dec->pieces[0];
      for (std::size_t i = 1; i < dec->pieces.size(); ++i) {
        if (!iv_mergeable(run, dec->pieces[i])) break;
        run = iv_merge(run, dec->pieces[i]);
      }
      sel.edge_sel[f] = run;
    } else if (face.dim == 2 && S.C.dim == 3) {
      const FacetDecoration* dec = S.facet_dec(f);
      if (dec && dec->mode == FacetDecoration::Mode::full)
        sel.facet_sel[f] = FacetSel{FacetSel::Kind::full, -1};
    } else if (face.dim == 0) {
      int vid = face.verts[0];
      if (S.vertex_flags[vid] && vertex_addable(S, w, vid)) sel.verts.push_back(vid);
    }
  }
  return sel;
}

std::vector<std::size_t> added_sizes(const FaceFiltration& F) {
  std::vector<std::size_t> out;
  for (const auto& a : F.added_per_stage) out.push_back(a.size());
  return out;
}

}  // namespace

TEST_CASE("face filtration builders: stage shapes") {
  // square: {C}; +4 edges; +none; one vertex per stage
  FaceLattice sq = lattice_of(square_data().vertices);
  FaceFiltration F = build_face_filtration_2d(sq);
  CHECK(added_sizes(F) == std::vector<std::size_t>{1, 4, 0, 1, 1, 1, 1});
  CHECK(F.added(0) == std::vector<int>{sq.top});
  for (int i = 0; i < 4; ++i) CHECK(F.added(3 + i) == std::vector<int>{i});
  CHECK(check_fine(F, sq));
  CHECK(static_cast<int>(F.stage_faces(F.n_stages() - 1).size()) == sq.n_faces());

  // triangle: 1 + 1 + 1 + 3 single-vertex stages
  FaceLattice tri = lattice_of({P2(0, 0), P2(2, 0), P2(0, 2)});
  FaceFiltration Ft = build_face_filtration_2d(tri);
  CHECK(added_sizes(Ft) == std::vector<std::size_t>{1, 3, 0, 1, 1, 1});
  CHECK(check_fine(Ft, tri));

  // cube: 1 + 6 facets + none + 12 single-edge stages + 8 vertices together
  FaceLattice cu = lattice_of(cube_data().vertices);
  FaceFiltration Fc = build_face_filtration_3d(cu);
  std::vector<std::size_t> want{1, 6, 0};
  for (int i = 0; i < 12; ++i) want.push_back(1);
  want.push_back(8);
  CHECK(added_sizes(Fc) == want);
  CHECK(check_fine(Fc, cu));

  // tetrahedron: 1 + 4 + none + 6 + 4
  FaceLattice te = lattice_of({P3(0, 0, 0), P3(1, 0, 0), P3(0, 1, 0), P3(0, 0, 1)});
  FaceFiltration Fe = build_face_filtration_3d(te);
  std::vector<std::size_t> wt{1, 4, 0};
  for (int i = 0; i < 6; ++i) wt.push_back(1);
  wt.push_back(4);
  CHECK(added_sizes(Fe) == wt);
  CHECK(check_fine(Fe, te));

  // wrong dimension
  CHECK_THROWS_AS(build_face_filtration_2d(cu), std::invalid_argument);
  CHECK_THROWS_AS(build_face_filtration_3d(sq), std::invalid_argument);
}

TEST_CASE("check_fine rejections") {
  FaceLattice sq = lattice_of(square_data().vertices);
  int e01 = sq.by_verts.at({0, 1});

  // vertex before its containing edge: not upward closed
  FaceFiltration bad1;
  bad1.added_per_stage = {{sq.top}, {0}};
  CHECK_FALSE(check_fine(bad1, sq));

  // an edge together with one of its vertices in one stage: comparable pair
  FaceFiltration good = build_face_filtration_2d(sq);
  FaceFiltration bad2;
  bad2.added_per_stage = {{sq.top}};
  {
    std::vector<int> st{0, e01};
    std::sort(st.begin(), st.end());
    bad2.added_per_stage.push_back(st);
  }
  for (int f = 0; f < sq.n_faces(); ++f)
    if (f != sq.top && f != 0 && f != e01) bad2.added_per_stage.push_back({f});
  // make it otherwise complete and upward closed by front-loading the edges
  FaceFiltration bad2b;
  bad2b.added_per_stage = {{sq.top}};
  std::vector<int> edges;
  for (const Face& f : sq.faces)
    if (f.dim == 1 && f.id != sq.top) edges.push_back(f.id);
  std::sort(edges.begin(), edges.end());
  bad2b.added_per_stage.push_back(edges);
  std::vector<int> mixed{0, 1};
  bad2b.added_per_stage.push_back(mixed);
  bad2b.added_per_stage.push_back({2});
  bad2b.added_per_stage.push_back({3});
  CHECK(check_fine(bad2b, sq));  // control: vertices 0,1 together is fine
  bad2b.added_per_stage[1].clear();
  for (int e : edges)
    if (e != e01) bad2b.added_per_stage[1].push_back(e);
  bad2b.added_per_stage[2] = {std::min(0, e01), std::max(0, e01)};
  bad2b.added_per_stage.push_back({1});
  CHECK_FALSE(check_fine(bad2b, sq));  // vertex 0 and edge 0-1 share a stage

  // truncated filtration: final stage does not hold all faces
  FaceFiltration trunc = build_face_filtration_2d(sq);
  trunc.added_per_stage.pop_back();
  CHECK_FALSE(check_fine(trunc, sq));

  // duplicated face
  FaceFiltration dup = build_face_filtration_2d(sq);
  dup.added_per_stage.push_back({0});
  CHECK_FALSE(check_fine(dup, sq));
}

TEST_CASE("derive_convex_filtration regions") {
  FaceLattice sq = lattice_of(square_data().vertices);
  FaceFiltration F = build_face_filtration_2d(sq);
  auto stages = derive_convex_filtration(F, sq);
  REQUIRE(static_cast<int>(stages.size()) == F.n_stages());

  // stage 0 region = int(square)
  CHECK(region_contains(sq, stages[0].faces, Pt(Rat(1, 2), Rat(1, 2))));
  CHECK_FALSE(region_contains(sq, stages[0].faces, Pt(Rat(1, 2), Rat(0))));
  CHECK_FALSE(region_contains(sq, stages[0].faces, Pt(Rat(2), Rat(0))));

  // stage 1 region = int plus the 4 open edges; cells = the 4 edges
  CHECK(stages[1].cells.size() == 4);
  for (int c : stages[1].cells) CHECK(sq.faces[c].dim == 1);
  CHECK(region_contains(sq, stages[1].faces, Pt(Rat(1, 2), Rat(0))));
  CHECK_FALSE(region_contains(sq, stages[1].faces, Pt(Rat(0), Rat(0))));

  // final region = the whole closed square
  CHECK(region_contains(sq, stages.back().faces, Pt(Rat(0), Rat(0))));

  FaceFiltration bad;
  bad.added_per_stage = {{sq.top}, {0}};
  CHECK_THROWS_AS(derive_convex_filtration(bad, sq), std::invalid_argument);
}

TEST_CASE("derive_convex_filtration: cube stage-1 region is convex (chord oracle)") {
  FaceLattice cu = lattice_of(cube_data().vertices);
  FaceFiltration F = build_face_filtration_3d(cu);
  auto stages = derive_convex_filtration(F, cu);
  std::vector<int> facets = stages[1].cells;
  REQUIRE(facets.size() == 6);
  testutil::Rng rng(0xf117);
  for (int it = 0; it < 60; ++it) {
    int fa = facets[rng.below(6)], fb = facets[rng.below(6)];
    // random rint samples: convex combination of the rint point and vertices
    auto sample = [&](int f) {
      Pt p = cu.rint_point(f);
      for (int v : cu.faces[f].verts) {
        p = lerp(p, cu.vertex(v), rng.unit_rat() / 2);  // stays in rint
      }
      return p;
    };
    Pt a = sample(fa), b = sample(fb);
    for (Rat t : {Rat(1, 4), Rat(1, 2), Rat(3, 4)})
      CHECK(region_contains(cu, stages[1].faces, lerp(a, b, t)));
  }
}

TEST_CASE("run_driver: full square scene selects all of C") {
  SceneData d = square_data();
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 3}, {0, 3}})
    d.edge_decorations[{a, b}] = EdgeDecoration{{open01()}};
  d.vertex_flags = {true, true, true, true};
  Scene s = build_scene(d);
  FaceFiltration F = build_face_filtration_2d(s.L);
  ConvexWitness w = run_driver(s, F, basic_choice);
  CHECK(w.edge_sel.size() == 4);
  for (const auto& [eid, iv] : w.edge_sel) CHECK(iv == open01());
  CHECK(w.verts == std::vector<int>{0, 1, 2, 3});
  CHECK(w.complement.empty());
  WitnessCheck chk = witness_check(s, w);
  CHECK(chk.contained);
  CHECK(chk.convex);
}

TEST_CASE("run_driver: bottom edge decorated with two points picks the first") {
  SceneData d = square_data();
  d.edge_decorations[{0, 1}] = EdgeDecoration{
      {Iv{Rat(1, 3), Rat(1, 3), true, true}, Iv{Rat(2, 3), Rat(2, 3), true, true}}};
  Scene s = build_scene(d);
  FaceFiltration F = build_face_filtration_2d(s.L);
  ConvexWitness w = run_driver(s, F, basic_choice);
  int e01 = s.L.by_verts.at({0, 1});
  REQUIRE(w.edge_sel.size() == 1);
  CHECK(w.edge_sel.at(e01) == Iv{Rat(1, 3), Rat(1, 3), true, true});
  CHECK(w.verts.empty());
  // W = int ∪ {(1/3, 0)}
  CHECK(witness_member(s, w, Pt(Rat(1, 3), Rat(0))));
  CHECK_FALSE(witness_member(s, w, Pt(Rat(2, 3), Rat(0))));
  REQUIRE(w.complement.size() == 1);
  CHECK(w.complement[0].kind == ComplementItem::edge_gap);
}

TEST_CASE("run_driver: full bottom edge with its vertices") {
  SceneData d = square_data();
  d.edge_decorations[{0, 1}] = EdgeDecoration{{open01()}};
  d.vertex_flags = {true, true, false, false};
  Scene s = build_scene(d);
  FaceFiltration F = build_face_filtration_2d(s.L);
  std::vector<std::string> trace;
  ConvexWitness w = run_driver(s, F, basic_choice, &trace);
  int e01 = s.L.by_verts.at({0, 1});
  CHECK(w.edge_sel.at(e01) == open01());
  CHECK(w.verts == std::vector<int>{0, 1});
  CHECK(witness_member(s, w, Pt(Rat(0), Rat(0))));
  CHECK(witness_member(s, w, Pt(Rat(1), Rat(0))));
  CHECK_FALSE(witness_member(s, w, Pt(Rat(1), Rat(1))));
  CHECK(static_cast<int>(trace.size()) == F.n_stages());
  CHECK(trace[0].find("stage 0") == 0);
}

TEST_CASE("run_driver: stage monotonicity and cross-cell midpoints") {
  SceneData d = square_data();
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 3}, {0, 3}})
    d.edge_decorations[{a, b}] = EdgeDecoration{{open01()}};
  d.vertex_flags = {true, false, true, false};
  Scene s = build_scene(d);
  FaceFiltration F = build_face_filtration_2d(s.L);

  // snapshot the accumulated witness before every stage; earlier selections
  // must be unchanged at the end
  std::vector<ConvexWitness> snaps;
  Chooser spy = [&](const Scene& S, const ConvexWitness& w,
                    const std::vector<int>& added, int stage) {
    snaps.push_back(w);
    return basic_choice(S, w, added, stage);
  };
  ConvexWitness w = run_driver(s, F, spy);
  for (const ConvexWitness& snap : snaps) {
    for (const auto& [eid, iv] : snap.edge_sel) CHECK(w.edge_sel.at(eid) == iv);
    for (int v : snap.verts)
      CHECK(std::binary_search(w.verts.begin(), w.verts.end(), v));
  }

  // cross-cell chords of the edge stage pass through the stage-0 region
  auto stages = derive_convex_filtration(F, s.L);
  std::vector<Pt> picks;
  for (int c : stages[1].cells) {
    auto it = w.edge_sel.find(c);
    if (it != w.edge_sel.end())
      picks.push_back(s.edge_point(c, (it->second.lo + it->second.hi) / 2));
  }
  REQUIRE(picks.size() == 4);
  for (std::size_t i = 0; i < picks.size(); ++i)
    for (std::size_t j = i + 1; j < picks.size(); ++j)
      CHECK(region_contains(s.L, stages[0].faces, midpoint(picks[i], picks[j])));
}

TEST_CASE("run_driver: chooser contract violations abort with the stage id") {
  SceneData d = square_data();
  d.edge_decorations[{0, 1}] = EdgeDecoration{{open01()}};
  Scene s = build_scene(d);
  FaceFiltration F = build_face_filtration_2d(s.L);
  int e01 = s.L.by_verts.at({0, 1});

  // selection on a face outside the stage
  Chooser eager = [&](const Scene&, const ConvexWitness&, const std::vector<int>&,
                      int stage) {
    StageSelection sel;
    if (stage == 0) sel.edge_sel[e01] = open01();
    return sel;
  };
  CHECK_THROWS_WITH_AS(run_driver(s, F, eager),
                       doctest::Contains("stage 0"), std::logic_error);

  // under-selection: the decorated edge is left addable
  Chooser lazy = [](const Scene&, const ConvexWitness&, const std::vector<int>&, int) {
    return StageSelection{};
  };
  CHECK_THROWS_WITH_AS(run_driver(s, F, lazy),
                       doctest::Contains("left addable"), std::logic_error);

  // selection outside the decoration
  Chooser wild = [&](const Scene&, const ConvexWitness&, const std::vector<int>& added,
                     int) {
    StageSelection sel;
    for (int f : added)
      if (f != s.L.top && s.L.faces[f].dim == 1) sel.edge_sel[f] = open01();
    return sel;
  };
  CHECK_THROWS_WITH_AS(run_driver(s, F, wild),
                       doctest::Contains("not inside decoration"), std::logic_error);
}

TEST_CASE("run_driver: 3D cube with full facets and edges") {
  SceneData c = cube_data();
  // full facets, full edges, all vertices flagged: X = C, so W = C
  FaceLattice cu = lattice_of(c.vertices);
  for (const Face& f : cu.faces) {
    if (f.id == cu.top) continue;
    if (f.dim == 1)
      c.edge_decorations[{f.verts[0], f.verts[1]}] = EdgeDecoration{{open01()}};
    if (f.dim == 2) {
      FacetDecoration fd;
      fd.mode = FacetDecoration::Mode::full;
      c.facet_decorations[f.verts] = fd;
    }
  }
  c.vertex_flags.assign(8, true);
  Scene s = build_scene(c);
  REQUIRE(validate_scene(s).empty());
  FaceFiltration F = build_face_filtration_3d(s.L);
  ConvexWitness w = run_driver(s, F, basic_choice);
  CHECK(w.edge_sel.size() == 12);
  CHECK(w.facet_sel.size() == 6);
  CHECK(w.verts.size() == 8);
  CHECK(w.complement.empty());
  WitnessCheck chk = witness_check(s, w);
  CHECK(chk.contained);
  CHECK(chk.convex);
}
