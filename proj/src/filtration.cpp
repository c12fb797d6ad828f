#include "mcv/filtration.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mcv {

namespace {

bool verts_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string id_list(const FaceLattice& L, const std::vector<int>& ids) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) os << " ";
    if (ids[i] == L.top) {
      os << "C";
      continue;
    }
    const auto& vs = L.faces[ids[i]].verts;
    for (std::size_t k = 0; k < vs.size(); ++k) os << (k ? "-" : "") << vs[k];
  }
  os << "}";
  return os.str();
}

Pt piece_rep(const FacetPiece& p) {
  switch (p.kind) {
    case FacetPiece::point:
      return p.p;
    case FacetPiece::segment:
      return midpoint(p.a, p.b);
    case FacetPiece::polygon: {
      Pt sum;
      sum.dim = 3;
      for (const Pt& q : p.poly) sum = sum + q;
      return (Rat(1) / Rat(static_cast<long>(p.poly.size()))) * sum;
    }
  }
  return p.p;
}

}  // namespace

std::vector<int> FaceFiltration::stage_faces(int i) const {
  std::vector<int> out;
  for (int k = 0; k <= i; ++k)
    out.insert(out.end(), added_per_stage[k].begin(), added_per_stage[k].end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> canonical_face_order(const FaceLattice& L, int dim) {
  std::vector<int> ids;
  for (const Face& f : L.faces)
    if (f.dim == dim && f.id != L.top) ids.push_back(f.id);
  std::sort(ids.begin(), ids.end(),
            [&](int a, int b) { return L.faces[a].verts < L.faces[b].verts; });
  return ids;
}

FaceFiltration build_face_filtration_2d(const FaceLattice& L) {
  if (L.P.dim != 2) throw std::invalid_argument("build_face_filtration_2d: need dim 2");
  FaceFiltration F;
  F.added_per_stage.push_back({L.top});
  std::vector<int> edges = canonical_face_order(L, 1);
  std::sort(edges.begin(), edges.end());
  F.added_per_stage.push_back(edges);
  F.added_per_stage.push_back({});  // isolated non-vertex points: none here
  for (int v : canonical_face_order(L, 0)) F.added_per_stage.push_back({v});
  return F;
}

FaceFiltration build_face_filtration_3d(const FaceLattice& L) {
  if (L.P.dim != 3) throw std::invalid_argument("build_face_filtration_3d: need dim 3");
  FaceFiltration F;
  F.added_per_stage.push_back({L.top});
  std::vector<int> facets = canonical_face_order(L, 2);
  std::sort(facets.begin(), facets.end());
  F.added_per_stage.push_back(facets);
  F.added_per_stage.push_back({});  // isolated sub-facet pieces: none here
  for (int e : canonical_face_order(L, 1)) F.added_per_stage.push_back({e});
  std::vector<int> verts = canonical_face_order(L, 0);
  std::sort(verts.begin(), verts.end());
  F.added_per_stage.push_back(verts);
  return F;
}

bool check_fine(const FaceFiltration& F, const FaceLattice& L) {
  std::vector<char> present(L.n_faces(), 0);
  int total = 0;
  for (int i = 0; i < F.n_stages(); ++i) {
    const auto& add = F.added(i);
    if (!std::is_sorted(add.begin(), add.end())) return false;
    for (int f : add) {
      if (f < 0 || f >= L.n_faces() || present[f]) return false;
      present[f] = 1;
      ++total;
    }
    // upward closure after this stage's additions
    for (int f : add)
      for (int g : L.up[f])
        if (!present[g]) return false;
    // added faces pairwise incomparable
    for (std::size_t a = 0; a < add.size(); ++a)
      for (std::size_t b = a + 1; b < add.size(); ++b) {
        const auto& va = L.faces[add[a]].verts;
        const auto& vb = L.faces[add[b]].verts;
        if (verts_subset(va, vb) || verts_subset(vb, va)) return false;
      }
  }
  return F.n_stages() > 0 && total == L.n_faces();
}

std::vector<ConvexFiltrationStage> derive_convex_filtration(const FaceFiltration& F,
                                                            const FaceLattice& L) {
  if (!check_fine(F, L))
    throw std::invalid_argument("derive_convex_filtration: filtration is not fine");
  std::vector<ConvexFiltrationStage> out;
  std::vector<int> cur;
  for (int i = 0; i < F.n_stages(); ++i) {
    const auto& add = F.added(i);
    std::vector<int> merged;
    std::merge(cur.begin(), cur.end(), add.begin(), add.end(),
               std::back_inserter(merged));
    cur = std::move(merged);
    out.push_back(ConvexFiltrationStage{cur, add});
  }
  return out;
}

bool region_contains(const FaceLattice& L, const std::vector<int>& faces, const Pt& p) {
  int f = locate_face(L, p);
  return f >= 0 && std::binary_search(faces.begin(), faces.end(), f);
}

namespace {

void require(bool ok, int stage, const std::string& what) {
  if (!ok)
    throw std::logic_error("stage " + std::to_string(stage) + ": " + what);
}

// Containment of this stage's new selections in the decorations (the per-face
// part of the full witness check, restricted to the faces just selected).
void check_stage_containment(const Scene& S, const ConvexWitness& w,
                             const StageSelection& sel, int stage) {
  for (const auto& [eid, iv] : sel.edge_sel) {
    require(eid >= 0 && eid < S.L.n_faces() && S.L.faces[eid].dim == 1 &&
                eid != S.L.top,
            stage, "edge selection on a non-edge face");
    require(iv_valid(iv), stage, "invalid edge selection interval");
    const EdgeDecoration* dec = S.edge_dec(eid);
    require(dec && iv_set_covers(dec->pieces, iv), stage,
            "edge selection not inside decoration");
  }
  for (const auto& [fid, fs] : sel.facet_sel) {
    if (fs.kind == FacetSel::Kind::none) continue;
    require(fid >= 0 && fid < S.L.n_faces() && S.L.faces[fid].dim == 2 &&
                fid != S.L.top,
            stage, "facet selection on a non-facet face");
    const FacetDecoration* dec = S.facet_dec(fid);
    if (fs.kind == FacetSel::Kind::full)
      require(dec && dec->mode == FacetDecoration::Mode::full, stage,
              "full facet selection without full decoration");
    else
      require(dec && dec->mode == FacetDecoration::Mode::pieces && fs.piece >= 0 &&
                  fs.piece < static_cast<int>(dec->pieces.size()),
              stage, "facet piece selection out of range");
  }
  for (int v : sel.verts)
    require(v >= 0 && v < static_cast<int>(S.C.verts.size()) && S.vertex_flags[v],
            stage, "selected vertex is not flagged");
  (void)w;
}

// Chord conditions for the items selected at this stage against all nearby
// items (pairs joining at the top are fine: the driver's witness always
// includes the open kernel).
void check_stage_convexity(const Scene& S, const ConvexWitness& w,
                           const StageSelection& sel, int stage) {
  std::vector<WitnessItemRef> fresh;
  for (int v : sel.verts) fresh.push_back({WitnessItemRef::vert, v});
  for (const auto& [eid, iv] : sel.edge_sel)
    fresh.push_back({WitnessItemRef::edge, eid});
  for (const auto& [fid, fs] : sel.facet_sel)
    if (fs.kind != FacetSel::Kind::none)
      fresh.push_back({WitnessItemRef::facet, fid});
  std::vector<int> fresh_ids;
  for (const auto& it : fresh) fresh_ids.push_back(it.fid);
  std::sort(fresh_ids.begin(), fresh_ids.end());
  std::string why;
  for (const auto& a : fresh)
    for (const auto& b : witness_items_near(S, w, a.fid)) {
      if (b.fid == a.fid) continue;
      // a fresh-fresh pair is seen from both sides; keep one orientation
      if (b.fid < a.fid &&
          std::binary_search(fresh_ids.begin(), fresh_ids.end(), b.fid))
        continue;
      require(witness_pair_ok(S, w, a, b, &why), stage,
              "stage selection breaks convexity: " + why);
    }
}

// Every unselected decoration point of the stage's cells must be unaddable.
void check_stage_maximality(const Scene& S, const ConvexWitness& w,
                            const std::vector<int>& added, int stage) {
  for (int f : added) {
    if (f == S.L.top) continue;
    const Face& face = S.L.faces[f];
    if (face.dim == 0) {
      int vid = face.verts[0];
      if (S.vertex_flags[vid] &&
          !std::binary_search(w.verts.begin(), w.verts.end(), vid))
        require(!vertex_addable(S, w, vid), stage, "vertex left addable");
    } else if (face.dim == 1) {
      const EdgeDecoration* dec = S.edge_dec(f);
      if (!dec) continue;
      std::vector<Iv> rem = dec->pieces;
      auto it = w.edge_sel.find(f);
      if (it != w.edge_sel.end()) rem = iv_set_subtract(rem, it->second);
      for (const Iv& g : rem) {
        std::vector<Rat> cand{(g.lo + g.hi) / 2};
        if (!g.is_point()) {
          if (g.lo_in) cand.push_back(g.lo);
          if (g.hi_in) cand.push_back(g.hi);
        }
        for (const Rat& t : cand)
          require(!edge_point_addable(S, w, f, t), stage, "edge point left addable");
      }
    } else if (face.dim == 2 && S.C.dim == 3) {
      const FacetDecoration* dec = S.facet_dec(f);
      if (!dec || dec->mode == FacetDecoration::Mode::empty) continue;
      auto it = w.facet_sel.find(f);
      FacetSel sel = it == w.facet_sel.end() ? FacetSel{} : it->second;
      if (dec->mode == FacetDecoration::Mode::full) {
        if (sel.kind != FacetSel::Kind::full)
          require(!facet_point_addable(S, w, f, S.L.rint_point(f)), stage,
                  "facet point left addable");
      } else {
        for (int i = 0; i < static_cast<int>(dec->pieces.size()); ++i) {
          if (sel.kind == FacetSel::Kind::piece && sel.piece == i) continue;
          require(!facet_point_addable(S, w, f, piece_rep(dec->pieces[i])), stage,
                  "facet piece left addable");
        }
      }
    }
  }
}

}  // namespace

ConvexWitness run_driver(const Scene& S, const FaceFiltration& F, const Chooser& chooser,
                         std::vector<std::string>* trace) {
  ConvexWitness w;
  for (int i = 0; i < F.n_stages(); ++i) {
    const std::vector<int>& added = F.added(i);
    StageSelection sel = chooser(S, w, added, i);
    auto in_added = [&](int f) {
      return std::binary_search(added.begin(), added.end(), f);
    };
    for (const auto& [eid, iv] : sel.edge_sel) {
      require(in_added(eid), i, "selection on a face outside this stage");
      w.edge_sel[eid] = iv;
    }
    for (const auto& [fid, fs] : sel.facet_sel) {
      if (fs.kind == FacetSel::Kind::none) continue;
      require(in_added(fid), i, "selection on a face outside this stage");
      w.facet_sel[fid] = fs;
    }
    bool sorted = true;
    for (int v : sel.verts) {
      require(in_added(v), i, "selection on a face outside this stage");
      if (!w.verts.empty() && v < w.verts.back()) sorted = false;
      w.verts.push_back(v);
    }
    if (!sorted) std::sort(w.verts.begin(), w.verts.end());

    check_stage_containment(S, w, sel, i);
    check_stage_convexity(S, w, sel, i);
    check_stage_maximality(S, w, added, i);

    if (trace) {
      std::ostringstream os;
      os << "stage " << i << ": +" << id_list(S.L, added) << " sel: edges="
         << sel.edge_sel.size() << " facets=" << sel.facet_sel.size()
         << " verts=" << sel.verts.size();
      trace->push_back(os.str());
    }
  }
  WitnessCheck chk = witness_check(S, w);
  require(chk.contained, F.n_stages() - 1, "final witness leaves X: " + chk.detail);
  require(chk.convex, F.n_stages() - 1,
          "final witness breaks convexity: " + chk.detail);
  w.complement = compute_complement(S, w);
  return w;
}

}  // namespace mcv
