#include "mcv/solver.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mcv {

namespace {

std::string fname(const FaceLattice& L, int fid) {
  if (fid == L.top) return "C";
  std::ostringstream os;
  const auto& vs = L.faces[fid].verts;
  for (std::size_t k = 0; k < vs.size(); ++k) os << (k ? "-" : "") << vs[k];
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

// The selected point/segment of one witness item, with endpoint inclusion.
Seg1 item_seg(const Scene& s, const ConvexWitness& w, const WitnessItemRef& it) {
  if (it.kind == WitnessItemRef::vert) {
    Pt p = s.C.verts[s.L.faces[it.fid].verts[0]];
    return Seg1{p, p, true, true};
  }
  const Iv& iv = w.edge_sel.at(it.fid);
  return Seg1{s.edge_point(it.fid, iv.lo), s.edge_point(it.fid, iv.hi), iv.lo_in,
              iv.hi_in};
}

// ---- one-dimensional clipping of affine maps against piece closures ----
//
// Accumulates linear conditions alpha + beta*t (= 0 or >= 0) on a parameter t
// and resolves them to the empty set, a single t, or a closed interval.

struct TClip {
  bool dead = false;
  bool pointed = false;
  Rat t0;
  bool has_lo = false, has_hi = false;
  Rat lo, hi;

  void eq(const Rat& alpha, const Rat& beta) {
    if (dead) return;
    if (sign(beta) == 0) {
      if (sign(alpha) != 0) dead = true;
      return;
    }
    Rat t = -alpha / beta;
    if (pointed) {
      if (t != t0) dead = true;
      return;
    }
    if ((has_lo && cmp(t, lo) < 0) || (has_hi && cmp(t, hi) > 0)) {
      dead = true;
      return;
    }
    pointed = true;
    t0 = t;
  }

  void ge(const Rat& alpha, const Rat& beta) {
    if (dead) return;
    if (pointed) {
      if (sign(alpha + beta * t0) < 0) dead = true;
      return;
    }
    int sb = sign(beta);
    if (sb == 0) {
      if (sign(alpha) < 0) dead = true;
      return;
    }
    Rat t = -alpha / beta;
    if (sb > 0) {
      if (!has_lo || cmp(t, lo) > 0) {
        lo = t;
        has_lo = true;
      }
    } else {
      if (!has_hi || cmp(t, hi) < 0) {
        hi = t;
        has_hi = true;
      }
    }
    if (has_lo && has_hi) {
      int c = cmp(lo, hi);
      if (c > 0)
        dead = true;
      else if (c == 0) {
        pointed = true;
        t0 = lo;
      }
    }
  }
};

int facet_plane_index(const Polytope& P, const std::vector<int>& verts) {
  for (std::size_t i = 0; i < P.facet_cycles.size(); ++i) {
    std::vector<int> cyc = P.facet_cycles[i];
    std::sort(cyc.begin(), cyc.end());
    if (cyc == verts) return static_cast<int>(i);
  }
  throw std::logic_error("facet_plane_index: no matching facet plane");
}

// {t : q0 + t*dq ∈ cl(container)} for the facet selection cs on facet fid.
TClip clip_to_container(const Scene& S, int fid, const FacetSel& cs, const Pt& q0,
                        const Pt& dq) {
  TClip c;
  if (cs.kind == FacetSel::Kind::none) {
    c.dead = true;
    return c;
  }
  if (cs.kind == FacetSel::Kind::full) {
    const Polytope& P = S.C;
    int k = facet_plane_index(P, S.L.faces[fid].verts);
    for (std::size_t j = 0; j < P.facet_planes.size(); ++j) {
      const Halfspace& h = P.facet_planes[j];
      if (static_cast<int>(j) == k)
        c.eq(dot(h.n, q0) - h.off, dot(h.n, dq));
      else
        c.ge(h.off - dot(h.n, q0), -(dot(h.n, dq)));
    }
    return c;
  }
  const FacetPiece& p = S.facet_dec(fid)->pieces[cs.piece];
  switch (p.kind) {
    case FacetPiece::point:
      for (int k = 0; k < 3; ++k) c.eq(q0[k] - p.p[k], dq[k]);
      break;
    case FacetPiece::segment: {
      Pt d = p.b - p.a;
      Pt ca = cross3(d, q0 - p.a), cd = cross3(d, dq);
      for (int k = 0; k < 3; ++k) c.eq(ca[k], cd[k]);
      c.ge(dot(q0 - p.a, d), dot(dq, d));
      c.ge(dot(d, d) - dot(q0 - p.a, d), -(dot(dq, d)));
      break;
    }
    case FacetPiece::polygon: {
      Pt n = cross3(p.poly[1] - p.poly[0], p.poly[2] - p.poly[0]);
      c.eq(dot(n, q0 - p.poly[0]), dot(n, dq));
      Pt cen;
      cen.dim = 3;
      for (const Pt& v : p.poly) cen = cen + v;
      cen = (Rat(1) / Rat(static_cast<long>(p.poly.size()))) * cen;
      for (std::size_t i = 0; i < p.poly.size(); ++i) {
        const Pt& u = p.poly[i];
        const Pt& v = p.poly[(i + 1) % p.poly.size()];
        Pt m = cross3(v - u, n);
        Rat s(sign(dot(m, cen - u)));
        c.ge(s * (dot(m, q0) - dot(m, u)), s * dot(m, dq));
      }
      break;
    }
  }
  return c;
}

FacetSel facet_sel_of(const ConvexWitness& w, int fid) {
  auto it = w.facet_sel.find(fid);
  return it == w.facet_sel.end() ? FacetSel{} : it->second;
}

void push_clip_bounds(const TClip& c, std::vector<Rat>& out) {
  if (c.dead) return;
  if (c.pointed) {
    out.push_back(c.t0);
    return;
  }
  if (c.has_lo) out.push_back(c.lo);
  if (c.has_hi) out.push_back(c.hi);
}

// Edge parameters where the addability conditions of a point moving along the
// edge can change: selection and decoration endpoints, plus the clip bounds
// of the chord conditions through every facet join with a piece container.
std::vector<Rat> edge_breakpoints(const Scene& S, const ConvexWitness& w, int eid) {
  std::vector<Rat> bs{Rat(0), Rat(1)};
  auto selit = w.edge_sel.find(eid);
  if (selit != w.edge_sel.end()) {
    bs.push_back(selit->second.lo);
    bs.push_back(selit->second.hi);
  }
  const auto& ev = S.L.faces[eid].verts;
  Pt q0 = S.C.verts[ev[0]], dq = S.C.verts[ev[1]] - S.C.verts[ev[0]];
  for (const WitnessItemRef& I : witness_items_near(S, w, eid)) {
    if (I.fid == eid) continue;
    int J = face_join(S.L, eid, I.fid);
    if (S.L.faces[J].dim != 2) continue;
    FacetSel cs = facet_sel_of(w, J);
    if (cs.kind != FacetSel::Kind::piece) continue;
    push_clip_bounds(clip_to_container(S, J, cs, q0, dq), bs);
    // a facet's own piece only constrains the edge point itself
    if (I.kind == WitnessItemRef::facet) continue;
    Seg1 B = item_seg(S, w, I);
    std::vector<Pt> cs_pts{midpoint(B.a, B.b)};
    if (!(B.a == B.b)) {
      if (B.a_in) cs_pts.push_back(B.a);
      if (B.b_in) cs_pts.push_back(B.b);
    }
    for (const Pt& cpt : cs_pts)
      push_clip_bounds(
          clip_to_container(S, J, cs, (Rat(1) / 2) * (q0 + cpt), (Rat(1) / 2) * dq),
          bs);
  }
  std::sort(bs.begin(), bs.end(), [](const Rat& a, const Rat& b) { return cmp(a, b) < 0; });
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  std::vector<Rat> out;
  for (const Rat& t : bs)
    if (sign(t) >= 0 && cmp(t, Rat(1)) <= 0) out.push_back(t);
  return out;
}

// The exact set {t ∈ decoration : W ∪ {edge point t} convex}, as a normalized
// interval set. Conditions are constant between breakpoints, so one
// representative per atom decides the whole atom.
std::vector<Iv> addable_set_on_edge(const Scene& S, const ConvexWitness& w, int eid) {
  const EdgeDecoration* dec = S.edge_dec(eid);
  if (!dec || dec->pieces.empty()) return {};
  std::vector<Rat> bs = edge_breakpoints(S, w, eid);
  std::vector<Iv> keep;
  for (const Iv& piece : dec->pieces) {
    std::vector<Rat> cuts{piece.lo, piece.hi};
    for (const Rat& b : bs)
      if (cmp(piece.lo, b) < 0 && cmp(b, piece.hi) < 0) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end(),
              [](const Rat& a, const Rat& b) { return cmp(a, b) < 0; });
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (const Rat& c : cuts)
      if (piece.contains(c) && edge_point_addable(S, w, eid, c))
        keep.push_back(Iv{c, c, true, true});
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (edge_point_addable(S, w, eid, (cuts[i] + cuts[i + 1]) / 2))
        keep.push_back(Iv{cuts[i], cuts[i + 1], false, false});
  }
  return iv_set_normalize(std::move(keep));
}

// First connected component of the decoration of one edge.
std::optional<Iv> first_component(const EdgeDecoration& dec) {
  if (dec.pieces.empty()) return std::nullopt;
  Iv run = dec.pieces[0];
  for (std::size_t i = 1; i < dec.pieces.size(); ++i) {
    if (!iv_mergeable(run, dec.pieces[i])) break;
    run = iv_merge(run, dec.pieces[i]);
  }
  return run;
}

// ---- the 2D chooser ----

StageSelection choose2d(const Scene& S, const ConvexWitness& w,
                        const std::vector<int>& added, int) {
  StageSelection sel;
  for (int f : added) {
    if (f == S.L.top) continue;
    const Face& face = S.L.faces[f];
    if (face.dim == 1) {
      const EdgeDecoration* dec = S.edge_dec(f);
      if (!dec) continue;
      if (auto run = first_component(*dec)) sel.edge_sel[f] = *run;
    } else if (face.dim == 0) {
      int vid = face.verts[0];
      if (S.vertex_flags[vid] && vertex_addable(S, w, vid)) sel.verts.push_back(vid);
    }
  }
  return sel;
}

}  // namespace

// ---- vertex graph ----

VertexGraph vertex_graph(const Scene& S, const ConvexWitness& w) {
  VertexGraph G;
  for (int v = 0; v < static_cast<int>(S.C.verts.size()); ++v)
    if (S.vertex_flags[v] && !std::binary_search(w.verts.begin(), w.verts.end(), v) &&
        vertex_addable(S, w, v))
      G.nodes.push_back(v);
  for (std::size_t i = 0; i < G.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < G.nodes.size(); ++j) {
      int p = G.nodes[i], q = G.nodes[j];
      int J = face_join(S.L, p, q);
      if (J == S.L.top) continue;  // chord runs through the kernel, inside W
      const Face& jf = S.L.faces[J];
      if (jf.dim == 1) {
        auto it = w.edge_sel.find(J);
        if (it == w.edge_sel.end()) {
          G.edges.push_back({p, q});
          continue;
        }
        if (it->second == Iv{Rat(0), Rat(1), false, false}) continue;  // chord ⊆ W
        throw std::logic_error("vertex_graph: dichotomy violated on edge " +
                               fname(S.L, J));
      }
      // join is a facet
      FacetSel cs = facet_sel_of(w, J);
      if (cs.kind == FacetSel::Kind::full) continue;
      if (cs.kind == FacetSel::Kind::none) {
        G.edges.push_back({p, q});
        continue;
      }
      const FacetPiece& piece = S.facet_dec(J)->pieces[cs.piece];
      PieceGeom g = make_piece_geom(S.L, J, &piece);
      Pt a = S.C.verts[p], b = S.C.verts[q];
      if (g.in_closure(a) && g.in_closure(b) && g.in_relopen(midpoint(a, b)))
        continue;  // chord ⊆ selected piece ⊆ W
      TClip c = clip_to_container(S, J, cs, a, b - a);
      c.ge(Rat(0), Rat(1));            // t >= 0
      c.ge(Rat(1), Rat(-1));           // t <= 1
      bool meets = false;
      if (!c.dead) {
        Rat rep;
        bool have = false;
        if (c.pointed) {
          if (sign(c.t0) > 0 && cmp(c.t0, Rat(1)) < 0) {
            rep = c.t0;
            have = true;
          }
        } else {
          Rat lo = c.has_lo && sign(c.lo) > 0 ? c.lo : Rat(0);
          Rat hi = c.has_hi && cmp(c.hi, Rat(1)) < 0 ? c.hi : Rat(1);
          int cc = cmp(lo, hi);
          if (cc < 0) {
            rep = (lo + hi) / 2;  // strictly between, hence inside (0, 1)
            have = true;
          } else if (cc == 0 && sign(lo) > 0 && cmp(lo, Rat(1)) < 0) {
            rep = lo;
            have = true;
          }
        }
        if (have) meets = g.in_relopen(lerp(a, b, rep));
      }
      if (meets)
        throw std::logic_error("vertex_graph: dichotomy violated on facet " +
                               fname(S.L, J));
      G.edges.push_back({p, q});
    }
  return G;
}

std::vector<int> independent_set_deg2(const std::vector<std::vector<int>>& adj,
                                      const std::vector<int>& order) {
  int n = static_cast<int>(adj.size());
  for (const auto& a : adj)
    if (a.size() > 2)
      throw std::invalid_argument("independent_set_deg2: degree exceeds 2");
  std::vector<char> sel(n, 0);
  for (int i : order) {
    if (i < 0 || i >= n) throw std::invalid_argument("independent_set_deg2: bad node");
    bool ok = true;
    for (int j : adj[i])
      if (sel[j]) ok = false;
    if (ok) sel[i] = 1;
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (sel[i]) out.push_back(i);
  return out;
}

namespace {

// Vertex phase of the 3D algorithm: facet seeding, removal of degree-3-plus
// nodes, then the greedy selection on the residual degree-at-most-2 graph.
std::vector<int> vertex_phase(const Scene& S, const ConvexWitness& w) {
  VertexGraph G = vertex_graph(S, w);
  auto connected = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return std::find(G.edges.begin(), G.edges.end(), std::make_pair(a, b)) !=
           G.edges.end();
  };
  auto indep_with = [&](const std::vector<int>& set, int p) {
    for (int q : set)
      if (connected(p, q)) return false;
    return true;
  };

  // the joins of graph edges are proper faces of dimension 1 or 2
  for (auto [p, q] : G.edges) {
    int d = S.L.faces[face_join(S.L, p, q)].dim;
    if (d < 1 || d > 2)
      throw std::logic_error("vertex_phase: graph edge join has dimension " +
                             std::to_string(d));
  }

  // Q: seed one node per facet when possible
  std::vector<int> Q;
  for (int fid : S.facet_face_ids()) {
    const auto& fv = S.L.faces[fid].verts;
    bool has_q = false;
    for (int q : Q)
      if (std::binary_search(fv.begin(), fv.end(), q)) has_q = true;
    if (has_q) continue;
    for (int p : G.nodes) {
      if (!std::binary_search(fv.begin(), fv.end(), p)) continue;
      if (indep_with(Q, p)) {
        Q.push_back(p);
        break;
      }
    }
  }
  std::sort(Q.begin(), Q.end());

  // P1: nodes compatible with Q
  std::vector<int> P1;
  for (int p : G.nodes)
    if (!std::binary_search(Q.begin(), Q.end(), p) && indep_with(Q, p))
      P1.push_back(p);

  auto deg_in = [&](const std::vector<int>& set, int p) {
    int d = 0;
    for (int q : set)
      if (q != p && connected(p, q)) ++d;
    return d;
  };

  // R: greedily take degree-3-plus nodes of the graph restricted to P1
  std::vector<int> R, QR = Q;
  for (int p : P1)
    if (deg_in(P1, p) >= 3 && indep_with(QR, p)) {
      R.push_back(p);
      QR.push_back(p);
    }

  // P2: remaining compatible nodes; residual degree must be at most 2
  std::vector<int> P2;
  for (int p : P1)
    if (std::find(R.begin(), R.end(), p) == R.end() && indep_with(QR, p))
      P2.push_back(p);
  for (int p : P2)
    if (deg_in(P2, p) > 2)
      throw std::logic_error("vertex_phase: residual degree exceeds 2");

  // components of the residual graph, each a path or cycle: greedy selection
  // ordered by the coordinate order of the vertex points
  std::vector<int> pos(S.C.verts.size(), -1);
  for (std::size_t i = 0; i < P2.size(); ++i) pos[P2[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(P2.size());
  for (auto [p, q] : G.edges)
    if (pos[p] >= 0 && pos[q] >= 0) {
      adj[pos[p]].push_back(pos[q]);
      adj[pos[q]].push_back(pos[p]);
    }
  std::vector<int> order(P2.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return lex_less(S.C.verts[P2[a]], S.C.verts[P2[b]]);
  });
  std::vector<int> picks = independent_set_deg2(adj, order);

  std::vector<int> out = QR;
  for (int i : picks) out.push_back(P2[i]);
  std::sort(out.begin(), out.end());

  // small scenes: the open chords of distinct graph edges within P1 never meet
  if (S.C.verts.size() <= 12) {
    std::vector<std::pair<int, int>> res;
    for (auto [p, q] : G.edges)
      if (std::binary_search(P1.begin(), P1.end(), p) &&
          std::binary_search(P1.begin(), P1.end(), q))
        res.push_back({p, q});
    for (std::size_t i = 0; i < res.size(); ++i)
      for (std::size_t j = i + 1; j < res.size(); ++j) {
        Segment s1{S.C.verts[res[i].first], S.C.verts[res[i].second],
                   SegKind::open};
        Segment s2{S.C.verts[res[j].first], S.C.verts[res[j].second],
                   SegKind::open};
        if (segments_intersect(s1, s2).kind != SegIsect::empty)
          throw std::logic_error("vertex_phase: graph edge chords intersect");
      }
  }
  return out;
}

StageSelection choose3d(const Scene& S, const ConvexWitness& w,
                        const std::vector<int>& added, int) {
  StageSelection sel;
  bool vertex_stage =
      !added.empty() && std::all_of(added.begin(), added.end(), [&](int f) {
        return f != S.L.top && S.L.faces[f].dim == 0;
      });
  if (vertex_stage) {
    sel.verts = vertex_phase(S, w);
    return sel;
  }
  for (int f : added) {
    if (f == S.L.top) continue;
    const Face& face = S.L.faces[f];
    if (face.dim == 2) {
      const FacetDecoration* dec = S.facet_dec(f);
      if (!dec || dec->mode == FacetDecoration::Mode::empty) continue;
      if (dec->mode == FacetDecoration::Mode::full)
        sel.facet_sel[f] = FacetSel{FacetSel::Kind::full, -1};
      else
        sel.facet_sel[f] = FacetSel{FacetSel::Kind::piece, 0};
    } else if (face.dim == 1) {
      std::vector<Iv> Y = addable_set_on_edge(S, w, f);
      if (!Y.empty()) sel.edge_sel[f] = Y.front();
    }
  }
  return sel;
}

void require_valid(const Scene& S, const char* who) {
  std::vector<std::string> v = validate_scene(S);
  if (!v.empty())
    throw std::invalid_argument(std::string(who) + ": invalid scene: " + v[0]);
}

}  // namespace

ConvexWitness solve2d(const Scene& S, std::vector<std::string>* trace) {
  if (S.C.dim != 2) throw std::invalid_argument("solve2d: scene is not 2-dimensional");
  require_valid(S, "solve2d");
  FaceFiltration F = build_face_filtration_2d(S.L);
  return run_driver(S, F, choose2d, trace);
}

ConvexWitness solve3d(const Scene& S, std::vector<std::string>* trace) {
  if (S.C.dim != 3) throw std::invalid_argument("solve3d: scene is not 3-dimensional");
  require_valid(S, "solve3d");
  FaceFiltration F = build_face_filtration_3d(S.L);
  return run_driver(S, F, choose3d, trace);
}

ConvexWitness solve_scene(const Scene& S, std::vector<std::string>* trace) {
  if (S.C.dim == 2) return solve2d(S, trace);
  if (S.C.dim == 3) return solve3d(S, trace);
  throw std::invalid_argument("solve_scene: dimension must be 2 or 3");
}

// ---- infinite-component selection rules ----

bool ray_select(long n) {
  if (n < 0) throw std::invalid_argument("ray_select: negative index");
  return n % 2 == 0;
}

Rat rat_enum(long j) {
  if (j < 0) throw std::invalid_argument("rat_enum: negative index");
  if (j == 0) return Rat(0);
  --j;
  for (long n = 1;; ++n) {
    std::vector<Rat> level;
    if (n == 1) {
      level.push_back(Rat(1));
    } else {
      for (long q = 1; q < n; ++q)
        if (std::gcd(n, q) == 1) level.push_back(Rat(n) / Rat(q));
      for (long p = n - 1; p >= 1; --p)
        if (std::gcd(p, n) == 1) level.push_back(Rat(p) / Rat(n));
    }
    long sz = static_cast<long>(level.size());
    if (j < 2 * sz) return j < sz ? level[j] : -level[j - sz];
    j -= 2 * sz;
  }
}

bool LineSelectRule::side_a(long n) const { return cmp(f(n)[i0], r) <= 0; }

namespace {

struct Run {
  long a = 0, b = 0;  // inclusive bounds, valid unless the matching flag is set
  bool left_inf = false, right_inf = false;
};

Run find_run(const LineSelectRule& R, long n) {
  Run run;
  bool A = R.side_a(n);
  run.a = run.b = n;
  run.left_inf = true;
  for (long k = 1; k <= R.horizon; ++k)
    if (R.side_a(n - k) != A) {
      run.a = n - k + 1;
      run.left_inf = false;
      break;
    }
  run.right_inf = true;
  for (long k = 1; k <= R.horizon; ++k)
    if (R.side_a(n + k) != A) {
      run.b = n + k - 1;
      run.right_inf = false;
      break;
    }
  return run;
}

// Greedy independent selection on a finite run of consecutive indices,
// scanning nodes in the order of their labels.
bool finite_run_selected(const LineSelectRule& R, const Run& run, long n) {
  std::vector<long> idx;
  for (long k = run.a; k <= run.b; ++k) idx.push_back(k);
  std::sort(idx.begin(), idx.end(), [&](long x, long y) {
    Pt px = R.f(x), py = R.f(y);
    if (lex_less(px, py)) return true;
    if (lex_less(py, px)) return false;
    return x < y;
  });
  std::vector<char> sel(run.b - run.a + 1, 0);
  for (long k : idx) {
    bool ok = true;
    if (k > run.a && sel[k - 1 - run.a]) ok = false;
    if (k < run.b && sel[k + 1 - run.a]) ok = false;
    if (ok) sel[k - run.a] = 1;
  }
  return sel[n - run.a];
}

bool run_selected(const LineSelectRule& R, const Run& run, long n) {
  if (run.left_inf && run.right_inf) return n % 2 == 0;
  if (run.left_inf) return (run.b - n) % 2 == 0;
  if (run.right_inf) return (n - run.a) % 2 == 0;
  return finite_run_selected(R, run, n);
}

bool a_side_selected(const LineSelectRule& R, long n) {
  return run_selected(R, find_run(R, n), n);
}

}  // namespace

bool LineSelectRule::selected(long n) const {
  Run run = find_run(*this, n);
  if (side_a(n)) return run_selected(*this, run, n);
  // B side: drop run-boundary nodes adjacent to a selected A-side node
  if (!run.left_inf && a_side_selected(*this, run.a - 1)) {
    if (n == run.a) return false;
    ++run.a;
  }
  if (!run.right_inf && a_side_selected(*this, run.b + 1)) {
    if (n == run.b) return false;
    --run.b;
  }
  return run_selected(*this, run, n);
}

LineSelectRule line_select(std::function<Pt(long)> f, long window, long horizon) {
  LineSelectRule R;
  R.f = std::move(f);
  R.horizon = horizon;
  std::vector<Pt> probes;
  for (long n = -window; n <= window; ++n) probes.push_back(R.f(n));
  int dim = probes[0].dim;
  for (int k = 0; k < dim && R.i0 < 0; ++k)
    for (const Pt& p : probes)
      if (p[k] != probes[0][k]) {
        R.i0 = k;
        break;
      }
  if (R.i0 < 0) throw std::invalid_argument("line_select: degenerate labeling");
  for (long j = 0;; ++j) {
    Rat r = rat_enum(j);
    bool some_a = false, some_b = false;
    for (const Pt& p : probes)
      (cmp(p[R.i0], r) <= 0 ? some_a : some_b) = true;
    if (some_a && some_b) {
      R.r = r;
      R.j0 = j;
      break;
    }
  }
  return R;
}

// ---- greedy baseline ----

namespace {

// conv(pts) ∩ rint(facet fid) ⊆ container? pts must already lie in cl(facet).
bool hull_facet_ok(const Scene& S, int fid, const std::vector<Pt>& pts) {
  int G = -1;
  for (const Pt& p : pts) {
    int f = locate_face(S.L, p);
    G = G < 0 ? f : face_join(S.L, G, f);
  }
  if (G != fid) return true;  // hull stays inside the facet's boundary
  const FacetDecoration* dec = S.facet_dec(fid);
  if (!dec || dec->mode == FacetDecoration::Mode::empty) return false;
  if (dec->mode == FacetDecoration::Mode::full) return true;
  Polytope hp = convex_hull(pts);
  for (const FacetPiece& piece : dec->pieces) {
    PieceGeom g = make_piece_geom(S.L, fid, &piece);
    bool ok = true;
    for (const Pt& p : hp.verts)
      if (!g.in_closure(p)) ok = false;
    if (!ok) continue;
    // boundary representatives of the hull that fall in the facet's relative
    // interior must lie in the (relatively open) piece itself
    auto rint_needs_open = [&](const Pt& z) {
      return locate_face(S.L, z) != fid || g.in_relopen(z);
    };
    if (hp.dim == 0) {
      ok = rint_needs_open(hp.verts[0]);
    } else if (hp.dim == 1) {
      ok = rint_needs_open(hp.verts.front()) && rint_needs_open(hp.verts.back()) &&
           rint_needs_open(midpoint(hp.verts.front(), hp.verts.back()));
    } else {
      for (std::size_t i = 0; i < hp.verts.size() && ok; ++i) {
        const Pt& u = hp.verts[i];
        const Pt& v = hp.verts[(i + 1) % hp.verts.size()];
        ok = rint_needs_open(u) && rint_needs_open(midpoint(u, v));
      }
    }
    if (ok) return true;
  }
  return false;
}

bool hull_in_scene(const Scene& S, const std::vector<Pt>& pts) {
  // vertices of C inside the hull must be flagged (they can only enter as
  // candidate points, being extreme in C)
  for (int v = 0; v < static_cast<int>(S.C.verts.size()); ++v)
    for (const Pt& p : pts)
      if (p == S.C.verts[v] && !S.vertex_flags[v]) return false;
  for (int eid : S.edge_face_ids()) {
    const auto& ev = S.L.faces[eid].verts;
    std::vector<Rat> ts;
    for (const Pt& p : pts) {
      int f = locate_face(S.L, p);
      if (f == eid)
        ts.push_back(S.edge_param(eid, p));
      else if (f == ev[0])
        ts.push_back(Rat(0));
      else if (f == ev[1])
        ts.push_back(Rat(1));
    }
    if (ts.empty()) continue;
    Rat lo = ts[0], hi = ts[0];
    for (const Rat& t : ts) {
      if (cmp(t, lo) < 0) lo = t;
      if (cmp(t, hi) > 0) hi = t;
    }
    Iv iv{lo, hi, sign(lo) != 0, cmp(hi, Rat(1)) != 0};
    if (!iv_valid(iv)) continue;  // single endpoint touch, no rint part
    const EdgeDecoration* dec = S.edge_dec(eid);
    if (!dec || !iv_set_covers(dec->pieces, iv)) return false;
  }
  if (S.C.dim == 3) {
    for (int fid : S.facet_face_ids()) {
      const auto& fv = S.L.faces[fid].verts;
      std::vector<Pt> T;
      for (const Pt& p : pts) {
        int f = locate_face(S.L, p);
        const auto& xv = S.L.faces[f].verts;
        if (f != S.L.top &&
            std::includes(fv.begin(), fv.end(), xv.begin(), xv.end()))
          T.push_back(p);
      }
      if (T.empty()) continue;
      if (!hull_facet_ok(S, fid, T)) return false;
    }
  }
  return true;
}

bool point_in_polytope(const Polytope& P, const Pt& q) {
  if (P.dim < 0) return false;
  if (P.dim == 0) return q == P.verts[0];
  if (P.dim == 1)
    return closed_segments_intersect(P.verts.front(), P.verts.back(), q, q).kind !=
           SegIsect::empty;
  for (const Halfspace& h : P.affine_eqs)
    if (dot(h.n, q) != h.off) return false;
  for (const Halfspace& h : P.facet_planes)
    if (cmp(dot(h.n, q), h.off) > 0) return false;
  return true;
}

}  // namespace

std::vector<Pt> greedy_baseline(const Scene& S, const std::vector<Pt>& candidates) {
  for (const Pt& p : candidates)
    if (!membership(S, p))
      throw std::invalid_argument("greedy_baseline: candidate outside X");
  std::vector<Pt> kept;
  for (const Pt& p : candidates) {
    std::vector<Pt> trial = kept;
    trial.push_back(p);
    if (hull_in_scene(S, trial)) kept.push_back(p);
  }
  return kept;
}

std::vector<Pt> greedy_baseline(const std::function<bool(const Pt&)>& in_x,
                                const std::vector<Pt>& candidates,
                                const std::vector<Pt>& probes) {
  for (const Pt& p : candidates)
    if (!in_x(p)) throw std::invalid_argument("greedy_baseline: candidate outside X");
  std::vector<Pt> kept;
  for (const Pt& p : candidates) {
    std::vector<Pt> trial = kept;
    trial.push_back(p);
    Polytope hp = convex_hull(trial);
    bool ok = true;
    for (const Pt& q : probes)
      if (point_in_polytope(hp, q) && !in_x(q)) ok = false;
    if (ok) kept.push_back(p);
  }
  return kept;
}

// ---- maximality verification ----

namespace {

// Chord conditions of one (new or modified) item against all nearby items.
// With the kernel excluded, any item that is not near blocks the extension.
bool extension_ok(const Scene& S, const ConvexWitness& w, const WitnessItemRef& a) {
  std::vector<WitnessItemRef> near = witness_items_near(S, w, a.fid);
  if (!w.kernel_included && witness_items_of(w).size() > near.size()) return false;
  for (const WitnessItemRef& b : near) {
    if (b.fid == a.fid) continue;
    if (!witness_pair_ok(S, w, a, b)) return false;
  }
  return true;
}

Rat pick_in_difference(const Iv& J, const Iv* sel) {
  if (!sel) return (J.lo + J.hi) / 2;
  if (cmp(J.lo, sel->lo) < 0) return (J.lo + sel->lo) / 2;
  if (J.lo == sel->lo && J.lo_in && !sel->lo_in) return J.lo;
  if (cmp(J.hi, sel->hi) > 0) return (sel->hi + J.hi) / 2;
  return J.hi;
}

}  // namespace

MaximalityVerdict verify_maximal(const Scene& S, const ConvexWitness& w) {
  WitnessCheck chk = witness_check(S, w);
  if (!chk.contained || !chk.convex)
    throw std::invalid_argument("verify_maximal: unverifiable witness: " + chk.detail);

  MaximalityVerdict out;
  ConvexWitness wk = w;

  // the open kernel itself
  if (!w.kernel_included) {
    wk.kernel_included = true;
    WitnessCheck c2 = witness_check(S, wk);
    if (c2.contained && c2.convex) {
      out.maximal = false;
      out.counterexample = S.L.rint_point(S.L.top);
      out.where = "kernel";
      return out;
    }
    wk.kernel_included = false;
  }

  // facets: a full selection, or one whole piece
  if (S.C.dim == 3)
    for (int fid : S.facet_face_ids()) {
      const FacetDecoration* dec = S.facet_dec(fid);
      if (!dec || dec->mode == FacetDecoration::Mode::empty) continue;
      FacetSel cur = facet_sel_of(w, fid);
      if (dec->mode == FacetDecoration::Mode::full) {
        if (cur.kind == FacetSel::Kind::full) continue;
        wk.facet_sel[fid] = FacetSel{FacetSel::Kind::full, -1};
        bool ok = extension_ok(S, wk, WitnessItemRef{WitnessItemRef::facet, fid});
        wk.facet_sel.erase(fid);
        if (ok) {
          out.maximal = false;
          out.counterexample = S.L.rint_point(fid);
          out.where = "facet " + fname(S.L, fid);
          return out;
        }
        continue;
      }
      if (cur.kind != FacetSel::Kind::none) continue;  // a full piece: no excess possible
      for (int j = 0; j < static_cast<int>(dec->pieces.size()); ++j) {
        wk.facet_sel[fid] = FacetSel{FacetSel::Kind::piece, j};
        bool ok = extension_ok(S, wk, WitnessItemRef{WitnessItemRef::facet, fid});
        wk.facet_sel.erase(fid);
        if (ok) {
          out.maximal = false;
          out.counterexample = piece_rep(dec->pieces[j]);
          out.where = "facet " + fname(S.L, fid) + " piece " + std::to_string(j);
          return out;
        }
      }
    }

  // edges: candidate intervals with endpoints on the breakpoint subdivision
  for (int eid : S.edge_face_ids()) {
    const EdgeDecoration* dec = S.edge_dec(eid);
    if (!dec || dec->pieces.empty()) continue;
    auto selit = w.edge_sel.find(eid);
    const Iv* sel = selit == w.edge_sel.end() ? nullptr : &selit->second;
    {
      std::vector<Iv> rem = dec->pieces;
      if (sel) rem = iv_set_subtract(rem, *sel);
      if (rem.empty()) continue;  // everything decorated is already selected
    }
    std::vector<Rat> bs = edge_breakpoints(S, w, eid);
    for (const Iv& piece : dec->pieces) {
      bs.push_back(piece.lo);
      bs.push_back(piece.hi);
    }
    std::sort(bs.begin(), bs.end(),
              [](const Rat& a, const Rat& b) { return cmp(a, b) < 0; });
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = i; j < bs.size(); ++j)
        for (int li = 0; li < 2; ++li)
          for (int hi = 0; hi < 2; ++hi) {
            Iv J{bs[i], bs[j], li == 1, hi == 1};
            if (i == j && !(li == 1 && hi == 1)) continue;
            if (!iv_valid(J)) continue;
            if (sel && (*sel == J || !iv_subset(*sel, J))) continue;
            if (!iv_set_covers(dec->pieces, J)) continue;
            wk.edge_sel[eid] = J;
            bool ok = extension_ok(S, wk, WitnessItemRef{WitnessItemRef::edge, eid});
            if (sel)
              wk.edge_sel[eid] = *sel;
            else
              wk.edge_sel.erase(eid);
            if (ok) {
              out.maximal = false;
              out.counterexample = S.edge_point(eid, pick_in_difference(J, sel));
              out.where = "edge " + fname(S.L, eid);
              return out;
            }
          }
  }

  // vertices
  for (int v = 0; v < static_cast<int>(S.C.verts.size()); ++v) {
    if (!S.vertex_flags[v]) continue;
    if (std::binary_search(w.verts.begin(), w.verts.end(), v)) continue;
    if (vertex_addable(S, w, v)) {
      out.maximal = false;
      out.counterexample = S.C.verts[v];
      out.where = "vertex " + std::to_string(v);
      return out;
    }
  }
  return out;
}

}  // namespace mcv
