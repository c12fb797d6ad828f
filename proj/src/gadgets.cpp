#include "mcv/gadgets.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcv {

namespace {

Iv point_iv(const Rat& t) { return Iv{t, t, true, true}; }

std::vector<std::pair<Rat, Rat>> checked_choices(
    const std::vector<std::vector<Rat>>& choices, int i) {
  std::vector<std::pair<Rat, Rat>> out;  // (value, value); caller may remap
  if (choices[i].empty()) throw std::invalid_argument("empty choice set");
  for (const Rat& t : choices[i]) {
    if (sign(t) <= 0 || t >= 1)
      throw std::invalid_argument("choice parameter outside (0,1)");
    out.push_back({t, t});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string face_name(int id) {
  std::ostringstream os;
  os << "face " << id;
  return os.str();
}

}  // namespace

std::optional<std::string> validate_complex(const SimplicialComplex& K) {
  if (K.n < 0) return "negative vertex count";
  std::set<std::vector<int>> seen;
  for (const auto& f : K.faces) {
    if (!std::is_sorted(f.begin(), f.end()) ||
        std::adjacent_find(f.begin(), f.end()) != f.end())
      return "face members not sorted and distinct";
    for (int v : f)
      if (v < 0 || v >= K.n) return "face member out of range";
    if (!seen.insert(f).second) return "duplicate face";
  }
  if (!seen.count({})) return "empty face missing";
  if (!std::is_sorted(K.faces.begin(), K.faces.end())) return "faces not sorted";
  for (const auto& f : K.faces)
    for (size_t i = 0; i < f.size(); ++i) {
      std::vector<int> g = f;
      g.erase(g.begin() + i);
      if (!seen.count(g)) return "not downward closed";
    }
  return std::nullopt;
}

std::vector<std::vector<int>> maximal_faces(const SimplicialComplex& K) {
  std::vector<std::vector<int>> out;
  for (const auto& f : K.faces) {
    bool maximal = true;
    for (const auto& g : K.faces)
      if (g.size() > f.size() && std::includes(g.begin(), g.end(), f.begin(), f.end()))
        maximal = false;
    if (maximal) out.push_back(f);
  }
  return out;
}

GadgetInstance gen_cc_scene(int N, const std::vector<std::vector<Rat>>& choices) {
  if (N < 1) throw std::invalid_argument("gen_cc_scene: N must be >= 1");
  if ((int)choices.size() != N)
    throw std::invalid_argument("gen_cc_scene: need one choice set per polyline edge");

  // cap height: strictly above every tangent of the polyline so each p_n stays
  // a hull vertex (slope to the cap must exceed the last polyline slope 2N-1)
  Rat M(N * N + 2 * N + 2);
  SceneData d;
  d.dim = 2;
  d.vertices.push_back(Pt(Rat(-1), M));
  for (int n = 0; n <= N; ++n) d.vertices.push_back(Pt(Rat(n), Rat(n) * Rat(n)));
  d.vertices.push_back(Pt(Rat(N + 1), M));
  d.vertex_flags.assign(d.vertices.size(), false);

  std::vector<std::vector<std::pair<Rat, Rat>>> per_edge(N);
  for (int n = 0; n < N; ++n) {
    per_edge[n] = checked_choices(choices, n);
    EdgeDecoration dec;
    for (const auto& [t, s] : per_edge[n]) dec.pieces.push_back(point_iv(t));
    d.edge_decorations[{n + 1, n + 2}] = dec;
  }

  GadgetInstance g;
  g.kind = GadgetInstance::Kind::cc;
  g.scene = build_scene(d);
  for (int n = 0; n < N; ++n) {
    GadgetInstance::Block b;
    b.edge_fid = g.scene->L.by_verts.at({n + 1, n + 2});
    for (const auto& [t, s] : per_edge[n]) {
      b.params.push_back(t);
      b.source.push_back(s);
    }
    g.blocks.push_back(std::move(b));
  }
  return g;
}

GadgetInstance gen_unif_prism(int m, const std::vector<std::vector<Rat>>& choices) {
  if (m < 3) throw std::invalid_argument("gen_unif_prism: m must be >= 3");
  if ((int)choices.size() != m)
    throw std::invalid_argument("gen_unif_prism: need one choice set per vertical edge");

  // rational m-gon inscribed in the unit circle, angularly ordered
  std::vector<Pt> base;
  for (int j = 0; j < m; ++j) {
    Rat t = Rat(2 * j - (m - 1)) / Rat(m);
    Rat den = 1 + t * t;
    base.push_back(Pt((1 - t * t) / den, 2 * t / den));
  }
  std::vector<Pt> pts;
  for (const Pt& b : base)
    for (int z = 0; z <= 1; ++z) pts.push_back(Pt(b[0], b[1], Rat(z)));

  Polytope P = convex_hull(pts);
  SceneData d;
  d.dim = 3;
  d.vertices = P.verts;
  d.facets = P.facet_cycles;
  d.vertex_flags.assign(P.verts.size(), false);
  for (const auto& cyc : P.facet_cycles) {
    std::vector<int> key = cyc;
    std::sort(key.begin(), key.end());
    FacetDecoration fd;
    fd.mode = FacetDecoration::Mode::full;
    d.facet_decorations[key] = fd;
  }

  auto vid = [&](const Pt& p) {
    for (size_t i = 0; i < P.verts.size(); ++i)
      if (P.verts[i] == p) return (int)i;
    throw std::logic_error("gen_unif_prism: hull dropped a prism vertex");
  };

  std::vector<std::pair<int, int>> vedges(m);   // sorted vertex id pairs
  std::vector<bool> flipped(m);                 // true when low id is the top vertex
  std::vector<std::vector<std::pair<Rat, Rat>>> per_edge(m);
  for (int j = 0; j < m; ++j) {
    int lo = vid(Pt(base[j][0], base[j][1], Rat(0)));
    int hi = vid(Pt(base[j][0], base[j][1], Rat(1)));
    bool flip = lo > hi;
    if (flip) std::swap(lo, hi);
    vedges[j] = {lo, hi};
    flipped[j] = flip;
    per_edge[j] = checked_choices(choices, j);
    if (flip)
      for (auto& [t, s] : per_edge[j]) t = 1 - t;
    std::sort(per_edge[j].begin(), per_edge[j].end());
    EdgeDecoration dec;
    for (const auto& [t, s] : per_edge[j]) dec.pieces.push_back(point_iv(t));
    d.edge_decorations[vedges[j]] = dec;
  }

  GadgetInstance g;
  g.kind = GadgetInstance::Kind::prism;
  g.scene = build_scene(d);
  g.kernel_faces = g.scene->facet_face_ids();
  for (int j = 0; j < m; ++j) {
    GadgetInstance::Block b;
    b.edge_fid = g.scene->L.by_verts.at({vedges[j].first, vedges[j].second});
    for (const auto& [t, s] : per_edge[j]) {
      b.params.push_back(t);
      b.source.push_back(s);
    }
    g.blocks.push_back(std::move(b));
  }
  return g;
}

GadgetInstance gen_sc_scene(const SimplicialComplex& K) {
  if (K.n != 3 && K.n != 4)
    throw std::invalid_argument("gen_sc_scene: vertex count must be 3 or 4");
  if (auto why = validate_complex(K))
    throw std::invalid_argument("gen_sc_scene: " + *why);

  GadgetInstance g;
  g.kind = GadgetInstance::Kind::sc;
  g.complex = K;
  if (K.n == 3)
    g.simplex = {Pt(Rat(0), Rat(0)), Pt(Rat(1), Rat(0)), Pt(Rat(0), Rat(1))};
  else
    g.simplex = {Pt(Rat(0), Rat(0), Rat(0)), Pt(Rat(1), Rat(0), Rat(0)),
                 Pt(Rat(0), Rat(1), Rat(0)), Pt(Rat(0), Rat(0), Rat(1))};

  std::vector<int> all(K.n);
  for (int i = 0; i < K.n; ++i) all[i] = i;
  bool full = std::find(K.faces.begin(), K.faces.end(), all) != K.faces.end();
  if (!full) return g;

  // X is the closed simplex: a fully decorated scene
  SceneData d;
  d.dim = K.n - 1;
  if (K.n == 3) {
    d.vertices = g.simplex;
    for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {0, 2}})
      d.edge_decorations[{i, j}] = EdgeDecoration{{Iv{Rat(0), Rat(1), false, false}}};
  } else {
    Polytope P = convex_hull(g.simplex);
    d.vertices = P.verts;
    d.facets = P.facet_cycles;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        d.edge_decorations[{i, j}] = EdgeDecoration{{Iv{Rat(0), Rat(1), false, false}}};
    for (const auto& cyc : P.facet_cycles) {
      std::vector<int> key = cyc;
      std::sort(key.begin(), key.end());
      FacetDecoration fd;
      fd.mode = FacetDecoration::Mode::full;
      d.facet_decorations[key] = fd;
    }
  }
  d.vertex_flags.assign(K.n, true);
  g.scene = build_scene(d);
  return g;
}

GadgetInstance gen_ac_instance(const std::vector<int>& family_sizes) {
  if (family_sizes.empty()) throw std::invalid_argument("gen_ac_instance: empty family");
  GadgetInstance g;
  g.kind = GadgetInstance::Kind::ac;
  for (int s : family_sizes) {
    if (s < 1) throw std::invalid_argument("gen_ac_instance: empty member set");
    std::vector<int> coords;
    for (int a = 0; a < s; ++a) coords.push_back(g.ac_dim + a);
    g.ac_dim += s;
    g.ac_blocks.push_back(std::move(coords));
  }
  auto blocks = g.ac_blocks;
  int dim = g.ac_dim;
  g.ac_in_D = [blocks, dim](const VecQ& p) {
    if ((int)p.size() != dim) return false;
    for (const Rat& x : p)
      if (sign(x) < 0) return false;
    int touched = 0;
    for (const auto& blk : blocks) {
      for (int c : blk)
        if (sign(p[c]) > 0) {
          ++touched;
          break;
        }
    }
    return touched >= 2;
  };
  auto in_D = g.ac_in_D;
  g.ac_in_X = [in_D, dim](const VecQ& p) {
    if ((int)p.size() != dim) return false;
    if (in_D(p)) return true;
    int ones = 0, other = 0;
    for (const Rat& x : p) {
      if (x == 1)
        ++ones;
      else if (sign(x) != 0)
        ++other;
    }
    return ones == 1 && other == 0;  // a block unit vector
  };
  return g;
}

namespace {

void scene_conditions(const GadgetInstance& g, ConditionsReport& rep) {
  const Scene& S = *g.scene;
  const FaceLattice& L = S.L;
  std::set<int> kernel(g.kernel_faces.begin(), g.kernel_faces.end());
  kernel.insert(L.top);

  auto bad = [&](const std::string& s) {
    rep.ok = false;
    rep.violations.push_back(s);
  };

  std::set<int> block_edges;
  for (size_t i = 0; i < g.blocks.size(); ++i) {
    const auto& b = g.blocks[i];
    std::ostringstream who;
    who << "block " << i;
    if (b.params.empty()) bad(who.str() + ": empty");
    if (kernel.count(b.edge_fid))
      bad(who.str() + ": carrier " + face_name(b.edge_fid) + " belongs to D");
    if (!block_edges.insert(b.edge_fid).second)
      bad(who.str() + ": shares a carrier edge with another block");
    const EdgeDecoration* dec = S.edge_dec(b.edge_fid);
    for (const Rat& t : b.params)
      if (!dec || !iv_set_contains(dec->pieces, t))
        bad(who.str() + ": point at t=" + t.get_str() + " not decorated");
    // condition (2): no open sub-segment of X between two block points
    if (dec)
      for (size_t a = 0; a + 1 < b.params.size(); ++a)
        for (size_t c = a + 1; c < b.params.size(); ++c) {
          Iv gap{b.params[a], b.params[c], false, false};
          if (iv_set_covers(dec->pieces, gap)) {
            Rat mid = (b.params[a] + b.params[c]) / 2;
            bad(who.str() + ": condition (2) fails, chord in X near t=" +
                mid.get_str());
          }
        }
  }

  // condition (1): joins of X-carriers with D-faces stay inside D
  std::vector<int> carriers(block_edges.begin(), block_edges.end());
  for (int f : kernel) carriers.push_back(f);
  for (int f : carriers)
    for (int k : kernel)
      if (!kernel.count(face_join(L, f, k)))
        bad("condition (1) fails: join of " + face_name(f) + " and " +
            face_name(k) + " leaves D");

  // condition (3): chords between distinct blocks stay inside D
  for (size_t i = 0; i < g.blocks.size(); ++i)
    for (size_t j = i + 1; j < g.blocks.size(); ++j) {
      int jf = face_join(L, g.blocks[i].edge_fid, g.blocks[j].edge_fid);
      if (!kernel.count(jf)) {
        std::ostringstream os;
        os << "condition (3) fails: blocks " << i << " and " << j
           << " join through " << face_name(jf);
        bad(os.str());
      }
    }
}

VecQ unit_vec(int dim, int c) {
  VecQ v(dim, Rat(0));
  v[c] = 1;
  return v;
}

VecQ vec_lerp(const VecQ& a, const VecQ& b, const Rat& t) {
  VecQ out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

std::string vec_str(const VecQ& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

void ac_conditions(const GadgetInstance& g, int samples, ConditionsReport& rep) {
  auto bad = [&](const std::string& s) {
    rep.ok = false;
    rep.violations.push_back(s);
  };
  if (samples < 1) samples = 1;

  // sample points of D: two-block supports with assorted positive weights
  std::vector<VecQ> d_samples;
  const std::vector<std::pair<Rat, Rat>> weights = {
      {Rat(1), Rat(1)}, {Rat(1, 2), Rat(2)}, {Rat(3), Rat(1, 3)}};
  for (size_t A = 0; A < g.ac_blocks.size(); ++A)
    for (size_t B = A + 1; B < g.ac_blocks.size(); ++B)
      for (const auto& [u, v] : weights) {
        VecQ p(g.ac_dim, Rat(0));
        p[g.ac_blocks[A].front()] = u;
        p[g.ac_blocks[B].back()] = v;
        d_samples.push_back(std::move(p));
      }
  std::vector<VecQ> x_samples = d_samples;
  for (const auto& blk : g.ac_blocks)
    for (int c : blk) x_samples.push_back(unit_vec(g.ac_dim, c));

  for (const VecQ& q : d_samples) {
    if (!g.ac_in_D(q)) bad("D sample rejected by the D predicate " + vec_str(q));
    for (const VecQ& p : x_samples) {
      if (p == q) continue;
      for (int r = 1; r <= samples; ++r) {
        Rat t = Rat(r) / Rat(samples + 1);
        VecQ m = vec_lerp(p, q, t);
        if (!g.ac_in_D(m)) {
          bad("condition (1) fails at " + vec_str(m));
          break;
        }
      }
    }
  }

  // condition (2): the midpoint of two same-block unit vectors must leave X
  for (size_t A = 0; A < g.ac_blocks.size(); ++A) {
    const auto& blk = g.ac_blocks[A];
    for (size_t i = 0; i < blk.size(); ++i)
      for (size_t j = i + 1; j < blk.size(); ++j) {
        VecQ m = vec_lerp(unit_vec(g.ac_dim, blk[i]), unit_vec(g.ac_dim, blk[j]),
                          Rat(1, 2));
        if (g.ac_in_X(m)) {
          std::ostringstream os;
          os << "condition (2) fails: block " << A << " midpoint " << vec_str(m)
             << " lies in X";
          bad(os.str());
        }
      }
  }

  // condition (3): chords between unit vectors of distinct blocks stay in D
  for (size_t A = 0; A < g.ac_blocks.size(); ++A)
    for (size_t B = A + 1; B < g.ac_blocks.size(); ++B)
      for (int ca : g.ac_blocks[A])
        for (int cb : g.ac_blocks[B])
          for (int r = 1; r <= samples; ++r) {
            Rat t = Rat(r) / Rat(samples + 1);
            VecQ m = vec_lerp(unit_vec(g.ac_dim, ca), unit_vec(g.ac_dim, cb), t);
            if (!g.ac_in_D(m)) {
              std::ostringstream os;
              os << "condition (3) fails: blocks " << A << " and " << B << " at "
                 << vec_str(m);
              bad(os.str());
              break;
            }
          }
}

}  // namespace

ConditionsReport verify_conditions(const GadgetInstance& g, int samples) {
  ConditionsReport rep;
  if (g.kind == GadgetInstance::Kind::ac) {
    ac_conditions(g, samples, rep);
    return rep;
  }
  if (!g.scene) return rep;  // combinatorial sc instance: no blocks, vacuous
  scene_conditions(g, rep);
  return rep;
}

std::vector<Rat> extract_choice(const GadgetInstance& g, const ConvexWitness& w) {
  if (!g.scene) throw std::invalid_argument("extract_choice: no scene");
  std::vector<Rat> out;
  for (size_t i = 0; i < g.blocks.size(); ++i) {
    const auto& b = g.blocks[i];
    auto it = w.edge_sel.find(b.edge_fid);
    std::vector<size_t> hit;
    if (it != w.edge_sel.end())
      for (size_t k = 0; k < b.params.size(); ++k)
        if (it->second.contains(b.params[k])) hit.push_back(k);
    if (hit.size() != 1) {
      std::ostringstream os;
      os << "extract_choice: block " << i << " meets W in " << hit.size()
         << " points";
      throw std::logic_error(os.str());
    }
    out.push_back(b.source[hit[0]]);
  }
  return out;
}

std::vector<int> extract_choice(const GadgetInstance& g,
                                const std::function<bool(const VecQ&)>& in_w) {
  if (g.kind != GadgetInstance::Kind::ac)
    throw std::invalid_argument("extract_choice: oracle form is for abstract instances");
  std::vector<int> out;
  for (size_t A = 0; A < g.ac_blocks.size(); ++A) {
    std::vector<int> hit;
    for (size_t a = 0; a < g.ac_blocks[A].size(); ++a)
      if (in_w(unit_vec(g.ac_dim, g.ac_blocks[A][a]))) hit.push_back((int)a);
    if (hit.size() != 1) {
      std::ostringstream os;
      os << "extract_choice: block " << A << " meets W in " << hit.size()
         << " points";
      throw std::logic_error(os.str());
    }
    out.push_back(hit[0]);
  }
  return out;
}

std::vector<Pt> solve_sc(const GadgetInstance& g) {
  if (g.kind != GadgetInstance::Kind::sc)
    throw std::invalid_argument("solve_sc: not an sc instance");
  if (g.scene) {
    // X is the whole closed simplex
    std::vector<Pt> out = g.simplex;
    Pt bary = g.simplex[0];
    for (size_t i = 1; i < g.simplex.size(); ++i) bary = bary + g.simplex[i];
    out.push_back(Rat(1, (long)g.simplex.size()) * bary);
    return out;
  }
  auto mf = maximal_faces(g.complex);
  const std::vector<int>& S = mf.front();
  if (S.empty()) return {};
  if (S.size() == 1) return {g.simplex[S[0]]};
  if (S.size() == 2) {
    // one carrier line: hand the closed edge to the dimension-1 solver
    Pt a = g.simplex[S[0]], b = g.simplex[S[1]];
    LineSubset X;
    X.base = a;
    X.dir = b - a;
    X.pieces = {LinePiece{false, false, Iv{Rat(0), Rat(1), true, true}}};
    LinePiece w = solve_dim1(X, midpoint(a, b));
    Pt lo = lerp(a, b, w.iv.lo), hi = lerp(a, b, w.iv.hi);
    return {lo, hi, midpoint(lo, hi)};
  }
  std::vector<Pt> out;
  Pt bary = g.simplex[S[0]];
  for (size_t i = 0; i < S.size(); ++i) {
    out.push_back(g.simplex[S[i]]);
    if (i) bary = bary + g.simplex[S[i]];
  }
  out.push_back(Rat(1, (long)S.size()) * bary);
  return out;
}

std::vector<int> sc_support(const GadgetInstance& g, const std::vector<Pt>& w) {
  if (g.kind != GadgetInstance::Kind::sc)
    throw std::invalid_argument("sc_support: not an sc instance");
  int d = g.complex.n - 1;
  std::set<int> supp;
  for (const Pt& p : w) {
    Rat rest(1);
    for (int i = 0; i < d; ++i) {
      if (sign(p[i]) > 0) supp.insert(i + 1);
      rest -= p[i];
    }
    if (sign(rest) > 0) supp.insert(0);
  }
  return {supp.begin(), supp.end()};
}

}  // namespace mcv
