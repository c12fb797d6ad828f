#include "mcv/polytope.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "mcv/poly2.hpp"

namespace mcv {

namespace {

// Indices of the hull vertices in ccw order starting at the lexicographic
// minimum (Andrew's monotone chain; collinear points dropped).
std::vector<int> hull2_ccw(const std::vector<Pt>& pts) {
  int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
  auto build = [&](const std::vector<int>& order) {
    std::vector<int> h;
    for (int i : order) {
      while (h.size() >= 2 &&
             orientation2(pts[h[h.size() - 2]], pts[h[h.size() - 1]], pts[i]) <= 0)
        h.pop_back();
      h.push_back(i);
    }
    return h;
  };
  std::vector<int> rev(idx.rbegin(), idx.rend());
  std::vector<int> lo = build(idx), hi = build(rev);
  lo.pop_back();
  hi.pop_back();
  lo.insert(lo.end(), hi.begin(), hi.end());
  return lo;
}

std::vector<Pt> dedup_sorted(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// First two difference vectors (against pts[0]) spanning the plane of an
// affinely 2-dimensional point set.
std::pair<Pt, Pt> plane_basis(const std::vector<Pt>& pts) {
  Pt u, v;
  bool have_u = false;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Pt d = pts[i] - pts[0];
    bool zero = true;
    for (int k = 0; k < d.dim; ++k) zero = zero && sign(d[k]) == 0;
    if (zero) continue;
    if (!have_u) {
      u = d;
      have_u = true;
      continue;
    }
    if (affine_dim({pts[0], pts[0] + u, pts[0] + d}) == 2) return {u, d};
  }
  throw std::logic_error("plane_basis: point set not 2-dimensional");
}

std::vector<Rat> plane_key(const Halfspace& h) {
  std::vector<Rat> k{h.n[0], h.n[1], h.n[2], h.off};
  for (const Rat& x : k)
    if (sign(x) != 0) {
      Rat f = abs(x);
      for (Rat& y : k) y /= f;
      break;
    }
  return k;
}

}  // namespace

Frame2 make_frame(const Pt& origin, const Pt& u, const Pt& v) { return Frame2{origin, u, v}; }

Pt Frame2::to_plane(const Pt& x) const {
  Pt w = x - origin;
  // Solve s*u + t*v = w using two independent rows.
  for (int i = 0; i < u.dim; ++i)
    for (int j = i + 1; j < u.dim; ++j) {
      Rat det = u[i] * v[j] - v[i] * u[j];
      if (sign(det) == 0) continue;
      Rat s = (w[i] * v[j] - v[i] * w[j]) / det;
      Rat t = (u[i] * w[j] - w[i] * u[j]) / det;
      return Pt(s, t);
    }
  throw std::logic_error("Frame2: degenerate basis");
}

Pt Frame2::from_plane(const Pt& st) const { return origin + st[0] * u + st[1] * v; }

bool Frame2::on_plane(const Pt& x) const {
  Pt st = to_plane(x);
  return from_plane(st) == x;
}

Polytope convex_hull(const std::vector<Pt>& points) {
  Polytope P;
  if (points.empty()) return P;
  P.ambient = points[0].dim;
  for (const Pt& p : points)
    if (p.dim != P.ambient) throw DimMismatch("convex_hull: mixed dimensions");
  if (P.ambient != 2 && P.ambient != 3)
    throw std::invalid_argument("convex_hull: ambient dimension must be 2 or 3");

  std::vector<Pt> pts = dedup_sorted(points);
  P.dim = affine_dim(pts);

  auto add_eq = [&](const Pt& n, const Pt& through) {
    P.affine_eqs.push_back(Halfspace{n, dot(n, through)});
  };

  if (P.dim == 0) {
    P.verts = {pts[0]};
    for (int i = 0; i < P.ambient; ++i) {
      Pt n;
      n.dim = P.ambient;
      n[i] = 1;
      add_eq(n, pts[0]);
    }
    return P;
  }

  if (P.dim == 1) {
    P.verts = {pts.front(), pts.back()};
    Pt d = pts.back() - pts.front();
    if (P.ambient == 2) {
      add_eq(Pt(Rat(-1) * d[1], d[0]), pts[0]);
    } else {
      std::vector<Pt> axes = {Pt(Rat(1), Rat(0), Rat(0)), Pt(Rat(0), Rat(1), Rat(0)),
                              Pt(Rat(0), Rat(0), Rat(1))};
      std::vector<Pt> ns;
      for (const Pt& e : axes) {
        Pt n = cross3(d, e);
        if (sign(n[0]) == 0 && sign(n[1]) == 0 && sign(n[2]) == 0) continue;
        if (ns.size() == 1) {
          Pt c = cross3(ns[0], n);
          if (sign(c[0]) == 0 && sign(c[1]) == 0 && sign(c[2]) == 0) continue;
        }
        ns.push_back(n);
        if (ns.size() == 2) break;
      }
      for (const Pt& n : ns) add_eq(n, pts[0]);
    }
    return P;
  }

  if (P.dim == 2) {
    Frame2 fr;
    if (P.ambient == 3) {
      auto [u, v] = plane_basis(pts);
      fr = make_frame(pts[0], u, v);
      add_eq(cross3(u, v), pts[0]);
    } else {
      fr = make_frame(Pt(Rat(0), Rat(0)), Pt(Rat(1), Rat(0)), Pt(Rat(0), Rat(1)));
    }
    std::vector<Pt> flat;
    for (const Pt& p : pts) flat.push_back(P.ambient == 3 ? fr.to_plane(p) : p);
    std::vector<int> cyc = hull2_ccw(flat);
    // Start the cycle at the ambient-lex minimum vertex.
    int start = 0;
    for (std::size_t i = 1; i < cyc.size(); ++i)
      if (lex_less(pts[cyc[i]], pts[cyc[start]])) start = static_cast<int>(i);
    std::rotate(cyc.begin(), cyc.begin() + start, cyc.end());
    for (int i : cyc) P.verts.push_back(pts[i]);

    int n = static_cast<int>(P.verts.size());
    // interior reference point: centroid of three distinct hull vertices (no
    // three are collinear); avoids summing all-vertex denominators
    Pt bary;
    bary.dim = P.ambient;
    for (int i : {0, n / 3, 2 * n / 3})
      for (int k = 0; k < P.ambient; ++k) bary[k] += P.verts[i][k] / 3;
    for (int i = 0; i < n; ++i) {
      int j = (i + 1) % n;
      Pt e = P.verts[j] - P.verts[i];
      Pt nrm = P.ambient == 2 ? Pt(e[1], Rat(-1) * e[0]) : cross3(e, P.affine_eqs[0].n);
      if (sign(dot(nrm, bary) - dot(nrm, P.verts[i])) > 0) nrm = Rat(-1) * nrm;
      P.facet_cycles.push_back(i < j ? std::vector<int>{i, j} : std::vector<int>{j, i});
      P.facet_planes.push_back(Halfspace{nrm, dot(nrm, P.verts[i])});
    }
    // Canonical facet order: by sorted vertex tuple.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return P.facet_cycles[a] < P.facet_cycles[b]; });
    std::vector<std::vector<int>> fc;
    std::vector<Halfspace> fp;
    for (int i : order) {
      fc.push_back(P.facet_cycles[i]);
      fp.push_back(P.facet_planes[i]);
    }
    P.facet_cycles = fc;
    P.facet_planes = fp;
    return P;
  }

  // Full-dimensional 3D hull: brute-force supporting planes over all triples.
  int n = static_cast<int>(pts.size());
  std::map<std::vector<Rat>, Halfspace> planes;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Pt nrm = cross3(pts[j] - pts[i], pts[k] - pts[i]);
        if (sign(nrm[0]) == 0 && sign(nrm[1]) == 0 && sign(nrm[2]) == 0) continue;
        Rat off = dot(nrm, pts[i]);
        bool pos = false, neg = false;
        for (int t = 0; t < n; ++t) {
          int s = sign(dot(nrm, pts[t]) - off);
          pos = pos || s > 0;
          neg = neg || s < 0;
        }
        if (pos && neg) continue;
        Halfspace h{pos ? Rat(-1) * nrm : nrm, pos ? Rat(-1) * off : off};
        planes.emplace(plane_key(h), h);
      }

  struct RawFacet {
    Halfspace h;
    std::vector<int> cycle;  // indices into pts
  };
  std::vector<RawFacet> raw;
  std::set<int> vert_idx;
  for (auto& [key, h] : planes) {
    std::vector<int> on;
    for (int t = 0; t < n; ++t)
      if (dot(h.n, pts[t]) == h.off) on.push_back(t);
    std::vector<Pt> onp;
    for (int t : on) onp.push_back(pts[t]);
    auto [u, v] = plane_basis(onp);
    Frame2 fr = make_frame(onp[0], u, v);
    std::vector<Pt> flat;
    for (const Pt& p : onp) flat.push_back(fr.to_plane(p));
    std::vector<int> cyc2 = hull2_ccw(flat);
    std::vector<int> cyc;
    for (int c : cyc2) cyc.push_back(on[c]);
    // Orient ccw as seen from outside (right-hand rule against outward -h.n).
    Pt fn = cross3(pts[cyc[1]] - pts[cyc[0]], pts[cyc[2]] - pts[cyc[0]]);
    if (sign(dot(fn, h.n)) < 0) std::reverse(cyc.begin(), cyc.end());
    for (int c : cyc) vert_idx.insert(c);
    raw.push_back(RawFacet{h, cyc});
  }

  std::vector<int> vlist(vert_idx.begin(), vert_idx.end());
  std::sort(vlist.begin(), vlist.end(),
            [&](int a, int b) { return lex_less(pts[a], pts[b]); });
  std::vector<int> remap(n, -1);
  for (std::size_t i = 0; i < vlist.size(); ++i) remap[vlist[i]] = static_cast<int>(i);
  for (int i : vlist) P.verts.push_back(pts[i]);

  for (RawFacet& f : raw) {
    for (int& c : f.cycle) c = remap[c];
    int start = static_cast<int>(std::min_element(f.cycle.begin(), f.cycle.end()) -
                                 f.cycle.begin());
    std::rotate(f.cycle.begin(), f.cycle.begin() + start, f.cycle.end());
  }
  std::sort(raw.begin(), raw.end(), [](const RawFacet& a, const RawFacet& b) {
    std::vector<int> sa = a.cycle, sb = b.cycle;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa < sb;
  });
  for (RawFacet& f : raw) {
    P.facet_cycles.push_back(f.cycle);
    P.facet_planes.push_back(f.h);
  }
  return P;
}

Pt FaceLattice::rint_point(int id) const {
  const Face& f = faces[id];
  int n = static_cast<int>(f.verts.size());
  if (n > 8) {
    // large face: centroid of a spanning affinely-independent vertex subset
    // (the open simplex it spans lies in the face's relative interior)
    std::vector<Pt> span{P.verts[f.verts[0]]};
    for (int v : f.verts) {
      std::vector<Pt> trial = span;
      trial.push_back(P.verts[v]);
      if (affine_dim(trial) == static_cast<int>(span.size())) span = trial;
      if (static_cast<int>(span.size()) == f.dim + 1) break;
    }
    Pt s;
    s.dim = P.ambient;
    int m = static_cast<int>(span.size());
    for (const Pt& p : span)
      for (int k = 0; k < P.ambient; ++k) s[k] += p[k] / m;
    return s;
  }
  Pt s;
  s.dim = P.ambient;
  for (int v : f.verts)
    for (int k = 0; k < P.ambient; ++k) s[k] += P.verts[v][k] / n;
  return s;
}

FaceLattice enumerate_faces(const Polytope& P) {
  FaceLattice L;
  L.P = P;
  int nv = static_cast<int>(P.verts.size());

  if (P.dim <= 0) {
    Face top;
    top.id = 0;
    top.dim = std::max(P.dim, 0);
    if (nv) top.verts = {0};
    L.faces = {top};
    L.top = 0;
    L.up.resize(1);
    L.down.resize(1);
    L.by_verts[top.verts] = 0;
    return L;
  }

  for (int v = 0; v < nv; ++v) {
    Face f;
    f.id = v;
    f.dim = 0;
    f.verts = {v};
    L.faces.push_back(f);
  }

  std::vector<std::vector<int>> edges;
  if (P.dim == 1) {
    // no proper faces beyond the two vertices
  } else if (P.dim == 2) {
    edges = P.facet_cycles;  // already sorted pairs
  } else {
    std::set<std::vector<int>> es;
    for (const auto& cyc : P.facet_cycles) {
      int m = static_cast<int>(cyc.size());
      for (int i = 0; i < m; ++i) {
        int a = cyc[i], b = cyc[(i + 1) % m];
        es.insert(a < b ? std::vector<int>{a, b} : std::vector<int>{b, a});
      }
    }
    edges.assign(es.begin(), es.end());
  }
  int edge_base = nv;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    Face f;
    f.id = edge_base + static_cast<int>(i);
    f.dim = 1;
    f.verts = edges[i];
    L.faces.push_back(f);
  }

  int facet_base = edge_base + static_cast<int>(edges.size());
  std::vector<std::vector<int>> facets;  // 3D only: sorted vertex tuples
  if (P.dim == 3) {
    for (const auto& cyc : P.facet_cycles) {
      std::vector<int> s = cyc;
      std::sort(s.begin(), s.end());
      facets.push_back(s);
    }
    for (std::size_t i = 0; i < facets.size(); ++i) {
      Face f;
      f.id = facet_base + static_cast<int>(i);
      f.dim = 2;
      f.verts = facets[i];
      L.faces.push_back(f);
    }
  }

  Face top;
  top.id = static_cast<int>(L.faces.size());
  top.dim = P.dim;
  for (int v = 0; v < nv; ++v) top.verts.push_back(v);
  L.faces.push_back(top);
  L.top = top.id;

  L.up.resize(L.faces.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    int eid = edge_base + static_cast<int>(i);
    for (int v : edges[i]) L.up[v].push_back(eid);
  }
  if (P.dim == 3) {
    for (std::size_t i = 0; i < P.facet_cycles.size(); ++i) {
      int fid = facet_base + static_cast<int>(i);
      const auto& cyc = P.facet_cycles[i];
      int m = static_cast<int>(cyc.size());
      for (int v : cyc) L.up[v].push_back(fid);
      for (int j = 0; j < m; ++j) {
        int a = cyc[j], b = cyc[(j + 1) % m];
        std::vector<int> key = a < b ? std::vector<int>{a, b} : std::vector<int>{b, a};
        int eid = edge_base +
                  static_cast<int>(std::lower_bound(edges.begin(), edges.end(), key) -
                                   edges.begin());
        L.up[eid].push_back(fid);
      }
    }
  }
  for (int i = 0; i < L.top; ++i) L.up[i].push_back(L.top);
  L.down.resize(L.faces.size());
  for (int f = 0; f < static_cast<int>(L.faces.size()); ++f)
    for (int u : L.up[f]) L.down[u].push_back(f);

  // covers = up-neighbors exactly one dimension higher
  for (Face& f : L.faces)
    for (int u : L.up[f.id])
      if (L.faces[u].dim == f.dim + 1) f.covers.push_back(u);

  for (const Face& f : L.faces) L.by_verts[f.verts] = f.id;
  return L;
}

int face_join(const FaceLattice& L, int f, int g) {
  if (f < 0 || g < 0 || f >= L.n_faces() || g >= L.n_faces())
    throw std::out_of_range("face_join: invalid face id");
  if (f == g) return f;
  auto contains = [&](int big, int small) {
    const auto& bv = L.faces[big].verts;
    const auto& sv = L.faces[small].verts;
    return std::includes(bv.begin(), bv.end(), sv.begin(), sv.end());
  };
  if (contains(f, g)) return f;
  if (contains(g, f)) return g;
  int best = L.top;
  for (int u : L.up[f])
    if (contains(u, g) && (L.faces[u].dim < L.faces[best].dim ||
                           (L.faces[u].dim == L.faces[best].dim && u < best)))
      best = u;
  return best;
}

int locate_face(const FaceLattice& L, const Pt& p) {
  const Polytope& P = L.P;
  if (p.dim != P.ambient) throw DimMismatch("locate_face: wrong ambient dimension");
  for (const Halfspace& e : P.affine_eqs)
    if (dot(e.n, p) != e.off) return -1;
  if (P.dim <= 0) return (P.verts.size() == 1 && p == P.verts[0]) ? L.top : -1;
  if (P.dim == 1) {
    if (p == P.verts[0]) return 0;
    if (p == P.verts[1]) return 1;
    Pt d = P.verts[1] - P.verts[0];
    Rat t = dot(p - P.verts[0], d) / dot(d, d);
    if (sign(t) <= 0 || cmp(t, Rat(1)) >= 0) return -1;
    return (P.verts[0] + t * d == p) ? L.top : -1;
  }
  std::vector<int> tight;
  for (std::size_t i = 0; i < P.facet_planes.size(); ++i) {
    int s = sign(dot(P.facet_planes[i].n, p) - P.facet_planes[i].off);
    if (s > 0) return -1;
    if (s == 0) tight.push_back(static_cast<int>(i));
  }
  if (tight.empty()) return L.top;
  std::vector<int> vs = P.facet_cycles[tight[0]];
  std::sort(vs.begin(), vs.end());
  for (std::size_t i = 1; i < tight.size(); ++i) {
    std::vector<int> other = P.facet_cycles[tight[i]];
    std::sort(other.begin(), other.end());
    std::vector<int> inter;
    std::set_intersection(vs.begin(), vs.end(), other.begin(), other.end(),
                          std::back_inserter(inter));
    vs = inter;
  }
  auto it = L.by_verts.find(vs);
  if (it == L.by_verts.end()) throw std::logic_error("locate_face: tight set not a face");
  return it->second;
}

bool rint_segment_face(const FaceLattice& L, int f, int g, const Pt& p, const Pt& q) {
  if (p == q) throw std::invalid_argument("rint_segment_face: p == q");
  if (locate_face(L, p) != f || locate_face(L, q) != g)
    throw std::invalid_argument("rint_segment_face: points not in claimed rints");
  int j = face_join(L, f, g);
  for (const Rat& t : {Rat(1, 2), Rat(1, 3), Rat(2, 3)})
    if (locate_face(L, lerp(p, q, t)) != j) return false;
  return true;
}

Frame2 face_frame(const FaceLattice& L, int fid) {
  const Face& f = L.faces[fid];
  if (f.dim != 2) throw std::invalid_argument("face_frame: face is not 2-dimensional");
  std::vector<Pt> pts;
  for (int v : f.verts) pts.push_back(L.P.verts[v]);
  if (L.P.ambient == 2)
    return make_frame(Pt(Rat(0), Rat(0)), Pt(Rat(1), Rat(0)), Pt(Rat(0), Rat(1)));
  auto [u, v] = plane_basis(pts);
  return make_frame(pts[0], u, v);
}

ProjectionWindow projection_window(const FaceLattice& L, const Pt& c, const Pt& p0) {
  const Polytope& P = L.P;
  if (P.dim != 3) throw std::invalid_argument("projection_window: polytope must be 3D");
  if (locate_face(L, c) != L.top) throw std::invalid_argument("projection_window: c not interior");
  int lp = locate_face(L, p0);
  if (lp < 0 || lp == L.top)
    throw std::invalid_argument("projection_window: p0 not on the boundary");

  ProjectionWindow w;
  w.center = c;
  w.normal = p0 - c;
  // Basis of the plane orthogonal to the normal.
  std::vector<Pt> axes = {Pt(Rat(1), Rat(0), Rat(0)), Pt(Rat(0), Rat(1), Rat(0)),
                          Pt(Rat(0), Rat(0), Rat(1))};
  Pt u;
  for (const Pt& e : axes) {
    u = cross3(w.normal, e);
    if (sign(u[0]) != 0 || sign(u[1]) != 0 || sign(u[2]) != 0) break;
  }
  w.plane = make_frame(c, u, cross3(w.normal, u));

  int facet_base = L.top - static_cast<int>(P.facet_cycles.size());
  std::vector<std::vector<Pt>> projected;
  for (std::size_t i = 0; i < P.facet_planes.size(); ++i) {
    if (sign(dot(P.facet_planes[i].n, w.normal)) <= 0) continue;
    w.facet_ids.push_back(facet_base + static_cast<int>(i));
    std::vector<Pt> poly;
    for (int v : P.facet_cycles[i]) poly.push_back(window_project(w, P.verts[v]));
    if (sign(poly_area2(poly)) < 0) std::reverse(poly.begin(), poly.end());
    projected.push_back(poly);
  }
  for (std::size_t i = 0; i < projected.size(); ++i)
    for (std::size_t j = i + 1; j < projected.size(); ++j)
      if (!poly_interiors_disjoint(projected[i], projected[j]))
        throw std::logic_error("projection_window: projected facet interiors overlap");
  return w;
}

Pt window_project(const ProjectionWindow& w, const Pt& x) {
  Pt d = x - w.center;
  return Pt(dot(d, w.plane.u), dot(d, w.plane.v));
}

}  // namespace mcv
