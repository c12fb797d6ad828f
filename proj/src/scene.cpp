#include "mcv/scene.hpp"

#include <algorithm>
#include <sstream>

#include "mcv/poly2.hpp"

namespace mcv {

namespace {

std::string face_name(const FaceLattice& L, int fid) {
  std::ostringstream os;
  os << "face#" << fid << "{";
  for (std::size_t i = 0; i < L.faces[fid].verts.size(); ++i)
    os << (i ? "," : "") << L.faces[fid].verts[i];
  os << "}";
  return os.str();
}

}  // namespace

const EdgeDecoration* Scene::edge_dec(int eid) const {
  auto it = edges.find(eid);
  return it == edges.end() ? nullptr : &it->second;
}

const FacetDecoration* Scene::facet_dec(int fid) const {
  auto it = facets.find(fid);
  return it == facets.end() ? nullptr : &it->second;
}

Pt Scene::edge_point(int eid, const Rat& t) const {
  const Face& f = L.faces[eid];
  const Pt& a = C.verts[f.verts[0]];
  const Pt& b = C.verts[f.verts[1]];
  return lerp(a, b, t);
}

Rat Scene::edge_param(int eid, const Pt& p) const {
  const Face& f = L.faces[eid];
  const Pt& a = C.verts[f.verts[0]];
  Pt d = C.verts[f.verts[1]] - a;
  return dot(p - a, d) / dot(d, d);
}

std::vector<int> Scene::edge_face_ids() const {
  std::vector<int> out;
  for (const Face& f : L.faces)
    if (f.dim == 1 && f.id != L.top) out.push_back(f.id);
  return out;
}

std::vector<int> Scene::facet_face_ids() const {
  std::vector<int> out;
  for (const Face& f : L.faces)
    if (f.dim == 2 && f.id != L.top) out.push_back(f.id);
  return out;
}

Scene build_scene(const SceneData& d) {
  Scene s;
  s.C = convex_hull(d.vertices);
  if (s.C.verts != d.vertices)
    throw std::invalid_argument("scene vertices are not in canonical convex position");
  if (s.C.dim < 2)
    throw std::invalid_argument("scene polytope must have dimension >= 2");
  s.L = enumerate_faces(s.C);

  if (s.C.dim == 3) {
    std::vector<std::vector<int>> want;
    for (auto cyc : d.facets) {
      std::sort(cyc.begin(), cyc.end());
      want.push_back(cyc);
    }
    std::sort(want.begin(), want.end());
    std::vector<std::vector<int>> have;
    for (auto cyc : s.C.facet_cycles) {
      std::sort(cyc.begin(), cyc.end());
      have.push_back(cyc);
    }
    std::sort(have.begin(), have.end());
    if (!d.facets.empty() && want != have)
      throw std::invalid_argument("scene facet list does not match the hull facets");
  }

  for (const auto& [key, dec] : d.edge_decorations) {
    std::vector<int> vs{key.first, key.second};
    std::sort(vs.begin(), vs.end());
    auto it = s.L.by_verts.find(vs);
    if (it == s.L.by_verts.end() || s.L.faces[it->second].dim != 1)
      throw std::invalid_argument("edge decoration references a non-edge");
    s.edges[it->second] = dec;
  }
  for (const auto& [key, dec] : d.facet_decorations) {
    std::vector<int> vs = key;
    std::sort(vs.begin(), vs.end());
    auto it = s.L.by_verts.find(vs);
    if (it == s.L.by_verts.end() || s.L.faces[it->second].dim != 2 ||
        it->second == s.L.top)
      throw std::invalid_argument("facet decoration references a non-facet");
    s.facets[it->second] = dec;
  }
  s.vertex_flags = d.vertex_flags;
  s.vertex_flags.resize(s.C.verts.size(), false);
  return s;
}

SceneData scene_data(const Scene& s) {
  SceneData d;
  d.dim = s.C.ambient;
  d.vertices = s.C.verts;
  if (s.C.dim == 3) d.facets = s.C.facet_cycles;
  for (const auto& [eid, dec] : s.edges) {
    const auto& vs = s.L.faces[eid].verts;
    d.edge_decorations[{vs[0], vs[1]}] = dec;
  }
  for (const auto& [fid, dec] : s.facets) d.facet_decorations[s.L.faces[fid].verts] = dec;
  d.vertex_flags = s.vertex_flags;
  return d;
}

// ---- piece geometry ----

PieceGeom make_piece_geom(const FaceLattice& L, int facet_id, const FacetPiece* piece) {
  PieceGeom g;
  g.piece = piece;
  g.L = &L;
  g.facet_id = facet_id;
  if (piece && piece->kind == FacetPiece::polygon) g.frame = face_frame(L, facet_id);
  return g;
}

bool PieceGeom::in_closure(const Pt& x) const {
  if (!piece) {
    int f = locate_face(*L, x);
    if (f < 0) return false;
    const auto& fv = L->faces[facet_id].verts;
    const auto& xv = L->faces[f].verts;
    return std::includes(fv.begin(), fv.end(), xv.begin(), xv.end());
  }
  switch (piece->kind) {
    case FacetPiece::point:
      return x == piece->p;
    case FacetPiece::segment:
      return closed_segments_intersect(piece->a, piece->b, x, x).kind != SegIsect::empty;
    case FacetPiece::polygon: {
      if (!frame.on_plane(x)) return false;
      std::vector<Pt> flat;
      for (const Pt& v : piece->poly) flat.push_back(frame.to_plane(v));
      if (sign(poly_area2(flat)) < 0) std::reverse(flat.begin(), flat.end());
      return point_vs_convex_polygon(flat, frame.to_plane(x)) >= 0;
    }
  }
  return false;
}

bool PieceGeom::in_relopen(const Pt& x) const {
  if (!piece) return locate_face(*L, x) == facet_id;
  switch (piece->kind) {
    case FacetPiece::point:
      return x == piece->p;
    case FacetPiece::segment:
      return in_closure(x) && x != piece->a && x != piece->b;
    case FacetPiece::polygon: {
      if (!frame.on_plane(x)) return false;
      std::vector<Pt> flat;
      for (const Pt& v : piece->poly) flat.push_back(frame.to_plane(v));
      if (sign(poly_area2(flat)) < 0) std::reverse(flat.begin(), flat.end());
      return point_vs_convex_polygon(flat, frame.to_plane(x)) == 1;
    }
  }
  return false;
}

bool chords_in_piece(const Seg1& A, const Seg1& B, const PieceGeom& P) {
  bool a_pt = A.a == A.b, b_pt = B.a == B.b;
  if (!P.in_closure(A.a) || (!a_pt && !P.in_closure(A.b))) return false;
  if (!P.in_closure(B.a) || (!b_pt && !P.in_closure(B.b))) return false;
  Pt m = midpoint(midpoint(A.a, A.b), midpoint(B.a, B.b));
  if (!P.in_relopen(m)) return false;
  if (!a_pt) {
    if (A.a_in && !chords_in_piece(Seg1{A.a, A.a}, B, P)) return false;
    if (A.b_in && !chords_in_piece(Seg1{A.b, A.b}, B, P)) return false;
  }
  if (!b_pt) {
    if (B.a_in && !chords_in_piece(A, Seg1{B.a, B.a}, P)) return false;
    if (B.b_in && !chords_in_piece(A, Seg1{B.b, B.b}, P)) return false;
  }
  return true;
}

bool chords_into_own_piece(const Seg1& A, const PieceGeom& P) {
  return P.in_closure(A.a) && (A.a == A.b || P.in_closure(A.b));
}

// ---- validation ----

std::vector<std::string> validate_scene(const Scene& s) {
  std::vector<std::string> v;
  if (s.C.dim < 2 || s.C.dim > 3) v.push_back("scene dimension must be 2 or 3");
  if (s.vertex_flags.size() != s.C.verts.size())
    v.push_back("vertex_flags length mismatch");

  for (const auto& [eid, dec] : s.edges) {
    for (std::size_t i = 0; i < dec.pieces.size(); ++i) {
      const Iv& p = dec.pieces[i];
      if (!iv_valid(p)) v.push_back(face_name(s.L, eid) + ": invalid interval piece");
      if (sign(p.lo) < 0 || cmp(p.hi, Rat(1)) > 0 || (sign(p.lo) == 0 && p.lo_in) ||
          (cmp(p.hi, Rat(1)) == 0 && p.hi_in))
        v.push_back(face_name(s.L, eid) + ": piece touches the edge's relative boundary");
      if (i > 0) {
        const Iv& q = dec.pieces[i - 1];
        if (cmp(q.lo, p.lo) > 0) v.push_back(face_name(s.L, eid) + ": pieces not sorted");
        if (!iv_disjoint(q, p)) v.push_back(face_name(s.L, eid) + ": pieces overlap");
      }
    }
  }

  for (const auto& [fid, dec] : s.facets) {
    if (s.C.dim != 3) {
      v.push_back("facet decoration on a non-3D scene");
      continue;
    }
    if (dec.mode != FacetDecoration::Mode::pieces && !dec.pieces.empty())
      v.push_back(face_name(s.L, fid) + ": pieces present but mode is not 'pieces'");
    if (dec.mode != FacetDecoration::Mode::pieces) continue;
    Frame2 fr = face_frame(s.L, fid);
    for (std::size_t i = 0; i < dec.pieces.size(); ++i) {
      const FacetPiece& p = dec.pieces[i];
      switch (p.kind) {
        case FacetPiece::point:
          if (locate_face(s.L, p.p) != fid)
            v.push_back(face_name(s.L, fid) + ": point piece not in facet rint");
          break;
        case FacetPiece::segment: {
          if (p.a == p.b) {
            v.push_back(face_name(s.L, fid) + ": degenerate segment piece");
            break;
          }
          int la = locate_face(s.L, p.a), lb = locate_face(s.L, p.b);
          auto in_facet_cl = [&](int f) {
            if (f < 0) return false;
            const auto& fv = s.L.faces[fid].verts;
            const auto& xv = s.L.faces[f].verts;
            return std::includes(fv.begin(), fv.end(), xv.begin(), xv.end()) ||
                   f == fid;
          };
          if (!in_facet_cl(la) || !in_facet_cl(lb) ||
              locate_face(s.L, midpoint(p.a, p.b)) != fid)
            v.push_back(face_name(s.L, fid) + ": segment piece not inside facet rint");
          break;
        }
        case FacetPiece::polygon: {
          std::vector<Pt> flat;
          bool ok = true;
          for (const Pt& q : p.poly) {
            if (!fr.on_plane(q)) { ok = false; break; }
            flat.push_back(fr.to_plane(q));
          }
          if (!ok || flat.size() < 3 || affine_dim(flat) != 2) {
            v.push_back(face_name(s.L, fid) + ": polygon piece degenerate or off-plane");
            break;
          }
          Pt cen;
          cen.dim = 3;
          for (const Pt& q : p.poly)
            for (int k = 0; k < 3; ++k) cen[k] += q[k] / static_cast<long>(p.poly.size());
          int la = fid;
          bool cl_ok = true;
          for (const Pt& q : p.poly) {
            int f = locate_face(s.L, q);
            const auto& fv = s.L.faces[fid].verts;
            if (f < 0) { cl_ok = false; break; }
            const auto& xv = s.L.faces[f].verts;
            if (f != fid && !std::includes(fv.begin(), fv.end(), xv.begin(), xv.end()))
              cl_ok = false;
          }
          if (!cl_ok || locate_face(s.L, cen) != la)
            v.push_back(face_name(s.L, fid) + ": polygon piece not inside facet rint");
          break;
        }
      }
    }
    // pairwise disjoint closures (required by the solvable scene class)
    auto closure_pts = [&](const FacetPiece& p) {
      std::vector<Pt> out;
      if (p.kind == FacetPiece::point) out = {fr.to_plane(p.p)};
      else if (p.kind == FacetPiece::segment) out = {fr.to_plane(p.a), fr.to_plane(p.b)};
      else
        for (const Pt& q : p.poly) out.push_back(fr.to_plane(q));
      if (out.size() >= 3 && sign(poly_area2(out)) < 0)
        std::reverse(out.begin(), out.end());
      return out;
    };
    auto closures_meet = [&](std::vector<Pt> a, std::vector<Pt> b) {
      if (a.size() < b.size()) std::swap(a, b);
      if (a.size() >= 3) return !poly_intersect(a, b).empty();
      return closed_segments_intersect(a.front(), a.back(), b.front(), b.back())
                 .kind != SegIsect::empty;
    };
    for (std::size_t i = 0; i < dec.pieces.size(); ++i)
      for (std::size_t j = i + 1; j < dec.pieces.size(); ++j)
        if (closures_meet(closure_pts(dec.pieces[i]), closure_pts(dec.pieces[j])))
          v.push_back(face_name(s.L, fid) + ": piece closures intersect");
  }
  return v;
}

// ---- membership ----

bool membership(const Scene& s, const Pt& p) {
  int f = locate_face(s.L, p);
  if (f < 0) return false;
  if (f == s.L.top) return true;
  const Face& face = s.L.faces[f];
  if (face.dim == 0) return s.vertex_flags[face.verts[0]];
  if (face.dim == 1) {
    const EdgeDecoration* dec = s.edge_dec(f);
    if (!dec) return false;
    return iv_set_contains(dec->pieces, s.edge_param(f, p));
  }
  const FacetDecoration* dec = s.facet_dec(f);
  if (!dec || dec->mode == FacetDecoration::Mode::empty) return false;
  if (dec->mode == FacetDecoration::Mode::full) return true;
  for (const FacetPiece& piece : dec->pieces) {
    PieceGeom g = make_piece_geom(s.L, f, &piece);
    if (g.in_relopen(p)) return true;
  }
  return false;
}

bool witness_member(const Scene& s, const ConvexWitness& w, const Pt& p) {
  int f = locate_face(s.L, p);
  if (f < 0) return false;
  if (f == s.L.top) return w.kernel_included;
  const Face& face = s.L.faces[f];
  if (face.dim == 0)
    return std::binary_search(w.verts.begin(), w.verts.end(), face.verts[0]);
  if (face.dim == 1) {
    auto it = w.edge_sel.find(f);
    return it != w.edge_sel.end() && it->second.contains(s.edge_param(f, p));
  }
  auto it = w.facet_sel.find(f);
  if (it == w.facet_sel.end() || it->second.kind == FacetSel::Kind::none) return false;
  if (it->second.kind == FacetSel::Kind::full) return true;
  const FacetDecoration* dec = s.facet_dec(f);
  if (!dec || it->second.piece < 0 ||
      it->second.piece >= static_cast<int>(dec->pieces.size()))
    return false;
  PieceGeom g = make_piece_geom(s.L, f, &dec->pieces[it->second.piece]);
  return g.in_relopen(p);
}

// ---- witness check ----

namespace {

using WItem = WitnessItemRef;

Seg1 item_seg(const Scene& s, const ConvexWitness& w, const WItem& it) {
  if (it.kind == WItem::vert) {
    Pt p = s.C.verts[s.L.faces[it.fid].verts[0]];
    return Seg1{p, p, true, true};
  }
  const Iv& iv = w.edge_sel.at(it.fid);
  return Seg1{s.edge_point(it.fid, iv.lo), s.edge_point(it.fid, iv.hi), iv.lo_in,
              iv.hi_in};
}

WItem face_item(const Scene& s, int g) {
  const Face& f = s.L.faces[g];
  if (f.dim == 0) return WItem{WItem::vert, g};
  if (f.dim == 1) return WItem{WItem::edge, g};
  return WItem{WItem::facet, g};
}

bool has_item(const Scene& s, const ConvexWitness& w, int g) {
  const Face& f = s.L.faces[g];
  if (g == s.L.top) return false;
  if (f.dim == 0) return std::binary_search(w.verts.begin(), w.verts.end(), g);
  if (f.dim == 1) return w.edge_sel.count(g) != 0;
  if (f.dim == 2) {
    auto it = w.facet_sel.find(g);
    return it != w.facet_sel.end() && it->second.kind != FacetSel::Kind::none;
  }
  return false;
}

std::size_t item_count(const ConvexWitness& w) {
  std::size_t n = w.verts.size() + w.edge_sel.size();
  for (const auto& [fid, sel] : w.facet_sel)
    if (sel.kind != FacetSel::Kind::none) ++n;
  return n;
}

}  // namespace

std::vector<WitnessItemRef> witness_items_of(const ConvexWitness& w) {
  std::vector<WItem> items;
  for (int vid : w.verts) items.push_back(WItem{WItem::vert, vid});
  for (const auto& [eid, sel] : w.edge_sel) items.push_back(WItem{WItem::edge, eid});
  for (const auto& [fid, sel] : w.facet_sel)
    if (sel.kind != FacetSel::Kind::none) items.push_back(WItem{WItem::facet, fid});
  return items;
}

std::vector<WitnessItemRef> witness_items_near(const Scene& s, const ConvexWitness& w,
                                               int fid) {
  std::vector<int> faces;
  auto visit = [&](int F) {
    if (F == s.L.top) return;
    faces.push_back(F);
    for (int g : s.L.down[F]) faces.push_back(g);
  };
  visit(fid);
  for (int F : s.L.up[fid]) visit(F);
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  std::vector<WItem> out;
  for (int g : faces)
    if (has_item(s, w, g)) out.push_back(face_item(s, g));
  return out;
}

bool witness_pair_ok(const Scene& s, const ConvexWitness& w, const WitnessItemRef& a,
                     const WitnessItemRef& b, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  int J = face_join(s.L, a.fid, b.fid);
  if (J == s.L.top) {
    if (!w.kernel_included)
      return fail("chord through the interior but kernel not included");
    return true;
  }
  const Face& jf = s.L.faces[J];
  if (jf.dim == 1) {
    // vertex-vertex or vertex-edge along one edge
    auto it = w.edge_sel.find(J);
    if (a.kind == WItem::vert && b.kind == WItem::vert) {
      if (it == w.edge_sel.end() || !(it->second == Iv{Rat(0), Rat(1), false, false}))
        return fail("vertex pair needs the full open edge between them");
      return true;
    }
    const WItem& v = a.kind == WItem::vert ? a : b;
    const WItem& e = a.kind == WItem::vert ? b : a;
    const Iv& sel = w.edge_sel.at(e.fid);
    int vid = s.L.faces[v.fid].verts[0];
    bool at_zero = s.L.faces[e.fid].verts[0] == vid;
    if (at_zero ? sign(sel.lo) != 0 : cmp(sel.hi, Rat(1)) != 0)
      return fail(face_name(s.L, e.fid) +
                  ": selection does not reach the selected vertex");
    return true;
  }
  // join is a facet (3D)
  auto cit = w.facet_sel.find(J);
  FacetSel cs = cit == w.facet_sel.end() ? FacetSel{} : cit->second;
  if (a.kind == WItem::facet || b.kind == WItem::facet) {
    // chords from a boundary item into the facet's own selection
    const WItem& sub = a.kind == WItem::facet ? b : a;
    if (cs.kind == FacetSel::Kind::full) return true;
    if (cs.kind == FacetSel::Kind::none)
      return fail("item on a facet with empty selection");
    const FacetDecoration* dec = s.facet_dec(J);
    PieceGeom g = make_piece_geom(s.L, J, &dec->pieces[cs.piece]);
    if (!chords_into_own_piece(item_seg(s, w, sub), g))
      return fail(face_name(s.L, J) + ": boundary item leaves the facet selection");
    return true;
  }
  if (cs.kind == FacetSel::Kind::full) return true;
  if (cs.kind == FacetSel::Kind::none)
    return fail(face_name(s.L, J) + ": cross chord over an empty facet selection");
  const FacetDecoration* dec = s.facet_dec(J);
  PieceGeom g = make_piece_geom(s.L, J, &dec->pieces[cs.piece]);
  if (!chords_in_piece(item_seg(s, w, a), item_seg(s, w, b), g))
    return fail(face_name(s.L, J) + ": cross chord leaves the facet selection");
  return true;
}

WitnessCheck witness_check(const Scene& s, const ConvexWitness& w) {
  WitnessCheck out;
  out.contained = true;
  auto fail_contained = [&](const std::string& why) {
    if (out.contained) out.detail = why;
    out.contained = false;
  };

  for (const auto& [eid, sel] : w.edge_sel) {
    if (eid < 0 || eid >= s.L.n_faces() || s.L.faces[eid].dim != 1 || eid == s.L.top) {
      fail_contained("edge selection on a non-edge face");
      continue;
    }
    if (!iv_valid(sel)) fail_contained("invalid edge selection interval");
    const EdgeDecoration* dec = s.edge_dec(eid);
    if (!dec || !iv_set_covers(dec->pieces, sel))
      fail_contained(face_name(s.L, eid) + ": selection not inside decoration");
  }
  for (const auto& [fid, sel] : w.facet_sel) {
    if (sel.kind == FacetSel::Kind::none) continue;
    if (fid < 0 || fid >= s.L.n_faces() || s.L.faces[fid].dim != 2 || fid == s.L.top) {
      fail_contained("facet selection on a non-facet face");
      continue;
    }
    const FacetDecoration* dec = s.facet_dec(fid);
    if (sel.kind == FacetSel::Kind::full) {
      if (!dec || dec->mode != FacetDecoration::Mode::full)
        fail_contained(face_name(s.L, fid) + ": full selection without full decoration");
    } else {
      if (!dec || dec->mode != FacetDecoration::Mode::pieces || sel.piece < 0 ||
          sel.piece >= static_cast<int>(dec->pieces.size()))
        fail_contained(face_name(s.L, fid) + ": piece selection out of range");
    }
  }
  for (int vid : w.verts) {
    if (vid < 0 || vid >= static_cast<int>(s.C.verts.size()) || !s.vertex_flags[vid])
      fail_contained("selected vertex is not flagged");
  }
  if (!out.contained) return out;

  // Convexity: pairwise chord conditions through face joins. Pairs whose join
  // is a proper face F are exactly the pairs meeting inside some bucket of
  // items lying under F, so we only enumerate within those buckets; every pair
  // not seen there joins at the top, where the condition is just
  // kernel_included. This keeps the check local in the face lattice.
  std::vector<WItem> items = witness_items_of(w);
  out.convex = true;
  auto fail_convex = [&](const std::string& why) {
    if (out.convex) out.detail = why;
    out.convex = false;
  };

  std::map<int, std::vector<WItem>> buckets;
  for (const WItem& it : items) {
    buckets[it.fid].push_back(it);
    for (int F : s.L.up[it.fid])
      if (F != s.L.top) buckets[F].push_back(it);
  }
  std::size_t proper_pairs = 0;
  std::string why;
  for (const auto& [F, bucket] : buckets) {
    if (!out.convex) break;
    for (std::size_t i = 0; i < bucket.size() && out.convex; ++i)
      for (std::size_t j = i + 1; j < bucket.size() && out.convex; ++j) {
        if (face_join(s.L, bucket[i].fid, bucket[j].fid) != F) continue;
        ++proper_pairs;
        if (!witness_pair_ok(s, w, bucket[i], bucket[j], &why)) fail_convex(why);
      }
  }
  if (out.convex && !w.kernel_included &&
      items.size() * (items.size() - 1) / 2 > proper_pairs)
    fail_convex("chord through the interior but kernel not included");
  return out;
}

std::vector<ComplementItem> compute_complement(const Scene& s, const ConvexWitness& w) {
  std::vector<ComplementItem> out;
  for (const auto& [eid, dec] : s.edges) {
    std::vector<Iv> rem = dec.pieces;
    auto it = w.edge_sel.find(eid);
    if (it != w.edge_sel.end()) rem = iv_set_subtract(rem, it->second);
    for (const Iv& g : rem) {
      ComplementItem c;
      c.kind = ComplementItem::edge_gap;
      c.face_id = eid;
      c.gap = g;
      out.push_back(c);
    }
  }
  for (const auto& [fid, dec] : s.facets) {
    auto it = w.facet_sel.find(fid);
    FacetSel sel = it == w.facet_sel.end() ? FacetSel{} : it->second;
    if (dec.mode == FacetDecoration::Mode::empty) continue;
    if (dec.mode == FacetDecoration::Mode::full) {
      if (sel.kind != FacetSel::Kind::full) {
        ComplementItem c;
        c.kind = ComplementItem::facet_all;
        c.face_id = fid;
        out.push_back(c);
      }
      continue;
    }
    for (int i = 0; i < static_cast<int>(dec.pieces.size()); ++i)
      if (!(sel.kind == FacetSel::Kind::piece && sel.piece == i)) {
        ComplementItem c;
        c.kind = ComplementItem::facet_piece;
        c.face_id = fid;
        c.piece = i;
        out.push_back(c);
      }
  }
  for (int v = 0; v < static_cast<int>(s.vertex_flags.size()); ++v)
    if (s.vertex_flags[v] && !std::binary_search(w.verts.begin(), w.verts.end(), v)) {
      ComplementItem c;
      c.kind = ComplementItem::vertex;
      c.face_id = v;
      out.push_back(c);
    }
  return out;
}

// ---- addability ----

namespace {

// Does the single selection interval (if any) cover the open interval (a, b)?
bool open_gap_selected(const ConvexWitness& w, int eid, Rat a, Rat b) {
  if (cmp(a, b) > 0) std::swap(a, b);
  if (a == b) return true;  // empty chord gap
  auto it = w.edge_sel.find(eid);
  if (it == w.edge_sel.end()) return false;
  return iv_set_covers({it->second}, Iv{std::move(a), std::move(b), false, false});
}

// Chord conditions from a single new point on face `fid` against item I, both
// lying in the closure of the join face.
bool point_vs_item_ok(const Scene& s, const ConvexWitness& w, int fid, const Pt& p,
                      const WItem& I) {
  int J = face_join(s.L, fid, I.fid);
  if (J == s.L.top) return true;  // chords run through the kernel
  const Face& jf = s.L.faces[J];
  if (jf.dim == 1) {
    if (I.kind == WItem::vert) {
      // chord from p to the vertex along the edge J
      Rat t = fid == J ? s.edge_param(J, p)
                       : Rat(s.L.faces[J].verts[0] == fid ? 0 : 1);
      Rat tv(s.L.faces[J].verts[0] == I.fid ? 0 : 1);
      return open_gap_selected(w, J, t, tv);
    }
    // I is the selection on edge J itself; p is on that edge or an endpoint
    const Iv& sel = w.edge_sel.at(I.fid);
    Rat t = fid == J ? s.edge_param(J, p)
                     : Rat(s.L.faces[J].verts[0] == fid ? 0 : 1);
    if (sel.contains(t)) return true;  // p already inside (degenerate call)
    if (cmp(t, sel.lo) <= 0) return t == sel.lo && !sel.lo_in;
    return t == sel.hi && !sel.hi_in;
  }
  // join is a facet
  auto cit = w.facet_sel.find(J);
  FacetSel cs = cit == w.facet_sel.end() ? FacetSel{} : cit->second;
  if (cs.kind == FacetSel::Kind::full) return true;
  if (I.kind == WItem::facet && I.fid == J) {
    if (cs.kind == FacetSel::Kind::none) return true;  // nothing selected there
    const FacetDecoration* dec = s.facet_dec(J);
    PieceGeom g = make_piece_geom(s.L, J, &dec->pieces[cs.piece]);
    return g.in_closure(p);  // chords from p land in the piece iff p ∈ cl(piece)
  }
  if (cs.kind == FacetSel::Kind::none) return false;
  const FacetDecoration* dec = s.facet_dec(J);
  PieceGeom g = make_piece_geom(s.L, J, &dec->pieces[cs.piece]);
  return chords_in_piece(Seg1{p, p}, item_seg(s, w, I), g);
}

bool point_addable(const Scene& s, const ConvexWitness& w, int fid, const Pt& p) {
  std::vector<WItem> near = witness_items_near(s, w, fid);
  if (!w.kernel_included && item_count(w) > near.size())
    return false;  // some chord from p would have to cross the excluded kernel
  for (const WItem& I : near)
    if (!point_vs_item_ok(s, w, fid, p, I)) return false;
  return true;
}

}  // namespace

bool vertex_addable(const Scene& s, const ConvexWitness& w, int vid) {
  return point_addable(s, w, vid, s.C.verts[vid]);
}

bool edge_point_addable(const Scene& s, const ConvexWitness& w, int eid, const Rat& t) {
  return point_addable(s, w, eid, s.edge_point(eid, t));
}

bool facet_point_addable(const Scene& s, const ConvexWitness& w, int fid, const Pt& p) {
  return point_addable(s, w, fid, p);
}

// ---- dimension-1 solver ----

LinePiece solve_dim1(const LineSubset& X, const Pt& seed) {
  Rat dd = dot(X.dir, X.dir);
  if (sign(dd) == 0) throw std::invalid_argument("solve_dim1: zero direction");
  Rat t = dot(seed - X.base, X.dir) / dd;
  if (!(X.base + t * X.dir == seed))
    throw std::invalid_argument("solve_dim1: seed not on the carrier line");
  auto contains = [&](const LinePiece& p) {
    if (!p.lo_inf) {
      int c = cmp(t, p.iv.lo);
      if (c < 0 || (c == 0 && !p.iv.lo_in)) return false;
    }
    if (!p.hi_inf) {
      int c = cmp(t, p.iv.hi);
      if (c > 0 || (c == 0 && !p.iv.hi_in)) return false;
    }
    return true;
  };
  int at = -1;
  for (std::size_t i = 0; i < X.pieces.size(); ++i)
    if (contains(X.pieces[i])) { at = static_cast<int>(i); break; }
  if (at < 0) throw std::invalid_argument("solve_dim1: seed not in X");

  auto touches = [&](const LinePiece& a, const LinePiece& b) {
    // a entirely before b in the sorted order
    if (a.hi_inf || b.lo_inf) return true;  // overlapping coverage (not expected)
    return iv_mergeable(a.iv, b.iv);
  };
  int lo = at, hi = at;
  while (lo > 0 && touches(X.pieces[lo - 1], X.pieces[lo])) --lo;
  while (hi + 1 < static_cast<int>(X.pieces.size()) && touches(X.pieces[hi], X.pieces[hi + 1]))
    ++hi;
  LinePiece r;
  r.lo_inf = X.pieces[lo].lo_inf;
  r.hi_inf = X.pieces[hi].hi_inf;
  r.iv.lo = X.pieces[lo].iv.lo;
  r.iv.lo_in = X.pieces[lo].iv.lo_in;
  r.iv.hi = X.pieces[hi].iv.hi;
  r.iv.hi_in = X.pieces[hi].iv.hi_in;
  return r;
}

// ---- embedding transfer ----

EmbeddedScene embed_scene(const Scene& s, const AffinePlacement& pl) {
  if (s.C.ambient != 2) throw std::invalid_argument("embed_scene: scene must be 2D");
  Pt c = cross3(pl.col0, pl.col1);
  if (sign(c[0]) == 0 && sign(c[1]) == 0 && sign(c[2]) == 0)
    throw std::invalid_argument("embed_scene: placement rank < 2");
  auto map = [&](const Pt& p) { return pl.offset + p[0] * pl.col0 + p[1] * pl.col1; };

  SceneData d;
  d.dim = 3;
  std::vector<Pt> mapped;
  for (const Pt& v : s.C.verts) mapped.push_back(map(v));
  Polytope hull = convex_hull(mapped);
  d.vertices = hull.verts;

  std::vector<int> vmap(s.C.verts.size(), -1);
  for (std::size_t i = 0; i < mapped.size(); ++i)
    for (std::size_t j = 0; j < hull.verts.size(); ++j)
      if (mapped[i] == hull.verts[j]) vmap[i] = static_cast<int>(j);
  for (int m : vmap)
    if (m < 0) throw std::logic_error("embed_scene: vertex lost in embedding");

  for (const auto& [eid, dec] : s.edges) {
    const auto& vs = s.L.faces[eid].verts;
    int a = vmap[vs[0]], b = vmap[vs[1]];
    bool flip = a > b;
    if (flip) std::swap(a, b);
    EdgeDecoration nd;
    if (!flip) {
      nd = dec;
    } else {
      for (const Iv& p : dec.pieces)
        nd.pieces.push_back(Iv{Rat(1) - p.hi, Rat(1) - p.lo, p.hi_in, p.lo_in});
      std::reverse(nd.pieces.begin(), nd.pieces.end());
    }
    d.edge_decorations[{a, b}] = nd;
  }
  d.vertex_flags.resize(hull.verts.size(), false);
  for (std::size_t i = 0; i < s.vertex_flags.size(); ++i)
    d.vertex_flags[vmap[i]] = s.vertex_flags[i];

  EmbeddedScene out;
  out.scene = build_scene(d);
  out.vertex_map = vmap;
  return out;
}

ConvexWitness pullback_witness(const Scene& orig, const EmbeddedScene& emb,
                               const ConvexWitness& w) {
  std::vector<int> inv(emb.vertex_map.size(), -1);
  for (std::size_t i = 0; i < emb.vertex_map.size(); ++i) inv[emb.vertex_map[i]] = static_cast<int>(i);

  ConvexWitness out;
  out.kernel_included = w.kernel_included;
  for (const auto& [eid, sel] : w.edge_sel) {
    const auto& vs = emb.scene.L.faces[eid].verts;
    int a = inv[vs[0]], b = inv[vs[1]];
    bool flip = a > b;
    if (flip) std::swap(a, b);
    int oe = orig.L.by_verts.at({a, b});
    out.edge_sel[oe] =
        flip ? Iv{Rat(1) - sel.hi, Rat(1) - sel.lo, sel.hi_in, sel.lo_in} : sel;
  }
  for (int v : w.verts) out.verts.push_back(inv[v]);
  std::sort(out.verts.begin(), out.verts.end());
  out.complement = compute_complement(orig, out);
  return out;
}

}  // namespace mcv
