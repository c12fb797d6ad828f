#include "mcv/scene_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mcv {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json pt_json(const Pt& p) {
  ordered_json a = ordered_json::array();
  for (int k = 0; k < p.dim; ++k) a.push_back(rat_str(p[k]));
  return a;
}

Pt pt_parse(const json& a, int dim) {
  if (!a.is_array() || static_cast<int>(a.size()) != dim)
    throw std::invalid_argument("point: expected array of " + std::to_string(dim));
  Pt p;
  p.dim = dim;
  for (int k = 0; k < dim; ++k) p[k] = parse_rat(a[k].get<std::string>());
  return p;
}

std::string vert_key(const std::vector<int>& vs) {
  std::string k;
  for (std::size_t i = 0; i < vs.size(); ++i)
    k += (i ? "-" : "") + std::to_string(vs[i]);
  return k;
}

std::vector<int> parse_key(const std::string& k) {
  std::vector<int> out;
  std::istringstream is(k);
  std::string tok;
  while (std::getline(is, tok, '-')) {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument("bad face key: " + k);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("bad face key: " + k);
  return out;
}

ordered_json iv_json(const Iv& p) {
  ordered_json o;
  if (p.is_point()) {
    o["point"] = rat_str(p.lo);
  } else {
    o["lo"] = rat_str(p.lo);
    o["hi"] = rat_str(p.hi);
    o["lo_closed"] = p.lo_in;
    o["hi_closed"] = p.hi_in;
  }
  return o;
}

Iv iv_parse(const json& o) {
  Iv p;
  if (o.contains("point")) {
    p.lo = p.hi = parse_rat(o["point"].get<std::string>());
    p.lo_in = p.hi_in = true;
    return p;
  }
  p.lo = parse_rat(o.at("lo").get<std::string>());
  p.hi = parse_rat(o.at("hi").get<std::string>());
  p.lo_in = o.at("lo_closed").get<bool>();
  p.hi_in = o.at("hi_closed").get<bool>();
  if (!iv_valid(p)) throw std::invalid_argument("empty interval piece");
  return p;
}

ordered_json facet_piece_json(const FacetPiece& p) {
  ordered_json o;
  switch (p.kind) {
    case FacetPiece::point:
      o["type"] = "point";
      o["p"] = pt_json(p.p);
      break;
    case FacetPiece::segment:
      o["type"] = "segment";
      o["a"] = pt_json(p.a);
      o["b"] = pt_json(p.b);
      break;
    case FacetPiece::polygon: {
      o["type"] = "polygon";
      ordered_json vs = ordered_json::array();
      for (const Pt& q : p.poly) vs.push_back(pt_json(q));
      o["verts"] = vs;
      break;
    }
  }
  return o;
}

FacetPiece facet_piece_parse(const json& o) {
  FacetPiece p;
  std::string t = o.at("type").get<std::string>();
  if (t == "point") {
    p.kind = FacetPiece::point;
    p.p = pt_parse(o.at("p"), 3);
  } else if (t == "segment") {
    p.kind = FacetPiece::segment;
    p.a = pt_parse(o.at("a"), 3);
    p.b = pt_parse(o.at("b"), 3);
  } else if (t == "polygon") {
    p.kind = FacetPiece::polygon;
    for (const auto& q : o.at("verts")) p.poly.push_back(pt_parse(q, 3));
  } else {
    throw std::invalid_argument("unknown facet piece type: " + t);
  }
  return p;
}

}  // namespace

std::string scene_to_json(const Scene& s) {
  SceneData d = scene_data(s);
  ordered_json o;
  o["dim"] = d.dim;
  ordered_json vs = ordered_json::array();
  for (const Pt& v : d.vertices) vs.push_back(pt_json(v));
  o["vertices"] = vs;
  if (d.dim == 3 && s.C.dim == 3) {
    ordered_json fs = ordered_json::array();
    for (const auto& cyc : d.facets) fs.push_back(cyc);
    o["facets"] = fs;
  }
  ordered_json ed = ordered_json::object();
  for (const auto& [key, dec] : d.edge_decorations) {
    ordered_json ps = ordered_json::array();
    for (const Iv& p : dec.pieces) ps.push_back(iv_json(p));
    ed[vert_key({key.first, key.second})] = ps;
  }
  o["edge_decorations"] = ed;
  if (s.C.dim == 3) {
    ordered_json fd = ordered_json::object();
    for (const auto& [key, dec] : d.facet_decorations) {
      ordered_json e;
      e["mode"] = dec.mode == FacetDecoration::Mode::full    ? "full"
                  : dec.mode == FacetDecoration::Mode::empty ? "empty"
                                                       : "pieces";
      if (dec.mode == FacetDecoration::Mode::pieces) {
        ordered_json ps = ordered_json::array();
        for (const FacetPiece& p : dec.pieces) ps.push_back(facet_piece_json(p));
        e["pieces"] = ps;
      }
      fd[vert_key(key)] = e;
    }
    o["facet_decorations"] = fd;
  }
  ordered_json flags = ordered_json::array();
  for (bool b : d.vertex_flags) flags.push_back(b);
  o["vertex_flags"] = flags;
  return o.dump(2) + "\n";
}

Scene scene_from_json(const std::string& text) {
  json o;
  try {
    o = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scene JSON parse error: ") + e.what());
  }
  try {
    SceneData d;
    d.dim = o.at("dim").get<int>();
    if (d.dim != 2 && d.dim != 3) throw std::invalid_argument("dim must be 2 or 3");
    for (const auto& v : o.at("vertices")) d.vertices.push_back(pt_parse(v, d.dim));
    if (o.contains("facets"))
      for (const auto& f : o["facets"]) d.facets.push_back(f.get<std::vector<int>>());
    if (o.contains("edge_decorations"))
      for (const auto& [key, ps] : o["edge_decorations"].items()) {
        std::vector<int> vs = parse_key(key);
        if (vs.size() != 2) throw std::invalid_argument("edge key needs two ids: " + key);
        EdgeDecoration dec;
        for (const auto& p : ps) dec.pieces.push_back(iv_parse(p));
        d.edge_decorations[{vs[0], vs[1]}] = dec;
      }
    if (o.contains("facet_decorations"))
      for (const auto& [key, e] : o["facet_decorations"].items()) {
        FacetDecoration dec;
        std::string mode = e.at("mode").get<std::string>();
        if (mode == "full") dec.mode = FacetDecoration::Mode::full;
        else if (mode == "empty") dec.mode = FacetDecoration::Mode::empty;
        else if (mode == "pieces") dec.mode = FacetDecoration::Mode::pieces;
        else throw std::invalid_argument("unknown facet mode: " + mode);
        if (e.contains("pieces"))
          for (const auto& p : e["pieces"]) dec.pieces.push_back(facet_piece_parse(p));
        d.facet_decorations[parse_key(key)] = dec;
      }
    if (o.contains("vertex_flags"))
      for (const auto& b : o["vertex_flags"]) d.vertex_flags.push_back(b.get<bool>());
    return build_scene(d);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scene JSON shape error: ") + e.what());
  }
}

std::string witness_to_json(const Scene& s, const ConvexWitness& w) {
  ordered_json o;
  o["kernel_included"] = w.kernel_included;
  ordered_json es = ordered_json::object();
  for (const auto& [eid, sel] : w.edge_sel)
    es[vert_key(s.L.faces[eid].verts)] = iv_json(sel);
  o["edge_selections"] = es;
  if (s.C.dim == 3) {
    ordered_json fs = ordered_json::object();
    for (const auto& [fid, sel] : w.facet_sel) {
      if (sel.kind == FacetSel::Kind::none) continue;
      ordered_json e;
      if (sel.kind == FacetSel::Kind::full) e["full"] = true;
      else e["piece"] = sel.piece;
      fs[vert_key(s.L.faces[fid].verts)] = e;
    }
    o["facet_selections"] = fs;
  }
  o["vertices"] = w.verts;
  ordered_json cs = ordered_json::array();
  for (const ComplementItem& c : w.complement) {
    ordered_json e;
    switch (c.kind) {
      case ComplementItem::edge_gap:
        e["kind"] = "edge_gap";
        e["edge"] = vert_key(s.L.faces[c.face_id].verts);
        e["gap"] = iv_json(c.gap);
        break;
      case ComplementItem::facet_piece:
        e["kind"] = "facet_piece";
        e["facet"] = vert_key(s.L.faces[c.face_id].verts);
        e["piece"] = c.piece;
        break;
      case ComplementItem::facet_all:
        e["kind"] = "facet_all";
        e["facet"] = vert_key(s.L.faces[c.face_id].verts);
        break;
      case ComplementItem::vertex:
        e["kind"] = "vertex";
        e["vertex"] = c.face_id;
        break;
    }
    cs.push_back(e);
  }
  o["complement_structure"] = cs;
  return o.dump(2) + "\n";
}

ConvexWitness witness_from_json(const Scene& s, const std::string& text) {
  json o;
  try {
    o = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("witness JSON parse error: ") + e.what());
  }
  auto face_of = [&](const std::string& key, int dim) {
    std::vector<int> vs = parse_key(key);
    std::sort(vs.begin(), vs.end());
    auto it = s.L.by_verts.find(vs);
    if (it == s.L.by_verts.end() || s.L.faces[it->second].dim != dim ||
        it->second == s.L.top)
      throw std::invalid_argument("witness references unknown face: " + key);
    return it->second;
  };
  try {
    ConvexWitness w;
    w.kernel_included = o.at("kernel_included").get<bool>();
    if (o.contains("edge_selections"))
      for (const auto& [key, p] : o["edge_selections"].items())
        w.edge_sel[face_of(key, 1)] = iv_parse(p);
    if (o.contains("facet_selections"))
      for (const auto& [key, e] : o["facet_selections"].items()) {
        FacetSel sel;
        if (e.contains("full") && e["full"].get<bool>()) {
          sel.kind = FacetSel::Kind::full;
        } else {
          sel.kind = FacetSel::Kind::piece;
          sel.piece = e.at("piece").get<int>();
        }
        w.facet_sel[face_of(key, 2)] = sel;
      }
    if (o.contains("vertices")) w.verts = o["vertices"].get<std::vector<int>>();
    std::sort(w.verts.begin(), w.verts.end());
    if (o.contains("complement_structure"))
      for (const auto& e : o["complement_structure"]) {
        ComplementItem c;
        std::string kind = e.at("kind").get<std::string>();
        if (kind == "edge_gap") {
          c.kind = ComplementItem::edge_gap;
          c.face_id = face_of(e.at("edge").get<std::string>(), 1);
          c.gap = iv_parse(e.at("gap"));
        } else if (kind == "facet_piece") {
          c.kind = ComplementItem::facet_piece;
          c.face_id = face_of(e.at("facet").get<std::string>(), 2);
          c.piece = e.at("piece").get<int>();
        } else if (kind == "facet_all") {
          c.kind = ComplementItem::facet_all;
          c.face_id = face_of(e.at("facet").get<std::string>(), 2);
        } else if (kind == "vertex") {
          c.kind = ComplementItem::vertex;
          c.face_id = e.at("vertex").get<int>();
        } else {
          throw std::invalid_argument("unknown complement kind: " + kind);
        }
        w.complement.push_back(c);
      }
    return w;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("witness JSON shape error: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + path);
  f << text;
}

}  // namespace mcv
