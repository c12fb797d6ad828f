#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "mcv/gadgets.hpp"
#include "mcv/genscene.hpp"
#include "mcv/scene_io.hpp"
#include "mcv/solver.hpp"
#include "mcv/stars.hpp"

using json = nlohmann::json;
using namespace mcv;

namespace {

int thread_count() {
  if (const char* env = std::getenv("MCV_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? (int)hw : 1;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

Rat parse_rat_arg(const std::string& s) { return parse_rat(s); }

Pt parse_p0(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("expected \"x,y\" rational pair");
  return Pt(parse_rat_arg(s.substr(0, comma)), parse_rat_arg(s.substr(comma + 1)));
}

std::string pt_str(const Pt& p) {
  std::string s = "(";
  for (int i = 0; i < p.dim; ++i) {
    if (i) s += ", ";
    s += p[i].get_str();
  }
  return s + ")";
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text << "\n";
  else
    write_file(out_path, text);
}

// ---- SVG rendering (2D scenes): exact integer coordinates only ----

struct SvgScale {
  mpz_class L = 1;          // common denominator of all plotted rationals
  Rat xmin, ymin, ymax;

  void absorb(const Rat& q) {
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), q.get_den().get_mpz_t());
  }
  std::string x(const Rat& q) const {
    Rat v = (q - xmin) * Rat(L);
    return v.get_num().get_str();
  }
  std::string y(const Rat& q) const {  // SVG y axis points down
    Rat v = (ymax - q) * Rat(L);
    return v.get_num().get_str();
  }
};

std::string render_svg(const Scene& s, const ConvexWitness* w) {
  SvgScale sc;
  const auto& verts = s.C.verts;
  sc.xmin = verts[0][0];
  sc.ymin = verts[0][1];
  sc.ymax = verts[0][1];
  Rat xmax = verts[0][0];
  for (const Pt& p : verts) {
    sc.xmin = std::min(sc.xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    sc.ymin = std::min(sc.ymin, p[1]);
    sc.ymax = std::max(sc.ymax, p[1]);
    sc.absorb(p[0]);
    sc.absorb(p[1]);
  }
  for (const auto& [eid, dec] : s.edges)
    for (const Iv& piece : dec.pieces) {
      for (const Rat& t : {piece.lo, piece.hi}) {
        Pt p = s.edge_point(eid, t);
        sc.absorb(p[0]);
        sc.absorb(p[1]);
      }
    }
  if (w)
    for (const auto& [eid, sel] : w->edge_sel)
      for (const Rat& t : {sel.lo, sel.hi}) {
        Pt p = s.edge_point(eid, t);
        sc.absorb(p[0]);
        sc.absorb(p[1]);
      }

  // scale up to a comfortable integer raster (exact; no floats emitted)
  {
    Rat wq = (xmax - sc.xmin) * Rat(sc.L);
    mpz_class w0 = wq.get_num();
    if (w0 > 0 && w0 < 1000) sc.L *= (1000 / w0 + 1);
  }
  Rat wq = (xmax - sc.xmin) * Rat(sc.L), hq = (sc.ymax - sc.ymin) * Rat(sc.L);
  mpz_class width = wq.get_num(), height = hq.get_num();
  mpz_class pad = std::max(mpz_class(width / 20), mpz_class(1));
  mpz_class stroke = std::max(mpz_class(width / 200), mpz_class(1));
  mpz_class dot = std::max(mpz_class(width / 100), mpz_class(1));

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << (-pad) << " "
     << (-pad) << " " << (width + 2 * pad) << " " << (height + 2 * pad) << "\">\n";

  // kernel: the open polygon interior, shaded
  os << "<polygon points=\"";
  for (const Pt& p : verts) os << sc.x(p[0]) << "," << sc.y(p[1]) << " ";
  os << "\" fill=\"#dce9f7\" stroke=\"#8899aa\" stroke-width=\"" << stroke
     << "\"/>\n";

  auto line = [&](const Pt& a, const Pt& b, const char* color, const mpz_class& sw) {
    os << "<line x1=\"" << sc.x(a[0]) << "\" y1=\"" << sc.y(a[1]) << "\" x2=\""
       << sc.x(b[0]) << "\" y2=\"" << sc.y(b[1]) << "\" stroke=\"" << color
       << "\" stroke-width=\"" << sw << "\"/>\n";
  };
  auto circle = [&](const Pt& p, const char* color) {
    os << "<circle cx=\"" << sc.x(p[0]) << "\" cy=\"" << sc.y(p[1]) << "\" r=\""
       << dot << "\" fill=\"" << color << "\"/>\n";
  };

  // decorations: the part of X on the boundary
  for (const auto& [eid, dec] : s.edges)
    for (const Iv& piece : dec.pieces) {
      if (piece.is_point())
        circle(s.edge_point(eid, piece.lo), "#336699");
      else
        line(s.edge_point(eid, piece.lo), s.edge_point(eid, piece.hi), "#336699",
             stroke * 2);
    }
  for (std::size_t i = 0; i < s.vertex_flags.size(); ++i)
    if (s.vertex_flags[i]) circle(verts[i], "#336699");

  // witness selections, highlighted
  if (w) {
    for (const auto& [eid, sel] : w->edge_sel) {
      if (sel.is_point())
        circle(s.edge_point(eid, sel.lo), "#cc3311");
      else
        line(s.edge_point(eid, sel.lo), s.edge_point(eid, sel.hi), "#cc3311",
             stroke * 3);
    }
    for (int v : w->verts) circle(verts[v], "#cc3311");
  }
  os << "</svg>\n";
  return os.str();
}

// ---- gadget file plumbing ----

std::vector<std::vector<Rat>> read_choices(const std::string& path) {
  json j = json::parse(read_file(path));
  std::vector<std::vector<Rat>> out;
  for (const auto& row : j) {
    std::vector<Rat> cs;
    for (const auto& v : row) cs.push_back(parse_rat_arg(v.get<std::string>()));
    out.push_back(std::move(cs));
  }
  return out;
}

json block_manifest(const GadgetInstance& g) {
  json blocks = json::array();
  for (const auto& b : g.blocks) {
    json jb;
    if (g.scene) jb["edge"] = g.scene->L.faces[b.edge_fid].verts;
    json params = json::array(), source = json::array();
    for (const Rat& t : b.params) params.push_back(t.get_str());
    for (const Rat& t : b.source) source.push_back(t.get_str());
    jb["params"] = params;
    jb["source"] = source;
    blocks.push_back(jb);
  }
  return json{{"blocks", blocks}};
}

// ---- star file plumbing ----

std::vector<StarConfiguration> read_stars(const std::string& path) {
  json j = json::parse(read_file(path));
  std::vector<StarConfiguration> out;
  for (const auto& js : j.at("stars")) {
    StarConfiguration s;
    auto pt = [](const json& a) {
      return Pt(parse_rat(a.at(0).get<std::string>()),
                parse_rat(a.at(1).get<std::string>()));
    };
    s.center = pt(js.at("center"));
    for (const auto& a : js.at("arms")) s.arms.push_back(pt(a));
    out.push_back(std::move(s));
  }
  return out;
}

// ---- subcommand bodies (return process exit codes) ----

int cmd_solve(const std::string& scene_path, const std::string& out,
              const std::string& plot, bool trace_stages) {
  Scene s = scene_from_json(read_file(scene_path));
  std::vector<std::string> trace;
  ConvexWitness w = solve_scene(s, trace_stages ? &trace : nullptr);
  for (const auto& line : trace) std::cerr << line << "\n";
  emit(out, witness_to_json(s, w));
  if (!plot.empty()) {
    if (s.C.ambient != 2) {
      std::cerr << "--plot supports 2D scenes only\n";
      return 1;
    }
    write_file(plot, render_svg(s, &w));
  }
  return 0;
}

int cmd_verify(const std::string& scene_path, const std::string& witness_path) {
  Scene s = scene_from_json(read_file(scene_path));
  ConvexWitness w = witness_from_json(s, read_file(witness_path));
  WitnessCheck chk = witness_check(s, w);
  if (!chk.contained || !chk.convex) {
    std::cout << "invalid witness: " << chk.detail << "\n";
    return 2;
  }
  MaximalityVerdict v = verify_maximal(s, w);
  if (!v.maximal) {
    std::cout << "not maximal: " << v.where << "\ncounterexample: "
              << pt_str(v.counterexample) << "\n";
    return 2;
  }
  std::cout << "maximal\n";
  return 0;
}

int cmd_faces(const std::string& scene_path) {
  Scene s = scene_from_json(read_file(scene_path));
  const FaceLattice& L = s.L;
  for (const Face& f : L.faces) {
    std::cout << f.dim << " " << f.id << " ";
    for (std::size_t i = 0; i < f.verts.size(); ++i)
      std::cout << (i ? "," : "") << f.verts[i];
    std::cout << " ";
    // covers: minimal strict superfaces
    bool first = true;
    for (int g : L.up[f.id]) {
      bool minimal = true;
      for (int h : L.up[f.id])
        if (h != g) {
          const auto& hu = L.up[h];
          if (std::find(hu.begin(), hu.end(), g) != hu.end()) minimal = false;
        }
      if (minimal) {
        std::cout << (first ? "" : ",") << g;
        first = false;
      }
    }
    if (first) std::cout << "-";
    std::cout << "\n";
  }
  return 0;
}

int emit_gadget(const GadgetInstance& g, const std::string& out,
                const std::string& manifest) {
  if (g.scene) {
    emit(out, scene_to_json(*g.scene));
  } else {
    json j;
    if (g.kind == GadgetInstance::Kind::sc) {
      j["kind"] = "sc";
      j["n"] = g.complex.n;
      j["faces"] = g.complex.faces;
    } else {
      j["kind"] = "ac";
      j["dim"] = g.ac_dim;
      j["blocks"] = g.ac_blocks;
    }
    emit(out, j.dump(2));
  }
  if (!manifest.empty()) write_file(manifest, block_manifest(g).dump(2));
  return 0;
}

int cmd_stars_check(const std::string& path) {
  auto stars = read_stars(path);
  bool all_ok = true;
  for (std::size_t i = 0; i < stars.size(); ++i) {
    auto bad = validate_star(stars[i]);
    if (bad) {
      all_ok = false;
      std::cout << "star " << i << ": invalid, arms " << bad->first << " and "
                << bad->second << " overlap\n";
    } else {
      std::cout << "star " << i << ": ok\n";
    }
  }
  for (std::size_t i = 0; i < stars.size(); ++i)
    for (std::size_t j = i + 1; j < stars.size(); ++j) {
      auto p = stars_intersect(stars[i], stars[j]);
      std::cout << "stars " << i << "," << j << ": "
                << (p ? "intersect at " + pt_str(*p) : std::string("disjoint"))
                << "\n";
    }
  return all_ok ? 0 : 2;
}

int cmd_stars_classify(const std::string& path, long k, long l,
                       const std::string& p0s) {
  auto stars = read_stars(path);
  Pt p0 = parse_p0(p0s);
  auto cls = moore_classify(stars, k, p0, l);
  for (std::size_t i = 0; i < cls.size(); ++i) {
    std::cout << "star " << i << ": ";
    if (cls[i])
      std::cout << (*cls[i])[0] << "," << (*cls[i])[1] << "," << (*cls[i])[2];
    else
      std::cout << "-";
    std::cout << "\n";
  }
  return 0;
}

int cmd_bench_random(int count, std::uint64_t seed, int dim) {
  int workers = std::min(thread_count(), count);
  std::vector<json> results(count);
  std::atomic<int> next{0}, failures{0};
  auto t0 = std::chrono::steady_clock::now();
  auto work = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      std::uint64_t s = seed + (std::uint64_t)i;
      Scene sc = gen_random_scene(s, dim);
      auto a = std::chrono::steady_clock::now();
      ConvexWitness w = solve_scene(sc);
      auto b = std::chrono::steady_clock::now();
      MaximalityVerdict v = verify_maximal(sc, w);
      auto c = std::chrono::steady_clock::now();
      if (!v.maximal) failures.fetch_add(1);
      results[i] = json{
          {"seed", s},
          {"dim", dim},
          {"solve_ns", std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count()},
          {"verify_ns", std::chrono::duration_cast<std::chrono::nanoseconds>(c - b).count()},
          {"maximal", v.maximal}};
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  auto t1 = std::chrono::steady_clock::now();

  json rep;
  rep["command"] = "bench";
  std::ostringstream key;
  key << "random/" << count << "/" << seed << "/" << dim;
  rep["digest"] = hex64(fnv1a(key.str()));
  rep["wall_ns"] =
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
  rep["threads"] = workers;
  rep["results"] = results;
  rep["passed"] = count - failures.load();
  std::cout << rep.dump(2) << "\n";
  return failures.load() == 0 ? 0 : 2;
}

int cmd_bench_scale(int edges, int steps) {
  json sizes = json::array();
  long long prev = 0;
  bool linear = true;
  int n = edges;
  for (int step = 0; step < steps; ++step, n *= 10) {
    Scene sc = gen_bench_polygon(n);
    auto a = std::chrono::steady_clock::now();
    ConvexWitness w = solve_scene(sc);
    MaximalityVerdict v = verify_maximal(sc, w);
    auto b = std::chrono::steady_clock::now();
    long long ns = std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count();
    json js{{"edges", n}, {"solve_verify_ns", ns}, {"maximal", v.maximal}};
    if (prev > 0) {
      js["ratio_x1000"] = ns * 1000 / prev;
      if (ns > prev * 20) linear = false;  // 10x size, 2x slack
    }
    if (!v.maximal) linear = false;
    prev = ns;
    sizes.push_back(js);
  }
  json rep;
  rep["command"] = "bench";
  std::ostringstream key;
  key << "scale/" << edges << "/" << steps;
  rep["digest"] = hex64(fnv1a(key.str()));
  rep["results"] = sizes;
  rep["linear_within_2x"] = linear;
  std::cout << rep.dump(2) << "\n";
  return linear ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximal convex subsets of decorated polytope scenes"};
  app.require_subcommand(1);

  // solve
  std::string solve_scene_path, solve_out, solve_plot;
  bool trace_stages = false;
  auto* solve = app.add_subcommand("solve", "compute a maximal convex witness");
  solve->add_option("scene", solve_scene_path, "scene file")->required();
  solve->add_option("--out", solve_out, "witness output file (default stdout)");
  solve->add_option("--plot", solve_plot, "SVG rendering output (2D scenes)");
  solve->add_flag("--trace-stages", trace_stages, "print filtration stages to stderr");

  // verify
  std::string ver_scene, ver_witness;
  auto* verify = app.add_subcommand("verify", "verify a witness is maximal convex");
  verify->add_option("scene", ver_scene, "scene file")->required();
  verify->add_option("witness", ver_witness, "witness file")->required();

  // faces
  std::string faces_scene;
  auto* faces = app.add_subcommand("faces", "dump the face lattice");
  faces->add_option("scene", faces_scene, "scene file")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "generate scenes and gadget instances");
  gen->require_subcommand(1);
  std::string gen_out, gen_manifest, gen_choices, gen_complex, gen_family;
  int cc_n = 2, prism_m = 3;
  auto* gen_cc = gen->add_subcommand("cc", "choice-function polygon gadget");
  gen_cc->add_option("--n", cc_n, "number of polyline edges")->required();
  gen_cc->add_option("--choices", gen_choices, "choices file (JSON array of arrays)")
      ->required();
  auto* gen_prism = gen->add_subcommand("unif-prism", "prism choice gadget");
  gen_prism->add_option("--m", prism_m, "number of vertical edges")->required();
  gen_prism->add_option("--choices", gen_choices, "choices file")->required();
  auto* gen_sc = gen->add_subcommand("sc", "simplicial complex gadget");
  gen_sc->add_option("--complex", gen_complex, "complex file {n, faces}")->required();
  auto* gen_ac = gen->add_subcommand("ac", "abstract choice instance");
  gen_ac->add_option("--family", gen_family, "family file (JSON array of set sizes)")
      ->required();
  std::uint64_t rnd_seed = 1;
  int rnd_dim = 2;
  auto* gen_rnd = gen->add_subcommand("random", "pseudo-random decorated scene");
  gen_rnd->add_option("--seed", rnd_seed, "generator seed");
  gen_rnd->add_option("--dim", rnd_dim, "2 or 3");
  for (auto* sub : {gen_cc, gen_prism, gen_sc, gen_ac, gen_rnd})
    sub->add_option("--out", gen_out, "output file (default stdout)");
  for (auto* sub : {gen_cc, gen_prism, gen_sc, gen_ac})
    sub->add_option("--manifest", gen_manifest, "block manifest output file");

  // stars
  auto* stars = app.add_subcommand("stars", "star configuration tools");
  stars->require_subcommand(1);
  std::string stars_file, p0s = "0,0";
  long cls_k = 1, cls_l = 3;
  auto* stars_check = stars->add_subcommand("check", "validity and intersections");
  stars_check->add_option("stars", stars_file, "stars file")->required();
  auto* stars_cls = stars->add_subcommand("classify", "Moore arc signatures");
  stars_cls->add_option("stars", stars_file, "stars file")->required();
  stars_cls->add_option("--k", cls_k, "scale parameter");
  stars_cls->add_option("--l", cls_l, "half the arc count (3..6)");
  stars_cls->add_option("--p0", p0s, "classification center \"x,y\"");

  // bench
  std::string bench_scenes = "random";
  int bench_count = 20, bench_dim = 2, bench_edges = 0, bench_steps = 2;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "batch solve+verify harness");
  bench->add_option("--scenes", bench_scenes, "random (default)");
  bench->add_option("--count", bench_count, "number of scenes");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--dim", bench_dim, "scene dimension");
  bench->add_option("--edges", bench_edges,
                    "scaling mode: start polygon size (10x per step)");
  bench->add_option("--steps", bench_steps, "scaling mode: number of 10x steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (*solve) return cmd_solve(solve_scene_path, solve_out, solve_plot, trace_stages);
    if (*verify) return cmd_verify(ver_scene, ver_witness);
    if (*faces) return cmd_faces(faces_scene);
    if (*gen_cc)
      return emit_gadget(gen_cc_scene(cc_n, read_choices(gen_choices)), gen_out,
                         gen_manifest);
    if (*gen_prism)
      return emit_gadget(gen_unif_prism(prism_m, read_choices(gen_choices)), gen_out,
                         gen_manifest);
    if (*gen_sc) {
      json j = json::parse(read_file(gen_complex));
      SimplicialComplex K{j.at("n").get<int>(),
                          j.at("faces").get<std::vector<std::vector<int>>>()};
      for (auto& f : K.faces) std::sort(f.begin(), f.end());
      std::sort(K.faces.begin(), K.faces.end());
      return emit_gadget(gen_sc_scene(K), gen_out, gen_manifest);
    }
    if (*gen_ac) {
      json j = json::parse(read_file(gen_family));
      return emit_gadget(gen_ac_instance(j.get<std::vector<int>>()), gen_out,
                         gen_manifest);
    }
    if (*gen_rnd) {
      Scene s = gen_random_scene(rnd_seed, rnd_dim);
      emit(gen_out, scene_to_json(s));
      return 0;
    }
    if (*stars_check) return cmd_stars_check(stars_file);
    if (*stars_cls) return cmd_stars_classify(stars_file, cls_k, cls_l, p0s);
    if (*bench) {
      if (bench_edges > 0) return cmd_bench_scale(bench_edges, bench_steps);
      if (bench_scenes != "random") {
        std::cerr << "unknown --scenes mode: " << bench_scenes << "\n";
        return 1;
      }
      return cmd_bench_random(bench_count, bench_seed, bench_dim);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
