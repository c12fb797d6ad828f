#include "mcv/genscene.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mcv {

namespace {

// splitmix64: platform-stable deterministic stream
struct Sm64 {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  Rat frac(long n, long d) {
    Rat r(n, d);
    r.canonicalize();
    return r;
  }
  // rational in [-range, range], denominator <= maxden
  Rat rat(long range, long maxden) {
    long den = (long)below(maxden) + 1;
    long num = (long)below(2 * range * den + 1) - range * den;
    return frac(num, den);
  }
  // rational strictly inside (0,1)
  Rat unit(long maxden) {
    long den = (long)below(maxden - 1) + 2;
    long num = (long)below(den - 1) + 1;
    return frac(num, den);
  }
};

EdgeDecoration random_edge_dec(Sm64& rng, int max_pieces) {
  int n = (int)rng.below(max_pieces + 1);
  EdgeDecoration dec;
  if (n == 0) return dec;
  std::set<Rat> vals;
  while ((int)vals.size() < 2 * n) vals.insert(rng.unit(64));
  std::vector<Rat> v(vals.begin(), vals.end());
  std::size_t cur = 0;
  for (int i = 0; i < n && cur < v.size(); ++i) {
    if (rng.below(2) == 0) {
      dec.pieces.push_back(Iv{v[cur], v[cur], true, true});
      cur += 1;
    } else if (cur + 1 < v.size()) {
      dec.pieces.push_back(
          Iv{v[cur], v[cur + 1], rng.below(2) == 0, rng.below(2) == 0});
      cur += 2;
    } else {
      dec.pieces.push_back(Iv{v[cur], v[cur], true, true});
      cur += 1;
    }
  }
  return dec;
}

Pt facet_centroid(const Polytope& P, const std::vector<int>& cycle) {
  Pt c = P.verts[cycle[0]];
  for (std::size_t i = 1; i < cycle.size(); ++i) c = c + P.verts[cycle[i]];
  return Rat(1, (long)cycle.size()) * c;
}

FacetDecoration random_facet_dec(Sm64& rng, const Polytope& P,
                                 const std::vector<int>& cycle) {
  FacetDecoration fd;
  int roll = (int)rng.below(5);
  if (roll <= 1) return fd;  // empty
  if (roll <= 3) {
    fd.mode = FacetDecoration::Mode::full;
    return fd;
  }
  fd.mode = FacetDecoration::Mode::pieces;
  Pt c = facet_centroid(P, cycle);
  int kind = (int)rng.below(3);
  FacetPiece piece;
  if (kind == 0) {
    piece.kind = FacetPiece::point;
    piece.p = c;
  } else if (kind == 1) {
    piece.kind = FacetPiece::segment;
    Pt d = P.verts[cycle[0]] - c;
    piece.a = c + Rat(1, 4) * d;
    piece.b = c - Rat(1, 4) * d;
  } else {
    piece.kind = FacetPiece::polygon;
    for (int v : cycle) piece.poly.push_back(c + Rat(1, 2) * (P.verts[v] - c));
  }
  fd.pieces.push_back(std::move(piece));
  return fd;
}

std::vector<Pt> circle_points(int n) {
  std::vector<Pt> pts;
  for (int j = 0; j < n; ++j) {
    Rat t = Rat(2 * j - (n - 1)) / Rat(n);
    Rat den = 1 + t * t;
    pts.push_back(Pt((1 - t * t) / den, 2 * t / den));
  }
  return pts;
}

}  // namespace

Scene gen_random_scene(std::uint64_t seed, int dim, const GenSceneParams& p) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("gen_random_scene: dim must be 2 or 3");
  Sm64 rng{seed * 0x9e3779b97f4a7c15ull + (std::uint64_t)dim};

  Polytope P;
  for (int attempt = 0;; ++attempt) {
    std::vector<Pt> pts;
    if (dim == 2) {
      int k = 3 + (int)rng.below(p.max_verts - 2);
      for (int i = 0; i < k; ++i) pts.push_back(Pt(rng.rat(4, 4), rng.rat(4, 4)));
    } else {
      int k = 5 + (int)rng.below(4);
      for (int i = 0; i < k; ++i)
        pts.push_back(Pt(rng.rat(2, 2), rng.rat(2, 2), rng.rat(2, 2)));
    }
    if (affine_dim(pts) != dim) continue;
    P = convex_hull(pts);
    if (dim == 2 && (int)P.verts.size() <= p.max_verts) break;
    if (dim == 3 && (int)P.facet_cycles.size() <= p.max_facets &&
        (int)P.verts.size() <= p.max_verts)
      break;
    if (attempt > 500) throw std::logic_error("gen_random_scene: no acceptable hull");
  }

  SceneData d;
  d.dim = dim;
  d.vertices = P.verts;
  if (dim == 3) d.facets = P.facet_cycles;

  // drawn only in sparse mode so default streams stay seed-stable
  auto sparse_skip = [&]() {
    return p.dec_percent < 100 && (int)rng.below(100) >= p.dec_percent;
  };
  FaceLattice L = enumerate_faces(P);
  for (const Face& f : L.faces)
    if (f.dim == 1 && f.id != L.top) {
      if (sparse_skip()) continue;
      EdgeDecoration dec = random_edge_dec(rng, p.max_pieces);
      if (!dec.pieces.empty()) d.edge_decorations[{f.verts[0], f.verts[1]}] = dec;
    }
  if (dim == 3)
    for (const auto& cycle : P.facet_cycles) {
      if (sparse_skip()) continue;
      FacetDecoration fd = random_facet_dec(rng, P, cycle);
      if (fd.mode != FacetDecoration::Mode::empty) {
        std::vector<int> key = cycle;
        std::sort(key.begin(), key.end());
        d.facet_decorations[key] = fd;
      }
    }
  for (std::size_t i = 0; i < P.verts.size(); ++i)
    d.vertex_flags.push_back(!sparse_skip() && rng.below(2) == 0);
  return build_scene(d);
}

Scene gen_bench_polygon(int n) {
  if (n < 3) throw std::invalid_argument("gen_bench_polygon: need n >= 3");
  Polytope P = convex_hull(circle_points(n));
  SceneData d;
  d.dim = 2;
  d.vertices = P.verts;
  d.vertex_flags.assign(P.verts.size(), false);
  int m = (int)P.verts.size();
  for (int i = 0; i < m; ++i) {
    int a = i, b = (i + 1) % m;
    if (a > b) std::swap(a, b);
    d.edge_decorations[{a, b}] =
        EdgeDecoration{{Iv{Rat(0), Rat(1), false, false}}};
  }
  return build_scene(d);
}

}  // namespace mcv
