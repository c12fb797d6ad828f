#include "mcv/stars.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcv {
namespace {

Rat norm2(const Pt& d) { return dot(d, d); }

// Parallel with positive factor: the open segments from a shared origin
// overlap exactly when the direction vectors lie on one ray.
bool same_ray(const Pt& a, const Pt& b) {
  for (int i = 0; i < a.dim; ++i)
    for (int j = i + 1; j < a.dim; ++j)
      if (sign(a[i] * b[j] - a[j] * b[i]) != 0) return false;
  return sign(dot(a, b)) > 0;
}

bool on_closed_segment(const Pt& a, const Pt& b, const Pt& x) {
  return closed_segments_intersect(a, b, x, x).kind != SegIsect::empty;
}

// ---- exact arithmetic on u + v*sqrt(D) ----

// sign of u + v*sqrt(D), D >= 0 rational
int sign_qe(const Rat& u, const Rat& v, const Rat& D) {
  if (sign(D) == 0 || sign(v) == 0) return sign(u);
  int su = sign(u), sv = sign(v);
  if (su == 0) return sv;
  if (su == sv) return su;
  int c = sign(u * u - v * v * D);
  if (c == 0) return 0;
  return c > 0 ? su : sv;
}

// A root of A t^2 + B t + C (A > 0): t = (-B + s*sqrt(D)) / (2A)
struct QRoot {
  Rat A, B, D;
  int s = 1;
};

// sign of alpha + beta * t at the root
int sign_lin(const Rat& alpha, const Rat& beta, const QRoot& r) {
  return sign_qe(2 * r.A * alpha - beta * r.B, Rat(r.s) * beta, r.D);
}

// Separator directions of the 2l-arc partition, counterclockwise from (1,0).
// Rational stand-ins for the equal-angle cuts; supported l: 3, 4, 5, 6.
std::vector<Pt> arc_separators(long l) {
  auto pt = [](long x, long y) { return Pt(Rat(x), Rat(y)); };
  std::vector<Pt> half;
  switch (l) {
    case 3: half = {pt(1, 0), pt(4, 7), pt(-4, 7)}; break;
    case 4: half = {pt(1, 0), pt(1, 1), pt(0, 1), pt(-1, 1)}; break;
    case 5: half = {pt(1, 0), pt(4, 3), pt(1, 3), pt(-1, 3), pt(-4, 3)}; break;
    case 6:
      half = {pt(1, 0), pt(7, 4), pt(4, 7), pt(0, 1), pt(-4, 7), pt(-7, 4)};
      break;
    default:
      throw std::invalid_argument("moore_classify: unsupported arc count l");
  }
  std::vector<Pt> out = half;
  for (const Pt& d : half) out.push_back(Pt(-d[0], -d[1]));
  return out;
}

// Arc index of the crossing point p + t*d (relative to p0) at the root.
int arc_of_root(const std::vector<Pt>& sep, const Pt& w, const Pt& d,
                const QRoot& r) {
  int m = static_cast<int>(sep.size());
  for (int j = 0; j < m; ++j) {
    const Pt &dj = sep[j], &dn = sep[(j + 1) % m];
    // v(t) = w + t d; arc j = [dj, dn) by cross-product sign
    if (sign_lin(cross2(dj, w), cross2(dj, d), r) >= 0 &&
        sign_lin(cross2(dn, w), cross2(dn, d), r) < 0)
      return j;
  }
  throw std::logic_error("arc_of_root: no arc matched");
}

bool arcs_nonadjacent(int a, int b, int m) {
  int d = (a - b) % m;
  if (d < 0) d += m;
  return d != 0 && d != 1 && d != m - 1;
}

std::optional<ArcSignature> classify_one(const StarConfiguration& s, long k,
                                         const Pt& p0,
                                         const std::vector<Pt>& sep) {
  if (auto bad = validate_star(s))
    throw std::invalid_argument("moore_classify: invalid star configuration");
  Rat ball2 = Rat(1) / Rat(9 * k * k);   // (1/(3k))^2
  Rat r2 = Rat(4) / Rat(9 * k * k);      // (2/(3k))^2
  if (cmp(norm2(s.center - p0), ball2) >= 0) return std::nullopt;

  std::vector<char> hit(sep.size(), 0);
  for (const Pt& q : s.arms) {
    Pt w = s.center - p0, d = q - s.center;
    Rat A = norm2(d), B = 2 * dot(d, w), C = norm2(w) - r2;
    Rat D = B * B - 4 * A * C;
    if (sign(D) < 0) continue;
    for (int sroot : {-1, 1}) {
      if (sign(D) == 0 && sroot < 0) continue;
      QRoot root{A, B, D, sroot};
      // 0 <= t <= 1: the crossing lies on the closed arm
      if (sign_qe(-B, Rat(sroot), D) < 0) continue;
      if (sign_qe(-B - 2 * A, Rat(sroot), D) > 0) continue;
      hit[arc_of_root(sep, w, d, root)] = 1;
    }
  }

  int m = static_cast<int>(sep.size());
  for (int a = 0; a < m; ++a) {
    if (!hit[a]) continue;
    for (int b = a + 1; b < m; ++b) {
      if (!hit[b] || !arcs_nonadjacent(a, b, m)) continue;
      for (int c = b + 1; c < m; ++c)
        if (hit[c] && arcs_nonadjacent(a, c, m) && arcs_nonadjacent(b, c, m))
          return ArcSignature{a, b, c};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<int, int>> validate_star(const StarConfiguration& s) {
  if (s.arms.size() < 3)
    throw std::invalid_argument("validate_star: fewer than three arms");
  for (const Pt& q : s.arms)
    if (q == s.center)
      throw std::invalid_argument("validate_star: arm equals the center");
  int n = static_cast<int>(s.arms.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (same_ray(s.arms[i] - s.center, s.arms[j] - s.center))
        return std::make_pair(i, j);
  return std::nullopt;
}

std::optional<Pt> stars_intersect(const StarConfiguration& s1,
                                  const StarConfiguration& s2) {
  if (validate_star(s1) || validate_star(s2))
    throw std::invalid_argument("stars_intersect: invalid star configuration");
  if (s1.center == s2.center) return s1.center;
  for (const Pt& q : s1.arms)
    for (const Pt& r : s2.arms) {
      SegIsect is = closed_segments_intersect(s1.center, q, s2.center, r);
      if (is.kind != SegIsect::empty) return is.p;
    }
  return std::nullopt;
}

std::vector<std::optional<ArcSignature>> moore_classify(
    const std::vector<StarConfiguration>& family, long k, const Pt& p0,
    long l) {
  if (l < 3) throw std::invalid_argument("moore_classify: l must be >= 3");
  if (k < 1) throw std::invalid_argument("moore_classify: k must be >= 1");
  if (p0.dim != 2)
    throw std::invalid_argument("moore_classify: planar configurations only");
  std::vector<Pt> sep = arc_separators(l);
  std::vector<std::optional<ArcSignature>> out;
  for (const StarConfiguration& s : family)
    out.push_back(classify_one(s, k, p0, sep));
  return out;
}

Pt forced_intersection(const StarConfiguration& s1, const StarConfiguration& s2,
                       const MooreClass& cls) {
  auto sig = moore_classify({s1, s2}, cls.k, cls.p0, cls.l);
  if (!sig[0] || *sig[0] != cls.arcs || !sig[1] || *sig[1] != cls.arcs)
    throw std::invalid_argument(
        "forced_intersection: stars do not share the class signature");
  std::optional<Pt> w = stars_intersect(s1, s2);
  if (!w)
    throw std::logic_error(
        "forced_intersection: same-signature stars failed to intersect");
  return *w;
}

std::optional<std::string> validate_realization(const LinearRealization& r,
                                                const FaceLattice& L) {
  int n = r.n_nodes;
  if (static_cast<int>(r.embedding.size()) != n)
    throw std::invalid_argument("validate_realization: embedding size mismatch");
  std::vector<int> loc(n);
  for (int v = 0; v < n; ++v) {
    loc[v] = locate_face(L, r.embedding[v]);
    if (loc[v] < 0 || loc[v] == L.top)
      throw std::invalid_argument("validate_realization: node image off boundary");
  }
  for (int v = 0; v < n; ++v)
    for (int u = v + 1; u < n; ++u)
      if (r.embedding[v] == r.embedding[u])
        return "embedding not injective: nodes " + std::to_string(v) + ", " +
               std::to_string(u);
  for (auto [v, u] : r.edges) {
    if (v < 0 || u < 0 || v >= n || u >= n || v >= u)
      throw std::invalid_argument("validate_realization: malformed edge");
    if (face_join(L, loc[v], loc[u]) == L.top)
      return "edge " + std::to_string(v) + "-" + std::to_string(u) +
             " leaves the boundary";
    Segment e{r.embedding[v], r.embedding[u], SegKind::open};
    for (int x = 0; x < n; ++x) {
      if (x == v || x == u) continue;
      Segment px{r.embedding[x], r.embedding[x], SegKind::closed};
      if (segments_intersect(e, px).kind != SegIsect::empty)
        return "edge " + std::to_string(v) + "-" + std::to_string(u) +
               " passes through node " + std::to_string(x);
    }
  }
  for (std::size_t i = 0; i < r.edges.size(); ++i)
    for (std::size_t j = i + 1; j < r.edges.size(); ++j) {
      Segment a{r.embedding[r.edges[i].first], r.embedding[r.edges[i].second],
                SegKind::open};
      Segment b{r.embedding[r.edges[j].first], r.embedding[r.edges[j].second],
                SegKind::open};
      if (segments_intersect(a, b).kind != SegIsect::empty)
        return "edges " + std::to_string(i) + ", " + std::to_string(j) +
               " intersect";
    }
  return std::nullopt;
}

std::vector<int> degree3_nodes(const LinearRealization& r) {
  std::vector<int> deg(r.n_nodes, 0);
  for (auto [v, u] : r.edges) {
    ++deg[v];
    ++deg[u];
  }
  std::vector<int> out;
  for (int v = 0; v < r.n_nodes; ++v)
    if (deg[v] >= 3) out.push_back(v);
  return out;
}

namespace {

bool in_window(const FaceLattice& L, const ProjectionWindow& w, const Pt& x) {
  int g = locate_face(L, x);
  if (g < 0 || g == L.top) return false;
  for (int f : w.facet_ids) {
    if (g == f) return true;
    for (int up : L.up[g])
      if (up == f) return true;
  }
  return false;
}

}  // namespace

StarConfiguration window_star(const LinearRealization& r, const FaceLattice& L,
                              const ProjectionWindow& w, int node) {
  const Pt& p = r.embedding[node];
  if (!in_window(L, w, p))
    throw std::invalid_argument("window_star: node outside the window");
  std::vector<Pt> neighbors;
  for (auto [v, u] : r.edges) {
    if (v == node) neighbors.push_back(r.embedding[u]);
    if (u == node) neighbors.push_back(r.embedding[v]);
  }
  if (neighbors.empty())
    throw std::invalid_argument("window_star: isolated node");

  StarConfiguration out;
  out.center = window_project(w, p);
  for (const Pt& q : neighbors) {
    // shrunken endpoint at n: ((n+2)p + q)/(n+3); the closed shrunken arm
    // must stay inside the window (endpoint + open-part representative)
    auto fits = [&](long n) {
      Pt a = (Rat(1) / Rat(n + 3)) * (Rat(n + 2) * p + q);
      Pt mid = (Rat(1) / 2) * (p + a);
      return in_window(L, w, a) && in_window(L, w, mid);
    };
    long n = 0;
    if (!fits(0)) {
      long hi = 1;
      while (hi <= (1L << 40) && !fits(hi)) hi *= 2;
      if (hi > (1L << 40))
        throw std::invalid_argument("window_star: arm never enters the window");
      long lo = hi / 2 + 1;  // fits(hi/2) is false
      while (lo < hi) {
        long mid = lo + (hi - lo) / 2;
        if (fits(mid))
          hi = mid;
        else
          lo = mid + 1;
      }
      n = lo;
    }
    Pt a = (Rat(1) / Rat(n + 3)) * (Rat(n + 2) * p + q);
    out.arms.push_back(window_project(w, a));
  }
  return out;
}

}  // namespace mcv
