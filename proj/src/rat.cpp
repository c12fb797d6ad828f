#include "mcv/rat.hpp"

#include <cctype>

namespace mcv {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t i = 0;
  auto digits = [&](std::size_t& j) {
    std::size_t start = j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return j > start;
  };
  if (s[i] == '-' || s[i] == '+') ++i;
  if (!digits(i)) throw std::invalid_argument("bad rational literal: " + s);
  if (i < s.size()) {
    if (s[i] != '/') throw std::invalid_argument("bad rational literal: " + s);
    ++i;
    if (!digits(i) || i != s.size())
      throw std::invalid_argument("bad rational literal: " + s);
  }
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& x) { return x.get_str(); }

bool lex_less(const Pt& a, const Pt& b) {
  for (int i = 0; i < a.dim; ++i) {
    int c = cmp(a.c[i], b.c[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

Pt operator+(const Pt& a, const Pt& b) {
  require_same_dim(a, b);
  Pt r = a;
  for (int i = 0; i < a.dim; ++i) r.c[i] += b.c[i];
  return r;
}

Pt operator-(const Pt& a, const Pt& b) {
  require_same_dim(a, b);
  Pt r = a;
  for (int i = 0; i < a.dim; ++i) r.c[i] -= b.c[i];
  return r;
}

Pt operator*(const Rat& s, const Pt& a) {
  Pt r = a;
  for (int i = 0; i < a.dim; ++i) r.c[i] *= s;
  return r;
}

Rat dot(const Pt& a, const Pt& b) {
  require_same_dim(a, b);
  Rat r = 0;
  for (int i = 0; i < a.dim; ++i) r += a.c[i] * b.c[i];
  return r;
}

Rat cross2(const Pt& a, const Pt& b) { return a.c[0] * b.c[1] - a.c[1] * b.c[0]; }

Pt cross3(const Pt& a, const Pt& b) {
  Pt r;
  r.dim = 3;
  r.c[0] = a.c[1] * b.c[2] - a.c[2] * b.c[1];
  r.c[1] = a.c[2] * b.c[0] - a.c[0] * b.c[2];
  r.c[2] = a.c[0] * b.c[1] - a.c[1] * b.c[0];
  return r;
}

int orientation2(const Pt& p, const Pt& q, const Pt& r) {
  if (p.dim != 2 || q.dim != 2 || r.dim != 2)
    throw DimMismatch("orientation2 requires 2D points");
  return sign(cross2(q - p, r - p));
}

}  // namespace mcv
