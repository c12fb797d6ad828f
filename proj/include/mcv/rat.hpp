#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcv {

// Exact rational scalar. mpq_class keeps canonical form (positive denominator,
// coprime) as long as values are built through arithmetic or canonicalize().
using Rat = mpq_class;

inline int sign(const Rat& x) { return sgn(x); }

// Parses "p/q" or an integer string. Throws std::invalid_argument on anything
// else (including zero denominators).
Rat parse_rat(const std::string& s);

// Canonical text form: "p/q", or "p" when the denominator is 1.
std::string rat_str(const Rat& x);

// Point in R^2 or R^3 with exact coordinates. Unused coordinates stay zero, so
// 2D points can be compared/hashed uniformly.
struct Pt {
  int dim = 0;
  std::array<Rat, 3> c{};

  Pt() = default;
  Pt(Rat x, Rat y) : dim(2), c{std::move(x), std::move(y), Rat(0)} {}
  Pt(Rat x, Rat y, Rat z) : dim(3), c{std::move(x), std::move(y), std::move(z)} {}

  Rat& operator[](int i) { return c[i]; }
  const Rat& operator[](int i) const { return c[i]; }

  bool operator==(const Pt& o) const { return dim == o.dim && c == o.c; }
  bool operator!=(const Pt& o) const { return !(*this == o); }
};

// Lexicographic coordinate order; the fixed total order used for all
// deterministic tie-breaks.
bool lex_less(const Pt& a, const Pt& b);

Pt operator+(const Pt& a, const Pt& b);
Pt operator-(const Pt& a, const Pt& b);
Pt operator*(const Rat& s, const Pt& a);

Rat dot(const Pt& a, const Pt& b);
Rat cross2(const Pt& a, const Pt& b);
Pt cross3(const Pt& a, const Pt& b);

inline Pt midpoint(const Pt& a, const Pt& b) { return Rat(1, 2) * (a + b); }

// Point at parameter t on the segment a->b.
inline Pt lerp(const Pt& a, const Pt& b, const Rat& t) { return a + t * (b - a); }

// Sign of det(q-p, r-p); +1 = counterclockwise. 2D only.
int orientation2(const Pt& p, const Pt& q, const Pt& r);

struct DimMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void require_same_dim(const Pt& a, const Pt& b) {
  if (a.dim != b.dim) throw DimMismatch("point dimension mismatch");
}

}  // namespace mcv
