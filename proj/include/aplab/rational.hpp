#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace aplab {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Accepts "p", "p/q" or a finite decimal such as "0.125".
Rational parse_rational(std::string_view text);

std::string to_string(const Integer& value);
std::string to_string(const Rational& value);

Integer floor(const Rational& x);
Integer ceil(const Rational& x);
Integer pow(const Integer& base, unsigned long exponent);
Rational pow(const Rational& base, unsigned long exponent);
Rational abs(const Rational& x);

inline Rational to_rational(const Integer& v) { return Rational(v); }
inline Rational ratio(std::uint64_t num, std::uint64_t den) {
  Rational r(Integer(static_cast<unsigned long>(num)),
             Integer(static_cast<unsigned long>(den)));
  r.canonicalize();
  return r;
}

/// Nearest dyadic rationals with `bits` fractional bits below / above x.
Rational round_down(const Rational& x, unsigned bits);
Rational round_up(const Rational& x, unsigned bits);

/// A closed rational interval known to contain some real number. All
/// transcendental quantities (exp, log, roots) are handled through these so
/// that comparisons stay sound: the conservative endpoint feeds every
/// inequality.
struct Enclosure {
  Rational lo;
  Rational hi;

  static Enclosure exact(const Rational& v) { return {v, v}; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  Rational width() const { return hi - lo; }
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
Enclosure operator/(const Enclosure& a, const Enclosure& b);
Enclosure widen(const Enclosure& e, unsigned bits);

Enclosure exp_enclosure(const Rational& x, unsigned bits = 96);
Enclosure exp_enclosure(const Enclosure& x, unsigned bits = 96);
/// x must be positive.
Enclosure log_enclosure(const Rational& x, unsigned bits = 96);
Enclosure log_enclosure(const Enclosure& x, unsigned bits = 96);
/// n-th root of x >= 0.
Enclosure root_enclosure(const Rational& x, unsigned n, unsigned bits = 96);
Enclosure root_enclosure(const Enclosure& x, unsigned n, unsigned bits = 96);

/// Floor / ceiling of a real number given by a family of enclosures of
/// increasing precision. If the enclosure never separates from an integer
/// the conservative side (floor of lo, ceil of hi) is returned.
template <typename MakeEnclosure>
Integer certified_floor(MakeEnclosure&& make, unsigned max_bits = 512) {
  for (unsigned bits = 64; bits <= max_bits; bits *= 2) {
    Enclosure e = make(bits);
    Integer lo = floor(e.lo);
    if (lo == floor(e.hi)) return lo;
    if (bits * 2 > max_bits) return lo;
  }
  return floor(make(max_bits).lo);
}

template <typename MakeEnclosure>
Integer certified_ceil(MakeEnclosure&& make, unsigned max_bits = 512) {
  for (unsigned bits = 64; bits <= max_bits; bits *= 2) {
    Enclosure e = make(bits);
    Integer hi = ceil(e.hi);
    if (hi == ceil(e.lo)) return hi;
    if (bits * 2 > max_bits) return hi;
  }
  return ceil(make(max_bits).hi);
}

}  // namespace aplab
