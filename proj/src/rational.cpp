#include "aplab/rational.hpp"

#include <algorithm>
#include <cctype>

#include "aplab/error.hpp"

namespace aplab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_element: return "invalid-element";
    case ErrorKind::window_overflow: return "window-overflow";
    case ErrorKind::group_mismatch: return "group-mismatch";
    case ErrorKind::non_abelian: return "non-abelian";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::parse: return "parse";
    case ErrorKind::precondition: return "precondition-violation";
    case ErrorKind::density_too_low: return "density-too-low";
    case ErrorKind::attempts_exhausted: return "attempts-exhausted";
    case ErrorKind::no_collision: return "no-collision-found";
    case ErrorKind::not_popular: return "not-popular";
    case ErrorKind::translate_not_found: return "translate-not-found";
    case ErrorKind::degenerate: return "degenerate";
  }
  return "unknown";
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorKind::out_of_range, "zero denominator");
  Rational r(Integer(std::to_string(num)), Integer(std::to_string(den)));
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Integer parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) fail(ErrorKind::parse, "not an integer: '" + std::string(s) + "'");
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return Integer(text);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) fail(ErrorKind::parse, "empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) fail(ErrorKind::parse, "zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!frac.empty() && !all_digits(frac)) fail(ErrorKind::parse, "bad decimal '" + std::string(text) + "'");
    std::string digits(whole);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    Integer w = parse_integer(digits);
    Integer f = frac.empty() ? Integer(0) : Integer(std::string(frac));
    Integer scale = pow(Integer(10), frac.size());
    Rational r(abs(w) * scale + f, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Integer& value) { return value.get_str(); }

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Integer floor(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer pow(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational r(pow(Integer(base.get_num()), exponent), pow(Integer(base.get_den()), exponent));
  r.canonicalize();
  return r;
}

Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational round_down(const Rational& x, unsigned bits) {
  Integer scale = pow(Integer(2), bits);
  Rational r(floor(x * scale), scale);
  r.canonicalize();
  return r;
}

Rational round_up(const Rational& x, unsigned bits) {
  Integer scale = pow(Integer(2), bits);
  Rational r(ceil(x * scale), scale);
  r.canonicalize();
  return r;
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.lo <= 0 && b.hi >= 0) fail(ErrorKind::out_of_range, "enclosure division by an interval containing zero");
  return a * Enclosure{Rational(1) / b.hi, Rational(1) / b.lo};
}

Enclosure widen(const Enclosure& e, unsigned bits) { return {round_down(e.lo, bits), round_up(e.hi, bits)}; }

namespace {

// e^y for 0 <= y <= 1/2 by Taylor series; the tail is at most twice the
// first omitted term.
Enclosure exp_small(const Rational& y, unsigned bits) {
  Rational eps(Integer(1), pow(Integer(2), bits));
  Rational sum = 0;
  Rational term = 1;
  unsigned long i = 0;
  while (true) {
    sum += term;
    ++i;
    term = term * y / Rational(static_cast<long>(i));
    if (term < eps) break;
  }
  return {round_down(sum, bits), round_up(sum + 2 * term, bits)};
}

Enclosure exp_nonneg(const Rational& x, unsigned bits) {
  unsigned s = 0;
  Rational y = x;
  while (y > Rational(1, 2)) {
    y /= 2;
    ++s;
  }
  unsigned prec = bits + s + 16;
  Enclosure e = exp_small(y, prec);
  for (unsigned i = 0; i < s; ++i) {
    e = {round_down(e.lo * e.lo, prec), round_up(e.hi * e.hi, prec)};
  }
  return widen(e, bits);
}

// log(y) for 1 <= y <= 2 via 2*atanh((y-1)/(y+1)).
Enclosure log_unit(const Rational& y, unsigned bits) {
  Rational z = (y - 1) / (y + 1);
  Rational z2 = z * z;
  Rational eps(Integer(1), pow(Integer(2), bits + 4));
  Rational sum = 0;
  Rational zp = z;
  unsigned long odd = 1;
  if (z == 0) return Enclosure::exact(0);
  while (true) {
    sum += 2 * zp / Rational(static_cast<long>(odd));
    zp *= z2;
    odd += 2;
    if (zp < eps) break;
  }
  Rational tail = 2 * zp / (Rational(static_cast<long>(odd)) * (1 - z2));
  return {round_down(sum, bits), round_up(sum + tail, bits)};
}

}  // namespace

Enclosure exp_enclosure(const Rational& x, unsigned bits) {
  if (x >= 0) return exp_nonneg(x, bits);
  Enclosure e = exp_nonneg(-x, bits + 8);
  return widen({Rational(1) / e.hi, Rational(1) / e.lo}, bits);
}

Enclosure exp_enclosure(const Enclosure& x, unsigned bits) {
  return {exp_enclosure(x.lo, bits).lo, exp_enclosure(x.hi, bits).hi};
}

Enclosure log_enclosure(const Rational& x, unsigned bits) {
  if (x <= 0) fail(ErrorKind::out_of_range, "log of a non-positive number");
  if (x < 1) {
    Enclosure e = log_enclosure(Rational(1) / x, bits);
    return {-e.hi, -e.lo};
  }
  Integer whole = floor(x);
  std::size_t e = mpz_sizeinbase(whole.get_mpz_t(), 2) - 1;
  Rational y = x / Rational(pow(Integer(2), e));
  unsigned prec = bits + 8 + static_cast<unsigned>(mpz_sizeinbase(Integer(e + 1).get_mpz_t(), 2));
  Enclosure ly = log_unit(y, prec);
  if (e == 0) return widen(ly, bits);
  Enclosure l2 = log_unit(Rational(2), prec);
  Rational ef(static_cast<long>(e));
  return widen({ly.lo + ef * l2.lo, ly.hi + ef * l2.hi}, bits);
}

Enclosure log_enclosure(const Enclosure& x, unsigned bits) {
  return {log_enclosure(x.lo, bits).lo, log_enclosure(x.hi, bits).hi};
}

Enclosure root_enclosure(const Rational& x, unsigned n, unsigned bits) {
  if (x < 0) fail(ErrorKind::out_of_range, "root of a negative number");
  if (n == 0) fail(ErrorKind::out_of_range, "zeroth root");
  if (x == 0) return Enclosure::exact(0);
  if (n == 1) return Enclosure::exact(x);
  const Integer& a = x.get_num();
  const Integer& b = x.get_den();
  Integer radicand = a * pow(b, n - 1) * pow(Integer(2), static_cast<unsigned long>(n) * bits);
  Integer r;
  mpz_root(r.get_mpz_t(), radicand.get_mpz_t(), n);
  Integer scale = b * pow(Integer(2), bits);
  Rational lo(r, scale);
  Rational hi(r + 1, scale);
  lo.canonicalize();
  hi.canonicalize();
  return widen({lo, hi}, bits);
}

Enclosure root_enclosure(const Enclosure& x, unsigned n, unsigned bits) {
  Rational lo = x.lo < 0 ? Rational(0) : x.lo;
  return {root_enclosure(lo, n, bits).lo, root_enclosure(x.hi, n, bits).hi};
}

}  // namespace aplab
