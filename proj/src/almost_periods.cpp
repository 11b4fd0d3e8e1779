#include "aplab/almost_periods.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <unordered_map>

#include "aplab/error.hpp"
#include "aplab/parallel.hpp"
#include "aplab/sampling.hpp"

namespace aplab {

namespace {

unsigned bit_length(std::uint64_t v) { return v == 0 ? 0 : 64 - static_cast<unsigned>(__builtin_clzll(v)); }

std::optional<__int128> to_int128(const Integer& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 125) return std::nullopt;
  Integer mag = abs(v);
  Integer hi = mag >> 64;
  Integer lo = mag - (hi << 64);
  __int128 r = (static_cast<__int128>(hi.get_ui()) << 64) | static_cast<__int128>(static_cast<std::uint64_t>(lo.get_ui()));
  return v < 0 ? -r : r;
}

// sum of |d|^p, in 128-bit arithmetic when the worst case fits.
class PowerSum {
 public:
  PowerSum(unsigned p, std::uint64_t max_abs, std::size_t terms, const Integer* limit)
      : p_(p), fast_(p * bit_length(max_abs) + bit_length(terms) + 1 <= 124) {
    if (limit) {
      limit_ = *limit;
      has_limit_ = true;
      if (fast_) {
        auto l = to_int128(*limit);
        if (l) limit128_ = *l;
        else has_limit_ = false;  // larger than any fast sum
      }
    }
  }
  // Returns false once the running sum exceeds the limit.
  bool add(std::int64_t d) {
    if (d == 0) return true;
    std::uint64_t a = static_cast<std::uint64_t>(d < 0 ? -d : d);
    if (fast_) {
      __int128 term = 1;
      for (unsigned i = 0; i < p_; ++i) term *= static_cast<__int128>(a);
      small_ += term;
      return !(has_limit_ && small_ > limit128_);
    }
    big_ += pow(Integer(static_cast<unsigned long>(a)), p_);
    return !(has_limit_ && big_ > limit_);
  }
  Integer value() const { return fast_ ? to_integer(small_) : big_; }

 private:
  unsigned p_;
  bool fast_;
  bool has_limit_ = false;
  __int128 small_ = 0;
  __int128 limit128_ = 0;
  Integer big_ = 0;
  Integer limit_;
};

Rational integer_ratio(std::size_t a, std::size_t b) { return ratio(a, b); }

// sum_y | a G(y) - k F(t y) |^p over the union of supports. With a limit,
// returns nullopt as soon as the limit is exceeded.
std::optional<Integer> scaled_defect(const ConvTable& f, const TableLookup& look_f, const ConvTable& g,
                                     const TableLookup& look_g, Count a, Count k, Element t, unsigned p,
                                     const Integer* limit) {
  const Group& G = f.group();
  Element tinv = G.inverse(t);
  std::uint64_t max_abs = static_cast<std::uint64_t>(std::max(a * g.max_value(), k * f.max_value()));
  PowerSum acc(p, max_abs, f.support_size() + g.support_size(), limit);
  for (const auto& e : g) {
    if (!acc.add(a * e.count - k * look_f(G.try_mul(t, e.x)))) return std::nullopt;
  }
  for (const auto& e : f) {
    auto y = G.try_mul(tinv, e.x);
    if (!y || look_g(*y) == 0) {
      if (!acc.add(k * e.count)) return std::nullopt;
    }
  }
  return acc.value();
}

Rational doubling(const GSet& a, const GSet& b, const GSet& s, Side side) {
  if (side == Side::left) return integer_ratio(product_set(s, a).size(), a.size());
  return integer_ratio(product_set(b, s).size(), b.size());
}

Rational approximation_threshold(const GSet& a, const GSet& b, std::uint64_t k, unsigned m) {
  Rational kk(static_cast<unsigned long>(k));
  if (m == 1) {
    Rational na(static_cast<unsigned long>(a.size()));
    return 2 * na * na * Rational(static_cast<unsigned long>(b.size())) * kk;
  }
  return 2 * l2m_lambda(a, b, k, m) * pow(kk, 2 * m);
}

// Decides the defect bound for each requested u, caching across calls.
class DefectOracle {
 public:
  DefectOracle(const ConvTable& f, Side side, unsigned p, const Rational& bound)
      : f_(f), side_(side), p_(p), bound_(bound) {}
  bool passes(Element u) {
    auto it = cache_.find(u.rank);
    if (it != cache_.end()) return it->second;
    Integer d = translation_defect(f_, u, side_, p_).value;
    bool ok = Rational(d) <= bound_;
    if (ok && d > max_) max_ = d;
    cache_.emplace(u.rank, ok);
    return ok;
  }
  // Bulk evaluation of many u in parallel; returns the maximal defect and
  // whether all pass.
  std::pair<bool, Integer> all_pass(const GSet& us, unsigned threads) {
    std::vector<Integer> defects(us.size());
    parallel_for(us.size(), threads, [&](std::size_t i) {
      defects[i] = translation_defect(f_, us[i], side_, p_).value;
    });
    bool ok = true;
    Integer mx = 0;
    for (std::size_t i = 0; i < us.size(); ++i) {
      bool pass = Rational(defects[i]) <= bound_;
      cache_.emplace(us[i].rank, pass);
      if (!pass) ok = false;
      if (defects[i] > mx) mx = defects[i];
    }
    if (ok) max_ = mx;
    return {ok, mx};
  }
  const Integer& max_passing() const { return max_; }

 private:
  const ConvTable& f_;
  Side side_;
  unsigned p_;
  Rational bound_;
  Integer max_ = 0;
  std::unordered_map<std::uint64_t, bool> cache_;
};

// Largest subset of `candidates`, chosen greedily in canonical order, whose
// pairwise quotients t s^-1 all meet the bound.
GSet greedy_certified(const GSet& candidates, DefectOracle& oracle) {
  const Group& G = candidates.group();
  std::vector<Element> kept;
  for (Element t : candidates) {
    bool ok = true;
    for (Element s : kept) {
      auto u = G.try_mul(t, G.inverse(s));
      if (!u || !oracle.passes(*u)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(t);
  }
  return make_sorted(G, std::move(kept));
}

Integer max_defect_over(const ConvTable& f, const GSet& us, Side side, unsigned p, unsigned threads) {
  std::vector<Integer> defects(us.size());
  parallel_for(us.size(), threads, [&](std::size_t i) { defects[i] = translation_defect(f, us[i], side, p).value; });
  Integer mx = 0;
  for (const auto& d : defects)
    if (d > mx) mx = d;
  return mx;
}

// Left-translate search; the right variant reduces to this by reflection.
PeriodCertificate search_left(const GSet& a, const GSet& b, const GSet& s, const Rational& epsilon, unsigned m,
                              const SearchConfig& cfg) {
  const Group& G = a.group();
  PeriodCertificate cert;
  cert.A = a;
  cert.B = b;
  cert.S = s;
  cert.side = Side::left;
  cert.epsilon = epsilon;
  cert.m = m;
  cert.k = sample_size(epsilon, m);
  cert.seed = cfg.seed;
  cert.target_fraction = cfg.target_fraction;
  cert.C = GSet(G);

  GSet y = product_set(s, a);
  cert.K = integer_ratio(y.size(), a.size());
  cert.bound_rhs = period_bound(a, b, epsilon, m, Side::left);
  Rational growth = pow(Rational(2) * cert.K, cert.k);
  cert.target_size = cfg.target_fraction * Rational(static_cast<unsigned long>(s.size())) / growth;

  ConvTable f = convolve_sets({a, b});
  unsigned p = 2 * m;
  DefectOracle oracle(f, Side::left, p, cert.bound_rhs);
  GSet s_inv = inverse_set(s);

  if (2 * cert.k > a.size()) {
    cert.trivial = true;
    cert.T = greedy_certified(s_inv, oracle);
    cert.max_defect = max_defect_over(f, product_set(cert.T, inverse_set(cert.T)), Side::left, p, cfg.threads);
    return cert;
  }

  Integer auto_limit = ceil(20 * growth);
  if (cfg.max_attempts > 0) {
    cert.attempt_limit = cfg.max_attempts;
  } else if (auto_limit > Integer(static_cast<unsigned long>(cfg.attempt_ceiling))) {
    cert.attempt_limit = cfg.attempt_ceiling;
    cert.attempt_limit_capped = true;
  } else {
    cert.attempt_limit = auto_limit.get_ui();
  }

  Integer limit = floor(approximation_threshold(a, b, cert.k, m));
  TableLookup look_f(f);
  auto a_size = static_cast<Count>(a.size());
  auto k = static_cast<Count>(cert.k);

  struct Attempt {
    GSet c;
    std::vector<Element> t;
  };
  auto run_attempt = [&](std::uint64_t index) {
    Rng rng(sub_seed(cfg.seed, index));
    Attempt out{sample_k_subset(y, cert.k, rng), {}};
    ConvTable g = convolve_sets({out.c, b});
    TableLookup look_g(g);
    for (Element t : s_inv)
      if (scaled_defect(f, look_f, g, look_g, a_size, k, t, p, &limit)) out.t.push_back(t);
    return out;
  };

  unsigned batch = std::max(1u, cfg.threads);
  std::size_t best = 0;
  for (std::uint64_t start = 0; start < cert.attempt_limit; start += batch) {
    std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(batch, cert.attempt_limit - start));
    std::vector<Attempt> results(n);
    parallel_for(n, batch, [&](std::size_t i) { results[i] = run_attempt(start + i); });
    for (std::size_t i = 0; i < n; ++i) {
      best = std::max(best, results[i].t.size());
      if (Rational(static_cast<unsigned long>(results[i].t.size())) < cert.target_size) continue;
      cert.attempts_used = start + i + 1;
      cert.C = results[i].c;
      cert.T = make_sorted(G, std::move(results[i].t));
      GSet diffs = product_set(cert.T, inverse_set(cert.T));
      auto [ok, mx] = oracle.all_pass(diffs, cfg.threads);
      if (!ok) {
        std::size_t before = cert.T.size();
        cert.T = greedy_certified(cert.T, oracle);
        cert.anomalies.push_back("certification shrank T from " + std::to_string(before) + " to " +
                                 std::to_string(cert.T.size()) + " elements");
        mx = max_defect_over(f, product_set(cert.T, inverse_set(cert.T)), Side::left, p, cfg.threads);
      }
      cert.max_defect = mx;
      return cert;
    }
  }
  fail(ErrorKind::attempts_exhausted, "no sample reached |T| >= " + to_string(cert.target_size) + " in " +
                                          std::to_string(cert.attempt_limit) + " attempts (best |T| = " +
                                          std::to_string(best) + ")");
}

}  // namespace

std::uint64_t sample_size(const Rational& epsilon, unsigned m) {
  if (epsilon <= 0) fail(ErrorKind::precondition, "epsilon must be positive");
  if (m < 1) fail(ErrorKind::precondition, "m must be >= 1");
  Integer k = m == 1 ? ceil(Rational(8) / (epsilon * epsilon)) : ceil(Rational(49 * static_cast<long>(m)) / epsilon);
  if (!k.fits_ulong_p()) fail(ErrorKind::out_of_range, "sample size does not fit in 64 bits");
  return k.get_ui();
}

Integer scaled_approximation_defect(const GSet& c, const GSet& a, const GSet& b, unsigned m) {
  require_same_group(a, b);
  require_same_group(a, c);
  ConvTable f = convolve_sets({a, b});
  ConvTable g = convolve_sets({c, b});
  TableLookup look_f(f), look_g(g);
  return *scaled_defect(f, look_f, g, look_g, static_cast<Count>(a.size()), static_cast<Count>(c.size()),
                        a.group().identity(), 2 * m, nullptr);
}

bool approximates_l2(const GSet& c, const GSet& a, const GSet& b, std::uint64_t k) {
  if (c.size() != k) fail(ErrorKind::out_of_range, "|C| must equal k");
  return Rational(scaled_approximation_defect(c, a, b, 1)) <= approximation_threshold(a, b, k, 1);
}

Rational l2m_lambda(const GSet& a, const GSet& b, std::uint64_t k, unsigned m) {
  ConvTable f = convolve_sets({a, b});
  Rational r = Rational(static_cast<unsigned long>(m) * a.size()) / Rational(static_cast<unsigned long>(k));
  Rational sum = 0;
  for (const auto& e : f) sum += pow(3 * Rational(static_cast<long>(e.count)) + r, m);
  return 2 * pow(r, m) * sum;
}

bool approximates_l2m(const GSet& c, const GSet& a, const GSet& b, std::uint64_t k, unsigned m) {
  if (c.size() != k) fail(ErrorKind::out_of_range, "|C| must equal k");
  Rational threshold = 2 * l2m_lambda(a, b, k, m) * pow(Rational(static_cast<unsigned long>(k)), 2 * m);
  return Rational(scaled_approximation_defect(c, a, b, m)) <= threshold;
}

LambdaCheck check_lambda_estimate(const GSet& a, const GSet& b, std::uint64_t k, unsigned m) {
  ConvTable f = convolve_sets({a, b});
  LambdaCheck out;
  out.lambda = l2m_lambda(a, b, k, m);
  Rational r = Rational(static_cast<unsigned long>(m) * a.size()) / Rational(static_cast<unsigned long>(k));
  Rational norm_m(lp_norm_pow(f, m).value);
  Rational other = pow(20 * r * Rational(static_cast<unsigned long>(f.support_size())), m);
  out.stated_bound = 2 * pow(r, m) * pow(Rational(61, 20), m) * std::max(norm_m, other);
  out.holds = out.lambda <= out.stated_bound;
  return out;
}

Rational period_bound(const GSet& a, const GSet& b, const Rational& epsilon, unsigned m, Side side) {
  Rational na(static_cast<unsigned long>(a.size()));
  Rational nb(static_cast<unsigned long>(b.size()));
  Rational own = side == Side::left ? na : nb;
  Rational other = side == Side::left ? nb : na;
  if (m == 1) return epsilon * epsilon * own * own * other;
  ConvTable f = convolve_sets({a, b});
  Rational em = pow(epsilon, m);
  Rational first = em * Rational(static_cast<unsigned long>(f.support_size())) * pow(own, m);
  Rational second(lp_norm_pow(f, m).value);
  return std::max(first, second) * em * pow(own, m);
}

PeriodCertificate find_almost_periods(const GSet& a, const GSet& b, const GSet& s, const Rational& epsilon,
                                      unsigned m, Side side, const SearchConfig& cfg) {
  require_same_group(a, b);
  require_same_group(a, s);
  if (a.empty() || b.empty() || s.empty()) fail(ErrorKind::precondition, "A, B and S must be nonempty");
  if (epsilon <= 0 || epsilon >= 1) fail(ErrorKind::precondition, "epsilon must lie in (0, 1), got " + to_string(epsilon));
  if (m < 1) fail(ErrorKind::precondition, "m must be >= 1");
  if (cfg.target_fraction <= 0 || cfg.target_fraction > 1)
    fail(ErrorKind::precondition, "target fraction must lie in (0, 1]");
  if (side == Side::left) return search_left(a, b, s, epsilon, m, cfg);

  // right defect of 1_A*1_B at u equals the left defect of 1_{B^-1}*1_{A^-1} at u^-1
  PeriodCertificate cert = search_left(inverse_set(b), inverse_set(a), inverse_set(s), epsilon, m, cfg);
  cert.A = a;
  cert.B = b;
  cert.S = s;
  cert.side = Side::right;
  cert.C = inverse_set(cert.C);
  return cert;
}

CertificateCheck verify_certificate(const PeriodCertificate& cert, unsigned threads) {
  CertificateCheck out;
  const GSet& a = cert.A;
  const GSet& b = cert.B;
  const GSet& s = cert.S;
  try {
    require_same_group(a, b);
    require_same_group(a, s);
    require_same_group(a, cert.T);
    Rational K = doubling(a, b, s, cert.side);
    std::uint64_t k = sample_size(cert.epsilon, cert.m);
    Rational bound = period_bound(a, b, cert.epsilon, cert.m, cert.side);
    std::size_t own = cert.side == Side::left ? a.size() : b.size();
    GSet allowed = cert.side == Side::left ? inverse_set(s) : s;
    std::vector<std::string> problems;
    if (K != cert.K) problems.push_back("K mismatch");
    if (k != cert.k) problems.push_back("k mismatch");
    if (bound != cert.bound_rhs) problems.push_back("bound mismatch");
    if (!is_subset(cert.T, allowed)) problems.push_back("T not inside the allowed translate set");
    if (cert.T.empty()) problems.push_back("T is empty");
    if (cert.trivial != (2 * k > own)) problems.push_back("trivial flag mismatch");
    if (!cert.trivial) {
      GSet pool = cert.side == Side::left ? product_set(s, a) : product_set(b, s);
      if (cert.C.size() != k || !is_subset(cert.C, pool)) problems.push_back("C is not a k-subset of the sampling pool");
    }
    GSet diffs = product_set(cert.T, inverse_set(cert.T));
    ConvTable f = convolve_sets({a, b});
    out.max_defect = max_defect_over(f, diffs, cert.side, 2 * cert.m, threads);
    if (out.max_defect != cert.max_defect) problems.push_back("recorded max defect mismatch");
    Rational target = cert.target_fraction * Rational(static_cast<unsigned long>(s.size())) / pow(2 * K, k);
    if (target != cert.target_size) problems.push_back("target size mismatch");
    out.consistent = problems.empty();
    out.sound = Rational(out.max_defect) <= bound;
    if (!out.sound) problems.push_back("defect " + to_string(out.max_defect) + " exceeds bound");
    out.size_target = cert.trivial || Rational(static_cast<unsigned long>(cert.T.size())) >= target;
    if (!out.size_target) problems.push_back("|T| below target");
    for (const auto& p : problems) out.failure += (out.failure.empty() ? "" : "; ") + p;
  } catch (const Error& e) {
    out.failure = e.what();
  }
  return out;
}

GSet brute_force_periods(const GSet& a, const GSet& b, const GSet& s, const Rational& epsilon, unsigned p,
                         Side side) {
  if (p < 2 || p % 2 != 0) fail(ErrorKind::out_of_range, "p must be a positive even integer");
  require_same_group(a, b);
  require_same_group(a, s);
  const Group& G = a.group();
  Rational bound = period_bound(a, b, epsilon, p / 2, side);
  GSet s_inv = inverse_set(s);
  GSet quotients = side == Side::left ? product_set(s_inv, s) : product_set(s, s_inv);
  GSet candidates = set_union(set_union(s, s_inv), set_union(quotients, GSet::singleton(G, G.identity())));
  ConvTable f = convolve_sets({a, b});
  std::vector<char> keep(candidates.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    keep[i] = Rational(translation_defect(f, candidates[i], side, p).value) <= bound;
  std::vector<Element> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (keep[i]) out.push_back(candidates[i]);
  return make_sorted(G, std::move(out));
}

}  // namespace aplab
