#include <algorithm>
#include <functional>

#include "aplab/applications.hpp"
#include "aplab/error.hpp"
#include "aplab/sampling.hpp"

namespace aplab {

namespace {

Integer fdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer cdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// sum_{y = lo}^{hi} max(0, c + s y)
Integer sum_positive_linear(Integer lo, Integer hi, const Integer& c, long s) {
  if (lo > hi) return 0;
  if (s == 0) return c > 0 ? Integer(c * (hi - lo + 1)) : Integer(0);
  if (s > 0)
    lo = std::max(lo, Integer(cdiv(1 - c, s)));
  else
    hi = std::min(hi, Integer(fdiv(c - 1, -s)));
  if (lo > hi) return 0;
  Integer count = hi - lo + 1;
  return count * c + Integer(s) * (lo + hi) * count / 2;
}

// #{(x, y) : x in I, y in J, 2y - x in K}
Integer triple_count(const std::pair<Integer, Integer>& I, const std::pair<Integer, Integer>& J,
                     const std::pair<Integer, Integer>& K) {
  const Integer &aI = I.first, &bI = I.second, &aK = K.first, &bK = K.second;
  Integer p1 = fdiv(aI + bK, 2);  // y <= p1: lower end is aI
  Integer p2 = fdiv(bI + aK, 2);  // y <= p2: upper end is 2y - aK
  std::vector<Integer> cuts = {J.first - 1, J.second};
  for (const Integer& p : {p1, p2})
    if (p >= J.first && p < J.second) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  Integer total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Integer lo = cuts[i] + 1, hi = cuts[i + 1];
    if (lo > hi) continue;
    // L = cL + sL y, U = cU + sU y on this piece
    Integer cL = lo <= p1 ? aI : Integer(-bK);
    long sL = lo <= p1 ? 0 : 2;
    Integer cU = lo <= p2 ? Integer(-aK) : bI;
    long sU = lo <= p2 ? 2 : 0;
    total += sum_positive_linear(lo, hi, cU - cL + 1, sU - sL);
  }
  return total;
}

}  // namespace

Integer t3_interval_union(const std::vector<std::pair<Integer, Integer>>& intervals_in) {
  auto intervals = intervals_in;
  std::sort(intervals.begin(), intervals.end());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].first > intervals[i].second) fail(ErrorKind::precondition, "empty interval");
    if (i > 0 && intervals[i].first <= intervals[i - 1].second)
      fail(ErrorKind::precondition, "intervals overlap");
  }
  Integer total = 0;
  for (const auto& I : intervals)
    for (const auto& J : intervals)
      for (const auto& K : intervals) total += triple_count(I, J, K);
  return total;
}

bool varnavides_precondition(std::uint64_t m, const Integer& n) {
  return pow(Integer(static_cast<unsigned long>(2 * m)), 10) <= n;
}

Rational varnavides_lower_bound(const Rational& alpha, const Integer& n, std::uint64_t m, bool enforce) {
  if (m < 1 || m > 32) fail(ErrorKind::out_of_range, "M must lie in [1, 32]");
  if (enforce && !varnavides_precondition(m, n))
    fail(ErrorKind::precondition, "M exceeds N^{1/10}/2 (N = " + to_string(n) + ", M = " + std::to_string(m) + ")");
  unsigned r3 = r3_exhaustive(static_cast<unsigned>(m)).value;
  Rational mm(static_cast<unsigned long>(m));
  return (alpha - Rational(static_cast<unsigned long>(r3 + 2)) / mm) * Rational(n * n) / pow(mm, 4);
}

std::vector<R3Result> r3_table(unsigned n) {
  if (n > 32) fail(ErrorKind::out_of_range, "r3_exhaustive supports N <= 32");
  std::vector<R3Result> out(n + 1);
  for (unsigned len = 1; len <= n; ++len) {
    unsigned target = out[len - 1].value + 1;
    // A set of that size must contain both 1 and len.
    std::uint64_t found = 0;
    auto free_with = [&](std::uint64_t mask, unsigned x) {
      for (unsigned b = 1; b < x; ++b) {
        if (!(mask >> (b - 1) & 1)) continue;
        int a = 2 * static_cast<int>(b) - static_cast<int>(x);
        if (a >= 1 && (mask >> (a - 1) & 1)) return false;
      }
      return true;
    };
    std::function<bool(unsigned, std::uint64_t, unsigned)> dfs = [&](unsigned pos, std::uint64_t mask,
                                                                     unsigned count) -> bool {
      if (count + out[len - pos + 1].value < target) return false;
      if (pos == len) {
        if (count + 1 >= target && free_with(mask, len)) {
          found = mask | std::uint64_t{1} << (len - 1);
          return true;
        }
        return false;
      }
      if (free_with(mask, pos) && dfs(pos + 1, mask | std::uint64_t{1} << (pos - 1), count + 1)) return true;
      return dfs(pos + 1, mask, count);
    };
    bool ok = len == 1 ? (found = 1, true) : dfs(2, 1, 1);
    if (ok) {
      out[len].value = target;
      for (unsigned i = 0; i < len; ++i)
        if (found >> i & 1) out[len].witness.push_back(static_cast<int>(i + 1));
    } else {
      out[len] = out[len - 1];
    }
  }
  out.erase(out.begin());
  return out;
}

R3Result r3_exhaustive(unsigned n) {
  if (n == 0) return {};
  return r3_table(n).back();
}

T3ApproxResult t3_approx_progression(const GSet& a, std::int64_t n, const Rational& epsilon, const SearchConfig& cfg,
                                     std::optional<unsigned> k_override) {
  if (epsilon <= 0 || epsilon >= 1) fail(ErrorKind::precondition, "epsilon must lie in (0, 1)");
  T3ApproxResult out;
  out.corollary = ap_of_almost_periods(a, n, epsilon * epsilon, cfg, k_override);
  const Group& W = out.corollary.working_group;
  out.Q = out.corollary.progression;
  out.P = symmetric_progression(W, out.Q.step, out.Q.radius() / 4);
  GSet aw = rewindow(a, W);
  ConvTable fa = ConvTable::indicator(aw);
  out.t3_set = t3_count(fa);
  out.t3_smoothed = t3_count(convolve(fa, ConvTable::indicator(out.P.as_set())));
  Rational p3 = pow(Rational(static_cast<unsigned long>(out.P.length)), 3);
  out.deviation = abs(Rational(out.t3_smoothed) / p3 - Rational(out.t3_set));
  Rational na(static_cast<unsigned long>(a.size()));
  out.bound = epsilon * na * na;
  out.ok = out.deviation <= out.bound;
  return out;
}

IncrementStep density_increment_step(const GSet& a, std::int64_t n, const IncrementMode& mode,
                                     const SearchConfig& cfg, std::optional<unsigned> k_override) {
  if (a.group().kind() != Group::Kind::integer_window) fail(ErrorKind::precondition, "A must live in an integer window");
  if (mode.delta <= 0 || mode.delta >= 1) fail(ErrorKind::precondition, "delta must lie in (0, 1)");
  if (t3_count(ConvTable::indicator(a)) != static_cast<long>(a.size()))
    fail(ErrorKind::precondition, "A contains a non-trivial three-term progression");
  IncrementStep out;
  out.N = n;
  out.alpha = ratio(a.size(), static_cast<std::uint64_t>(n));
  out.epsilon = mode.c1 * out.alpha;
  out.threshold = out.alpha / mode.delta;
  out.varnavides_ok = varnavides_precondition(mode.M, Integer(static_cast<long>(n)));
  out.approx = t3_approx_progression(a, n, out.epsilon, cfg, k_override);
  out.P = out.approx.P;
  const Group& W = out.P.group;
  GSet aw = rewindow(a, W);
  ConvTable counts = convolve(ConvTable::indicator(aw), ConvTable::indicator(out.P.as_set()));
  Count best = 0;
  for (const auto& [x, c] : counts)
    if (c > best) {
      best = c;
      out.x = x;
    }
  out.x_value = W.to_integer(out.x);
  out.new_density = Rational(static_cast<long>(best)) / static_cast<long>(out.P.length);
  out.passed = out.new_density >= out.threshold;

  // x - P = x + P = {x + (j - r) d}; keep the indices j + 1 that land in A.
  std::vector<std::int64_t> next;
  std::int64_t r = static_cast<std::int64_t>(out.P.radius());
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(out.P.length); ++j) {
    auto y = W.try_mul(out.x, W.power(out.P.step, j - r));
    if (y && aw.contains(*y)) next.push_back(j + 1);
  }
  out.next = GSet::from_integers(Group::integer_window(static_cast<std::int64_t>(out.P.length)), next);
  return out;
}

IncrementRun density_increment_run(const GSet& a0, std::int64_t n0, const IncrementMode& mode, const SearchConfig& cfg,
                                   unsigned max_steps, std::optional<unsigned> k_override) {
  IncrementRun run;
  GSet a = a0;
  std::int64_t n = n0;
  unsigned passed = 0;
  run.stop_reason = "step limit";
  for (unsigned i = 0; i < max_steps; ++i) {
    if (a.size() < 1) {
      run.stop_reason = "empty set";
      break;
    }
    SearchConfig c = cfg;
    c.seed = sub_seed(cfg.seed, 0x1c0 + i);
    try {
      run.steps.push_back(density_increment_step(a, n, mode, c, k_override));
    } catch (const Error& e) {
      run.stop_reason = std::string(to_string(e.kind())) + ": " + e.what();
      break;
    }
    const IncrementStep& st = run.steps.back();
    if (!st.passed) {
      run.stop_reason = "no increment";
      break;
    }
    ++passed;
    if (st.P.length < 3) {
      run.stop_reason = "progression too short";
      break;
    }
    a = st.next;
    n = static_cast<std::int64_t>(st.P.length);
  }
  Rational growth = pow(1 / mode.delta, passed);
  run.iteration_bound_ok = growth <= ratio(static_cast<std::uint64_t>(n0), a0.size());
  return run;
}

}  // namespace aplab
