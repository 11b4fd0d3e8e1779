#include <algorithm>

#include "aplab/applications.hpp"
#include "aplab/error.hpp"
#include "aplab/sampling.hpp"

namespace aplab {

StrongApproxCheck strong_approx_check(const GSet& a_in, std::optional<Rational> claimed_K) {
  if (a_in.empty()) fail(ErrorKind::precondition, "A is empty");
  GSet a = rewindow(a_in, scale_windows(a_in.group(), 2));
  ConvTable f = convolve_sets({a, a});
  Count least = f.entries().front().count;
  for (const auto& e : f) least = std::min(least, e.count);
  StrongApproxCheck out;
  out.K = ratio(a.size(), static_cast<std::uint64_t>(least));
  out.is_strong = !claimed_K || out.K <= *claimed_K;
  return out;
}

GSet nonzero_squares(std::uint64_t p) {
  if (p < 3) fail(ErrorKind::out_of_range, "p must be an odd prime");
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) fail(ErrorKind::out_of_range, "p must be prime");
  Group g = Group::cyclic(p);
  std::vector<Element> out;
  for (std::uint64_t x = 1; x < p; ++x) out.push_back(Element{x * x % p});
  return GSet(g, std::move(out));
}

StrongApproxResult strong_approx_periods(const GSet& a_in, const Rational& epsilon, const SearchConfig& cfg) {
  if (epsilon <= 0 || epsilon >= 1) fail(ErrorKind::precondition, "epsilon must lie in (0, 1)");
  StrongApproxResult out;
  out.epsilon = epsilon;
  out.K = strong_approx_check(a_in).K;
  const Group W = scale_windows(a_in.group(), 4);
  GSet a = rewindow(a_in, W);
  GSet a2 = product_set(a, a);
  GSet ainv = inverse_set(a);
  Rational na(static_cast<unsigned long>(a.size())), na2(static_cast<unsigned long>(a2.size()));
  out.doubling_ok = na2 <= out.K * na;

  Rational K2 = out.K * out.K;
  out.k = certified_ceil([&](unsigned bits) {
            return Enclosure::exact(K2 / 2) * log_enclosure(8 / epsilon, bits);
          }).get_ui();
  out.lambda_hi = round_up(4 * exp_enclosure(-2 * Rational(static_cast<unsigned long>(out.k)) / K2).hi, 48);

  auto sym_diff = [&](Element t) { return symmetric_difference_size(translate(t, a2, Side::left), a2); };
  Rational eps_limit = epsilon * na2;

  if (out.k > a.size()) {
    out.trivial = true;
    std::vector<Element> chosen;
    for (Element t : ainv) {
      bool ok = true;
      for (Element u : chosen)
        if (Rational(static_cast<unsigned long>(sym_diff(W.mul(t, W.inverse(u))))) > eps_limit) {
          ok = false;
          break;
        }
      if (ok) chosen.push_back(t);
    }
    out.T = GSet(W, chosen);
  } else {
    Rational two_k_pow = pow(2 * out.K, out.k);
    Rational target = cfg.target_fraction * na / two_k_pow;
    if (cfg.max_attempts > 0) {
      out.attempt_limit = cfg.max_attempts;
    } else {
      Integer lim = ceil(20 * two_k_pow);
      out.attempt_limit = lim > cfg.attempt_ceiling ? cfg.attempt_ceiling : lim.get_ui();
    }
    Rational limit = out.lambda_hi * na2;
    for (std::uint64_t i = 0; i < out.attempt_limit; ++i) {
      ++out.attempts_used;
      Rng rng(sub_seed(cfg.seed, i));
      GSet c = sample_k_subset(a2, out.k, rng);
      GSet ca = product_set(c, a);
      std::vector<Element> t;
      for (Element x : ainv)
        if (Rational(static_cast<unsigned long>(symmetric_difference_size(a2, translate(x, ca, Side::left)))) <= limit)
          t.push_back(x);
      if (Rational(static_cast<unsigned long>(t.size())) >= target && !t.empty()) {
        out.C = c;
        out.T = GSet(W, t);
        break;
      }
    }
    if (out.T.empty())
      fail(ErrorKind::attempts_exhausted,
           "no sample reached the size target in " + std::to_string(out.attempt_limit) + " attempts");
  }

  out.S = product_set(out.T, inverse_set(out.T));
  bool within = true;
  for (Element t : out.S) {
    std::size_t d = sym_diff(t);
    out.max_symmetric_difference = std::max(out.max_symmetric_difference, d);
    if (Rational(static_cast<unsigned long>(d)) > eps_limit) within = false;
  }
  out.ok = within && is_symmetric(out.S) && is_subset(out.S, product_set(ainv, a));
  return out;
}

}  // namespace aplab
