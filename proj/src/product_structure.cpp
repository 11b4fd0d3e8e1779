#include <algorithm>

#include "aplab/applications.hpp"
#include "aplab/error.hpp"
#include "aplab/sampling.hpp"

namespace aplab {

namespace {

Rational size_of(std::size_t n) { return Rational(static_cast<unsigned long>(n)); }

// A dyadic lower bound for 1/(k sqrt K), kept strictly below 1.
Rational inverse_root_epsilon(const Rational& K, unsigned k) {
  Rational e = round_down(root_enclosure(1 / (K * k * k), 2).lo, 48);
  if (e >= 1) e = Rational(1023, 1024);
  if (e <= 0) fail(ErrorKind::precondition, "epsilon underflow");
  return e;
}

GSet lift(const GSet& s, const Group& w) { return rewindow(s, w); }

GSet product_of(const std::vector<GSet>& sets) {
  GSet acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) acc = product_set(acc, sets[i]);
  return acc;
}

// S = T T^-1, S^k, the container, and the representation counts through
// the convolution of `factors`.
void finish_structure(StructureResult& out, const std::vector<GSet>& factors) {
  const GSet& T = out.certificate.T;
  out.S = product_set(T, inverse_set(T));
  out.symmetric = is_symmetric(out.S);
  out.has_identity = out.S.contains(out.S.group().identity());
  out.S_k = iterated_product(out.S, out.k);
  out.container = product_of(factors);
  out.contained = is_subset(out.S_k, out.container);
  ConvTable reps = convolve_sets(factors);
  TableLookup at(reps);
  bool first = true;
  for (Element t : out.S_k) {
    Integer v(static_cast<long>(at(t)));
    if (first || v < out.min_representations) out.min_representations = v;
    first = false;
  }
  out.representations_ok = Rational(out.min_representations) >= out.rep_lower_bound;
}

void require_nonempty(std::initializer_list<const GSet*> sets) {
  for (const GSet* s : sets)
    if (s->empty()) fail(ErrorKind::precondition, "sets must be non-empty");
}

}  // namespace

StructureResult core_set_pipeline(const GSet& a_in, unsigned k, const SearchConfig& cfg) {
  if (k < 1) fail(ErrorKind::out_of_range, "k must be >= 1");
  require_nonempty({&a_in});
  const Group W = scale_windows(a_in.group(), 4 * static_cast<std::int64_t>(k) + 4);
  GSet a = lift(a_in, W);
  StructureResult out;
  out.k = k;
  out.K = ratio(product_set(a, a).size(), a.size());
  out.K_prime = out.K;
  out.epsilon = inverse_root_epsilon(out.K, k);
  Rational na = size_of(a.size());
  out.rep_lower_bound = na * na * na / (2 * out.K);
  out.certificate = find_almost_periods(a, a, a, out.epsilon, 1, Side::left, cfg);
  GSet ai = inverse_set(a);
  finish_structure(out, {a, a, ai, ai});
  return out;
}

StructureResult abba_pipeline(const GSet& a_in, const GSet& b_in, const GSet& d_in, unsigned k,
                              const SearchConfig& cfg) {
  if (k < 1) fail(ErrorKind::out_of_range, "k must be >= 1");
  require_same_group(a_in, b_in);
  require_same_group(a_in, d_in);
  require_nonempty({&a_in, &b_in, &d_in});
  const Group W = scale_windows(a_in.group(), 4 * static_cast<std::int64_t>(k) + 4);
  GSet a = lift(a_in, W), b = lift(b_in, W), d = lift(d_in, W);
  StructureResult out;
  out.k = k;
  Rational na = size_of(a.size()), nb = size_of(b.size());
  out.K = na * na * nb / Rational(energy(a, b));
  out.K_prime = ratio(product_set(d, a).size(), a.size());
  out.epsilon = inverse_root_epsilon(out.K, k);
  out.rep_lower_bound = na * na * nb / (2 * out.K);
  out.certificate = find_almost_periods(a, b, d, out.epsilon, 1, Side::left, cfg);
  finish_structure(out, {a, b, inverse_set(b), inverse_set(a)});
  return out;
}

StructureResult abc_pipeline(const GSet& a1_in, const GSet& a2_in, const GSet& a3_in, Element x, const GSet& d_in,
                             unsigned k, const SearchConfig& cfg) {
  if (k < 1) fail(ErrorKind::out_of_range, "k must be >= 1");
  require_same_group(a1_in, a2_in);
  require_same_group(a1_in, a3_in);
  require_same_group(a1_in, d_in);
  require_nonempty({&a1_in, &a2_in, &a3_in, &d_in});
  a1_in.group().check(x);
  const Group W = scale_windows(a1_in.group(), 2 * static_cast<std::int64_t>(k) + 4);
  GSet a1 = lift(a1_in, W), a2 = lift(a2_in, W), a3 = lift(a3_in, W), d = lift(d_in, W);
  Element xw = W.decode(a1_in.group().encode(x));

  ConvTable h = convolve_sets({a1, a2, a3});
  TableLookup at(h);
  Integer v(static_cast<long>(at(xw)));
  if (v == 0) fail(ErrorKind::not_popular, "x is not in A1 A2 A3");

  StructureResult out;
  out.k = k;
  Rational n1 = size_of(a1.size()), n2 = size_of(a2.size()), n3 = size_of(a3.size());
  // K = (|A1||A2|)^{1/2} |A3| / h(x); the upper endpoint keeps every bound sound.
  out.K = round_up(root_enclosure(n1 * n2, 2).hi * n3 / Rational(v), 48);
  if (!is_gamma_popular(a1, a2, a3, xw, 1 / out.K))
    fail(ErrorKind::not_popular, "x fails the popularity check");
  out.K_prime = ratio(product_set(a3, d).size(), a3.size());
  out.epsilon = 1 / (2 * static_cast<long>(k) * out.K);
  out.rep_lower_bound = Rational(v) / 2;
  out.certificate = find_almost_periods(a2, a3, d, out.epsilon, 1, Side::right, cfg);

  const GSet& T = out.certificate.T;
  out.S = product_set(T, inverse_set(T));
  out.symmetric = is_symmetric(out.S);
  out.has_identity = out.S.contains(W.identity());
  out.S_k = iterated_product(out.S, k);
  out.container = product_set(product_set(a1, a2), a3);
  GSet shifted = translate(xw, out.S_k, Side::left);
  out.contained = is_subset(shifted, out.container);
  Rational rhs = n1 * n2 * n3 * n3 / (4 * out.K * out.K);
  bool first = true;
  for (Element y : shifted) {
    Integer hy(static_cast<long>(at(y)));
    Rational diff = Rational(hy - v);
    if (diff * diff > rhs) out.transfer_ok = false;
    if (first || hy < out.min_representations) out.min_representations = hy;
    first = false;
  }
  out.representations_ok = Rational(out.min_representations) >= out.rep_lower_bound;
  return out;
}

std::optional<Element> find_left_translate(const GSet& target, const std::vector<Element>& p) {
  const Group& g = target.group();
  if (p.empty()) return g.identity();
  Element p0inv = g.inverse(p.front());
  for (Element y : target) {
    auto x = g.try_mul(y, p0inv);
    if (!x) continue;
    bool all = true;
    for (Element t : p) {
      auto z = g.try_mul(*x, t);
      if (!z || !target.contains(*z)) {
        all = false;
        break;
      }
    }
    if (all) return *x;
  }
  return std::nullopt;
}

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t r, std::uint64_t cap) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  Integer acc = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    acc *= static_cast<unsigned long>(n - i);
    acc /= static_cast<unsigned long>(i + 1);
    if (acc > cap) return cap + 1;
  }
  return acc.get_ui();
}

}  // namespace

AbStructResult ab_struct_pipeline(const GSet& a_in, const GSet& b_in, const GSet& s_in, unsigned k, unsigned n,
                                  const SearchConfig& cfg, std::size_t random_subsets) {
  if (k < 1) fail(ErrorKind::out_of_range, "k must be >= 1");
  if (n < 2) fail(ErrorKind::out_of_range, "n must be >= 2");
  require_same_group(a_in, b_in);
  require_same_group(a_in, s_in);
  require_nonempty({&a_in, &b_in, &s_in});
  const Group W = scale_windows(a_in.group(), 2 * static_cast<std::int64_t>(k) + 4);
  GSet a = lift(a_in, W), b = lift(b_in, W), s = lift(s_in, W);

  AbStructResult out;
  out.m = static_cast<unsigned>(
      certified_ceil([&](unsigned bits) { return log_enclosure(Rational(2L * n), bits); }).get_ui());
  Rational na = size_of(a.size()), nb = size_of(b.size());
  ConvTable f = convolve_sets({a, b});
  GSet ab = f.support();
  Rational nab = size_of(ab.size());
  out.K1 = na * nb * nb / Rational(energy(a, b));
  out.K2 = nab / na;
  out.K3 = ratio(product_set(b, s).size(), b.size());
  Integer normm = lp_norm_pow(f, out.m).value;
  Rational gm = Rational(normm) / (nab * pow(nb, out.m));
  out.gamma = root_enclosure(gm, out.m);
  Rational e_hi = exp_enclosure(Rational(1)).hi;
  out.epsilon = round_down(out.gamma.lo / (e_hi * k * k), 48);
  if (out.epsilon <= 0) fail(ErrorKind::precondition, "epsilon underflow");

  out.certificate = find_almost_periods(a, b, s, out.epsilon, out.m, Side::right, cfg);
  out.T = out.certificate.T;

  Rational kk = pow(Rational(static_cast<long>(k)), 2 * out.m);
  out.counting_lhs = Rational(static_cast<long>(n)) * kk * pow(out.epsilon, out.m) * pow(nb, out.m) * Rational(normm);
  out.counting_rhs = Rational(normm * normm) / nab;
  out.counting_contradiction = out.counting_lhs < out.counting_rhs;

  GSet diff = product_set(out.T, inverse_set(out.T));
  GSet pool = iterated_product(diff, k);
  out.pool_size = pool.size();
  std::vector<std::vector<Element>> subsets;
  if (pool.size() <= n) {
    subsets.push_back(pool.elements());
    out.exhaustive = true;
  } else if (binomial_capped(pool.size(), n, 2000) <= 2000) {
    out.exhaustive = true;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    while (true) {
      std::vector<Element> p;
      for (auto i : idx) p.push_back(pool[i]);
      subsets.push_back(std::move(p));
      std::size_t pos = n;
      while (pos > 0 && idx[pos - 1] == pool.size() - n + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
  } else {
    Rng rng(sub_seed(cfg.seed, 0x5eed));
    for (std::size_t r = 0; r < random_subsets; ++r) {
      subsets.push_back(sample_k_subset(pool, n, rng).elements());
    }
  }
  out.all_found = true;
  for (const auto& p : subsets) {
    ++out.subsets_tested;
    if (!find_left_translate(ab, p)) {
      out.all_found = false;
      out.failing_subset = p;
      break;
    }
  }
  return out;
}

}  // namespace aplab
