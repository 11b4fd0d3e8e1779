#include "aplab/moments.hpp"

#include <sstream>

#include "aplab/conv_table.hpp"
#include "aplab/error.hpp"
#include "aplab/parallel.hpp"
#include "aplab/sampling.hpp"

namespace aplab {

namespace {

Integer binom(std::uint64_t n, std::uint64_t r) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, r);
  return out;
}

Integer ui(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

// Integer weights w_j with pmf(j) = w_j / total.
struct Weights {
  std::vector<Integer> w;
  Integer total;
};

Weights hyper_weights(const HypergeomParams& h) {
  Weights out;
  out.total = binom(h.N, h.k);
  out.w.resize(h.k + 1);
  for (std::uint64_t j = 0; j <= h.k; ++j)
    out.w[j] = (j <= h.M && h.k - j <= h.N - h.M) ? Integer(binom(h.M, j) * binom(h.N - h.M, h.k - j)) : Integer(0);
  return out;
}

Weights binom_weights(const BinomialParams& b) {
  Integer a = b.p.get_num(), d = b.p.get_den();
  Weights out;
  out.total = pow(d, b.n);
  out.w.resize(b.n + 1);
  for (std::uint64_t j = 0; j <= b.n; ++j) out.w[j] = binom(b.n, j) * pow(a, j) * pow(Integer(d - a), b.n - j);
  return out;
}

// sum_j w_j (j q - r)^order / (total q^order) with mean r/q.
Rational moment_from(const Weights& w, const Integer& r, const Integer& q, unsigned order) {
  Integer acc = 0;
  for (std::size_t j = 0; j < w.w.size(); ++j) {
    if (w.w[j] == 0) continue;
    acc += w.w[j] * pow(Integer(ui(j) * q - r), order);
  }
  Rational out(acc, w.total * pow(q, order));
  out.canonicalize();
  return out;
}

void check_order(unsigned order) {
  if (order < 2 || order % 2 != 0) fail(ErrorKind::out_of_range, "moment order must be a positive even integer");
}

}  // namespace

void validate(const HypergeomParams& h) {
  if (h.N < 1 || h.M > h.N || h.k > h.N) fail(ErrorKind::out_of_range, "hypergeometric parameters out of range");
}

void validate(const BinomialParams& b) {
  if (b.n < 1 || b.p < 0 || b.p > 1) fail(ErrorKind::out_of_range, "binomial parameters out of range");
}

Rational hypergeom_pmf(const HypergeomParams& h, std::int64_t j) {
  validate(h);
  if (j < 0 || static_cast<std::uint64_t>(j) > h.k) return 0;
  Weights w = hyper_weights(h);
  Rational out(w.w[j], w.total);
  out.canonicalize();
  return out;
}

Rational binomial_pmf(const BinomialParams& b, std::int64_t j) {
  validate(b);
  if (j < 0 || static_cast<std::uint64_t>(j) > b.n) return 0;
  Weights w = binom_weights(b);
  Rational out(w.w[j], w.total);
  out.canonicalize();
  return out;
}

Rational mean(const HypergeomParams& h) {
  validate(h);
  return ratio(h.k * h.M, h.N);
}

Rational mean(const BinomialParams& b) {
  validate(b);
  return Rational(ui(b.n)) * b.p;
}

Rational central_moment_exact(const HypergeomParams& h, unsigned order) {
  validate(h);
  check_order(order);
  return moment_from(hyper_weights(h), ui(h.k) * ui(h.M), ui(h.N), order);
}

Rational central_moment_exact(const BinomialParams& b, unsigned order) {
  validate(b);
  check_order(order);
  return moment_from(binom_weights(b), ui(b.n) * b.p.get_num(), b.p.get_den(), order);
}

Rational hyper_moment_bound(const HypergeomParams& h, unsigned m) {
  validate(h);
  if (m < 1) fail(ErrorKind::out_of_range, "m must be >= 1");
  Rational mm(static_cast<unsigned long>(m));
  return 2 * pow(3 * mm * mean(h) + mm * mm, m);
}

Rational binom_moment_bound(const BinomialParams& b, unsigned m) {
  validate(b);
  if (m < 1) fail(ErrorKind::out_of_range, "m must be >= 1");
  Rational mm(static_cast<unsigned long>(m));
  return 2 * pow(3 * mm * mean(b) + mm * mm, m);
}

Rational binom_tail_exact(const BinomialParams& b, const Rational& t, Tail tail) {
  validate(b);
  if (t < 0) fail(ErrorKind::out_of_range, "t must be >= 0");
  Weights w = binom_weights(b);
  Rational mu = mean(b);
  Integer acc = 0;
  for (std::uint64_t j = 0; j <= b.n; ++j) {
    Rational x(ui(j));
    bool in = tail == Tail::lower ? x <= mu - t : x >= mu + t;
    if (in) acc += w.w[j];
  }
  Rational out(acc, w.total);
  out.canonicalize();
  return out;
}

Rational binom_deviation(const BinomialParams& b, const Rational& t, Tail tail) {
  validate(b);
  if (t < 0) fail(ErrorKind::out_of_range, "t must be >= 0");
  if (t == 0) return 1;
  Rational np = mean(b);
  Rational denom = tail == Tail::lower ? Rational(2 * np) : Rational(2 * (np + t / 3));
  if (denom == 0) return 0;
  return round_up(exp_enclosure(-(t * t) / denom).hi, 64);
}

bool gamma_bound_holds(unsigned m) {
  if (m < 1) fail(ErrorKind::out_of_range, "m must be >= 1");
  Integer fact = 1;
  for (unsigned i = 2; i <= m; ++i) fact *= i;
  return Rational(fact) <= 2 * pow(Rational(3L * m, 5), m);
}

GridReport moments_grid(std::uint64_t n_max, unsigned m_max, unsigned threads) {
  if (n_max < 1 || m_max < 1) fail(ErrorKind::out_of_range, "grid bounds must be positive");
  std::vector<std::vector<GridRow>> hyper(n_max);
  parallel_for(n_max, threads, [&](std::size_t idx) {
    std::uint64_t N = idx + 1;
    auto& rows = hyper[idx];
    for (std::uint64_t M = 0; M <= N; ++M)
      for (std::uint64_t k = 0; k <= N; ++k) {
        HypergeomParams h{N, M, k};
        BinomialParams bp{std::max<std::uint64_t>(k, 1), ratio(M, N)};
        std::ostringstream name;
        name << "N=" << N << " M=" << M << " k=" << k;
        for (unsigned m = 1; m <= m_max; ++m) {
          Rational mom = central_moment_exact(h, 2 * m);
          rows.push_back({"hyper-moment", name.str(), m, mom, hyper_moment_bound(h, m)});
          // k = 0 is constant; compare against a point mass.
          Rational bin = k == 0 ? Rational(0) : central_moment_exact(bp, 2 * m);
          rows.push_back({"hoeffding", name.str(), m, mom, bin});
        }
      }
  });

  GridReport out;
  for (auto& rows : hyper)
    for (auto& r : rows) out.rows.push_back(std::move(r));

  std::uint64_t n_bin = std::min<std::uint64_t>(n_max, 30);
  for (std::uint64_t n = 1; n <= n_bin; ++n)
    for (Rational p : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      BinomialParams b{n, p};
      std::ostringstream name;
      name << "n=" << n << " p=" << to_string(p);
      for (unsigned m = 1; m <= m_max; ++m)
        out.rows.push_back({"binom-moment", name.str(), m, central_moment_exact(b, 2 * m), binom_moment_bound(b, m)});
      for (std::uint64_t t = 1; t <= n; ++t) {
        Rational tt(ui(t));
        out.rows.push_back({"tail-lower", name.str(), static_cast<unsigned>(t), binom_tail_exact(b, tt, Tail::lower),
                            binom_deviation(b, tt, Tail::lower)});
        out.rows.push_back({"tail-upper", name.str(), static_cast<unsigned>(t), binom_tail_exact(b, tt, Tail::upper),
                            binom_deviation(b, tt, Tail::upper)});
      }
    }
  for (unsigned m = 1; m <= 20; ++m) {
    Integer fact = 1;
    for (unsigned i = 2; i <= m; ++i) fact *= i;
    out.rows.push_back({"gamma", "m=" + std::to_string(m), m, Rational(fact), 2 * pow(Rational(3L * m, 5), m)});
  }
  for (const auto& r : out.rows)
    if (!r.pass()) ++out.failures;
  return out;
}

std::string grid_csv(const GridReport& r) {
  std::ostringstream os;
  os << "check,params,m,value,bound,margin,pass\n";
  for (const auto& row : r.rows)
    os << row.check << ',' << row.params << ',' << row.m << ',' << to_string(row.value) << ','
       << to_string(row.bound) << ',' << to_string(row.margin()) << ',' << (row.pass() ? "true" : "false") << '\n';
  return os.str();
}

std::vector<std::uint64_t> sampled_convolution_histogram(const GSet& a, const GSet& b, Element x, std::size_t k,
                                                         std::size_t draws, std::uint64_t seed) {
  require_same_group(a, b);
  std::vector<std::uint64_t> hist(k + 1, 0);
  for (std::size_t i = 0; i < draws; ++i) {
    Rng rng(sub_seed(seed, i));
    GSet c = sample_k_subset(a, k, rng);
    ConvTable f = convolve_sets({c, b});
    ++hist[static_cast<std::size_t>(f.at(x))];
  }
  return hist;
}

}  // namespace aplab
