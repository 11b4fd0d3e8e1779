#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aplab/gset.hpp"
#include "aplab/rational.hpp"

namespace aplab {

/// k draws without replacement from N objects, M of them marked.
struct HypergeomParams {
  std::uint64_t N = 1;
  std::uint64_t M = 0;
  std::uint64_t k = 0;
};

struct BinomialParams {
  std::uint64_t n = 1;
  Rational p;
};

enum class Tail { lower, upper };

void validate(const HypergeomParams& h);
void validate(const BinomialParams& b);

Rational hypergeom_pmf(const HypergeomParams& h, std::int64_t j);
Rational binomial_pmf(const BinomialParams& b, std::int64_t j);
Rational mean(const HypergeomParams& h);
Rational mean(const BinomialParams& b);

/// E (X - mean)^order for even order >= 2.
Rational central_moment_exact(const HypergeomParams& h, unsigned order);
Rational central_moment_exact(const BinomialParams& b, unsigned order);

/// 2 (3m kM/N + m^2)^m
Rational hyper_moment_bound(const HypergeomParams& h, unsigned m);
/// 2 (3m np + m^2)^m
Rational binom_moment_bound(const BinomialParams& b, unsigned m);

/// P(X <= np - t) or P(X >= np + t), exact.
Rational binom_tail_exact(const BinomialParams& b, const Rational& t, Tail tail);
/// Upper enclosure of exp(-t^2/2np) (lower) or exp(-t^2/(2(np + t/3))) (upper).
Rational binom_deviation(const BinomialParams& b, const Rational& t, Tail tail);

/// m! <= 2 (3m/5)^m
bool gamma_bound_holds(unsigned m);

struct GridRow {
  std::string check;   // hyper-moment, binom-moment, hoeffding, tail-lower, tail-upper, gamma
  std::string params;  // e.g. "N=20 M=10 k=6"
  unsigned m = 0;      // moment index, or t for tails
  Rational value;
  Rational bound;
  Rational margin() const { return bound - value; }
  bool pass() const { return value <= bound; }
};

struct GridReport {
  std::vector<GridRow> rows;
  std::size_t failures = 0;
  bool ok() const { return failures == 0; }
};

/// Hypergeometric moments against their bound and against the binomial
/// with n = k, p = M/N for every N <= n_max, all M, k and m <= m_max;
/// binomial moments and both tails for n <= min(n_max, 30),
/// p in {1/4, 1/2, 3/4}, t = 1..n; the factorial bound for m <= 20.
GridReport moments_grid(std::uint64_t n_max, unsigned m_max, unsigned threads = 1);
std::string grid_csv(const GridReport& r);

/// Histogram over `draws` seeded k-subsets C of A of the value 1_C*1_B(x).
std::vector<std::uint64_t> sampled_convolution_histogram(const GSet& a, const GSet& b, Element x, std::size_t k,
                                                         std::size_t draws, std::uint64_t seed);

}  // namespace aplab
