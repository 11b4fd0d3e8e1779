#include <gtest/gtest.h>

#include <cmath>

#include "aplab/almost_periods.hpp"
#include "aplab/conv_table.hpp"
#include "aplab/error.hpp"
#include "oracles.hpp"

using namespace aplab;

namespace {

// every k-subset of A, by index masks
std::vector<GSet> all_subsets(const GSet& a, std::size_t k) {
  std::vector<GSet> out;
  std::size_t n = a.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<Element> e;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) e.push_back(a[i]);
    out.emplace_back(a.group(), e);
  }
  return out;
}

}  // namespace

TEST(Sampling, SubsetEdges) {
  Group g = Group::cyclic(20);
  GSet a = GSet::interval(g, 3, 11);
  Rng rng(1);
  EXPECT_EQ(sample_k_subset(a, a.size(), rng), a);
  GSet one = sample_k_subset(a, 1, rng);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(a.contains(one[0]));
}

TEST(Sampling, InclusionFrequency) {
  Group g = Group::cyclic(40);
  GSet a = GSet::interval(g, 0, 29);
  const std::size_t k = 7, draws = 10000;
  Rng rng(2024);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < draws; ++i)
    if (sample_k_subset(a, k, rng).contains(Element{13})) ++hits;
  double p = static_cast<double>(k) / a.size();
  double sd = std::sqrt(draws * p * (1 - p));
  EXPECT_LE(std::fabs(hits - draws * p), 5 * sd);
}

TEST(Sampling, SeedsAreReproducible) {
  Group g = Group::symmetric(4);
  GSet a = GSet::whole(g);
  Rng r1(sub_seed(9, 3)), r2(sub_seed(9, 3));
  EXPECT_EQ(sample_k_subset(a, 10, r1), sample_k_subset(a, 10, r2));
  EXPECT_NE(sub_seed(9, 3), sub_seed(9, 4));
}

TEST(Approximation, FullSampleIsExact) {
  Group g = Group::dihedral(6);
  Rng rng(4);
  GSet a = oracle::random_set(g, 1, 2, rng), b = oracle::random_set(g, 1, 2, rng);
  EXPECT_EQ(scaled_approximation_defect(a, a, b, 1), 0);
  EXPECT_TRUE(approximates_l2(a, a, b, a.size()));
  EXPECT_TRUE(approximates_l2m(a, a, b, a.size(), 2));
  EXPECT_GT(l2m_lambda(a, b, a.size(), 2), 0);
}

TEST(Approximation, MeanSquareOverAllSamples) {
  Rng rng(5);
  for (const char* spec : {"Z%16", "S:3", "D:5"}) {
    Group g = Group::parse(spec);
    GSet a = oracle::random_set(g, 2, 3, rng);
    while (a.size() > 12) a = GSet(g, std::vector<Element>(a.begin(), a.begin() + 12));
    GSet b = oracle::random_set(g, 1, 2, rng);
    for (std::size_t k : {std::size_t{1}, std::size_t{3}, a.size() / 2}) {
      auto subsets = all_subsets(a, k);
      Integer total = 0;
      for (const auto& c : subsets) total += scaled_approximation_defect(c, a, b, 1);
      // scaled defect is k^2 |mu_C*1_B - 1_A*1_B|^2, so the mean bound is k |A|^2 |B|
      Rational mean = Rational(total) / Rational(static_cast<unsigned long>(subsets.size()));
      Rational bound = Rational(static_cast<unsigned long>(k * a.size() * a.size() * b.size()));
      EXPECT_LE(mean, bound) << spec << " k=" << k;
    }
  }
}

TEST(Approximation, PassProbabilityAtLeastHalf) {
  Rng rng(6);
  Group g = Group::cyclic(48);
  GSet a = oracle::random_set(g, 1, 2, rng), b = oracle::random_set(g, 1, 2, rng);
  for (unsigned m : {1u, 2u}) {
    std::uint64_t k = m == 1 ? sample_size(make_rational(9, 10), 1) : 12;
    int pass = 0;
    for (int i = 0; i < 200; ++i) {
      GSet c = sample_k_subset(a, std::min<std::size_t>(k, a.size()), rng);
      bool ok = m == 1 ? approximates_l2(c, a, b, c.size()) : approximates_l2m(c, a, b, c.size(), m);
      if (ok) ++pass;
    }
    EXPECT_GE(pass, 100) << "m=" << m;
  }
}

TEST(Approximation, LambdaEstimate) {
  Rng rng(8);
  Group g = Group::cyclic(30);
  GSet a = oracle::random_set(g, 1, 2, rng), b = oracle::random_set(g, 1, 2, rng);
  auto chk = check_lambda_estimate(a, b, 10, 2);
  EXPECT_EQ(chk.lambda, l2m_lambda(a, b, 10, 2));
  EXPECT_TRUE(chk.holds);
}

TEST(SampleSize, Formula) {
  EXPECT_EQ(sample_size(make_rational(1, 2), 1), 32u);
  EXPECT_EQ(sample_size(make_rational(19, 20), 1), 9u);
  EXPECT_EQ(sample_size(make_rational(1, 2), 2), 196u);
  EXPECT_EQ(sample_size(make_rational(7, 10), 3), 210u);
}

TEST(AlmostPeriods, SubgroupHasExactPeriods) {
  Group g = Group::cyclic(64);
  GSet h = GSet::from_integers(g, {0, 8, 16, 24, 32, 40, 48, 56});
  SearchConfig cfg;
  auto cert = find_almost_periods(h, h, h, make_rational(1, 2), 1, Side::left, cfg);
  EXPECT_EQ(cert.T, inverse_set(h));
  EXPECT_EQ(cert.max_defect, 0);
  EXPECT_TRUE(verify_certificate(cert).ok());
}

TEST(AlmostPeriods, DenseIntervalBruteForce) {
  Group w = Group::integer_window(40);
  Rng rng(12);
  GSet n20 = GSet::interval(w, 1, 20);
  GSet a = random_subset(n20, 1, 2, rng);
  SearchConfig cfg;
  cfg.seed = 12;
  auto cert = find_almost_periods(a, a, n20, make_rational(1, 2), 1, Side::left, cfg);
  auto check = verify_certificate(cert);
  EXPECT_TRUE(check.ok()) << check.failure;
  GSet tt = difference_set(cert.T, cert.T);
  auto f = convolve_sets({a, a});
  Rational bound = make_rational(1, 4) * pow(Rational(static_cast<unsigned long>(a.size())), 3);
  for (Element t : tt) EXPECT_LE(Rational(translation_defect(f, t, Side::left, 2).value), bound);
}

TEST(AlmostPeriods, BruteForceContainsCertifiedSet) {
  Rng rng(13);
  int checked = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const char* spec = rep % 3 == 0 ? "S:3" : rep % 3 == 1 ? "Z%24" : "D:4";
    Group g = Group::parse(spec);
    GSet a = oracle::random_set(g, 2, 3, rng), b = oracle::random_set(g, 1, 2, rng);
    GSet s = oracle::random_set(g, 1, 2, rng);
    Side side = rep % 2 ? Side::left : Side::right;
    SearchConfig cfg;
    cfg.seed = rep;
    Rational eps = make_rational(9, 10);
    PeriodCertificate cert;
    try {
      cert = find_almost_periods(a, b, s, eps, 1, side, cfg);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::attempts_exhausted);
      continue;
    }
    ++checked;
    GSet tt = product_set(cert.T, inverse_set(cert.T));
    GSet all = brute_force_periods(a, b, s, eps, 2, side);
    EXPECT_TRUE(all.contains(g.identity()));
    EXPECT_TRUE(is_subset(tt, all)) << spec << " rep " << rep;
    EXPECT_TRUE(verify_certificate(cert).ok());
  }
  EXPECT_GT(checked, 25);
}

TEST(AlmostPeriods, BruteForceSubgroup) {
  Group g = Group::symmetric(3);
  GSet h(g, {g.identity(), g.from_permutation(std::vector<int>{2, 3, 1}), g.from_permutation(std::vector<int>{3, 1, 2})});
  GSet found = brute_force_periods(h, h, h, make_rational(1, 10), 2, Side::left);
  EXPECT_TRUE(is_subset(h, found));
}

TEST(AlmostPeriods, PreconditionsRejected) {
  Group g = Group::cyclic(10);
  GSet a = GSet::interval(g, 0, 4);
  SearchConfig cfg;
  EXPECT_THROW(find_almost_periods(a, a, a, 1, 1, Side::left, cfg), Error);
  EXPECT_THROW(find_almost_periods(a, a, GSet(g), make_rational(1, 2), 1, Side::left, cfg), Error);
  EXPECT_THROW(find_almost_periods(a, GSet::whole(Group::cyclic(11)), a, make_rational(1, 2), 1, Side::left, cfg),
               Error);
}

TEST(AlmostPeriods, TamperedCertificateRejected) {
  Group g = Group::cyclic(32);
  GSet h = GSet::from_integers(g, {0, 4, 8, 12, 16, 20, 24, 28});
  GSet a = set_minus(h, GSet::from_integers(g, {4}));
  SearchConfig cfg;
  cfg.seed = 3;
  auto cert = find_almost_periods(a, a, h, make_rational(19, 20), 1, Side::left, cfg);
  ASSERT_TRUE(verify_certificate(cert).ok());
  auto bad = cert;
  bad.T = set_union(bad.T, GSet::from_integers(g, {1}));
  EXPECT_FALSE(verify_certificate(bad).ok());
  bad = cert;
  bad.K += 1;
  EXPECT_FALSE(verify_certificate(bad).consistent);
}
