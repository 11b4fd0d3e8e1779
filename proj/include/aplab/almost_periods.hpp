#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aplab/conv_table.hpp"
#include "aplab/gset.hpp"
#include "aplab/rational.hpp"

namespace aplab {

struct SearchConfig {
  /// 0 selects ceil(20 (2K)^k), capped at attempt_ceiling.
  std::uint64_t max_attempts = 0;
  std::uint64_t attempt_ceiling = 2000;
  Rational target_fraction{1, 2};
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct PeriodCertificate {
  GSet A, B, S;
  Side side = Side::left;
  Rational epsilon;
  unsigned m = 1;
  std::uint64_t k = 0;
  /// |S.A|/|A| (left) or |B.S|/|B| (right), exact.
  Rational K;
  /// Sampled witness; a k-subset of S.A (left) or B.S (right). Empty when trivial.
  GSet C;
  GSet T;
  Rational bound_rhs;
  /// Largest defect over T.T^-1 found during certification.
  Integer max_defect;
  std::uint64_t attempts_used = 0;
  std::uint64_t attempt_limit = 0;
  bool attempt_limit_capped = false;
  std::uint64_t seed = 0;
  Rational target_fraction;
  /// tau |S| / (2K)^k.
  Rational target_size;
  /// k > |A|/2: T is the greedy certified subset of S^-1 (or S).
  bool trivial = false;
  std::vector<std::string> anomalies;
};

/// ceil(8/eps^2) for m = 1, ceil(49m/eps) otherwise.
std::uint64_t sample_size(const Rational& epsilon, unsigned m);

/// sum_x | |A| (1_C*1_B)(x) - k (1_A*1_B)(x) |^{2m}, i.e. k^{2m} times the
/// L^{2m} distance between mu_C*1_B and 1_A*1_B.
Integer scaled_approximation_defect(const GSet& c, const GSet& a, const GSet& b, unsigned m);

bool approximates_l2(const GSet& c, const GSet& a, const GSet& b, std::uint64_t k);
/// lambda = 2 (m|A|/k)^m sum_{x in AB} (3 (1_A*1_B)(x) + m|A|/k)^m.
Rational l2m_lambda(const GSet& a, const GSet& b, std::uint64_t k, unsigned m);
bool approximates_l2m(const GSet& c, const GSet& a, const GSet& b, std::uint64_t k, unsigned m);

struct LambdaCheck {
  Rational lambda;
  /// 2 (m|A|/k)^m (61/20)^m max(||1_A*1_B||_m, 20 m |AB| |A| / k)^m
  Rational stated_bound;
  bool holds = false;
};
LambdaCheck check_lambda_estimate(const GSet& a, const GSet& b, std::uint64_t k, unsigned m);

/// Right side of the certified inequality for the given side.
Rational period_bound(const GSet& a, const GSet& b, const Rational& epsilon, unsigned m, Side side);

PeriodCertificate find_almost_periods(const GSet& a, const GSet& b, const GSet& s, const Rational& epsilon,
                                      unsigned m, Side side, const SearchConfig& cfg);

struct CertificateCheck {
  bool sound = false;        // every t in T.T^-1 meets bound_rhs
  bool consistent = false;   // K, k, bound_rhs, T subset, C size all re-derive
  bool size_target = false;  // |T| (2K)^k >= tau |S| (true for trivial certificates)
  Integer max_defect;
  std::string failure;
  bool ok() const { return sound && consistent && size_target; }
};
/// Recomputes everything from the raw sets in the certificate.
CertificateCheck verify_certificate(const PeriodCertificate& cert, unsigned threads = 1);

/// All t in S, S^-1, {e} and S^-1 S (left) or S S^-1 (right) whose
/// L^p defect is within the certified bound, p = 2m.
GSet brute_force_periods(const GSet& a, const GSet& b, const GSet& s, const Rational& epsilon, unsigned p,
                         Side side);

}  // namespace aplab
