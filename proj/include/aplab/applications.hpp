#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aplab/almost_periods.hpp"
#include "aplab/structure_gen.hpp"

namespace aplab {

// ---- product-set structure ------------------------------------------------

struct StructureResult {
  /// T.T^-1 for the certified translate set T.
  GSet S;
  unsigned k = 0;
  GSet S_k;
  /// The verified superset of S^k (or of x S^k).
  GSet container;
  Rational rep_lower_bound;
  /// Smallest representation count over S^k (abc: unused).
  Integer min_representations;
  PeriodCertificate certificate;
  Rational K;
  Rational K_prime;
  Rational epsilon;
  bool symmetric = false;
  bool has_identity = false;
  bool contained = false;
  bool representations_ok = false;
  /// abc only: the squared Cauchy-Schwarz transfer held at every t in S^k.
  bool transfer_ok = true;
  bool ok() const { return symmetric && has_identity && contained && representations_ok && transfer_ok; }
};

/// S with S^k in A^2 A^-2; every element of S^k has >= |A|^3/2K
/// representations a1 a2 a3^-1 a4^-1.
StructureResult core_set_pipeline(const GSet& a, unsigned k, const SearchConfig& cfg);
/// S in D^-1 D with S^k in A B B^-1 A^-1 and >= |A|^2|B|/2K representations,
/// where K = |A|^2|B|/E(A,B).
StructureResult abba_pipeline(const GSet& a, const GSet& b, const GSet& d, unsigned k, const SearchConfig& cfg);
/// S in D D^-1 with x S^k in A1 A2 A3, for x a (1/K)-popular element.
StructureResult abc_pipeline(const GSet& a1, const GSet& a2, const GSet& a3, Element x, const GSet& d, unsigned k,
                             const SearchConfig& cfg);

struct AbStructResult {
  GSet T;
  PeriodCertificate certificate;
  unsigned m = 0;
  Rational K1, K2, K3;
  Enclosure gamma;
  Rational epsilon;
  std::size_t pool_size = 0;  // |(T T^-1)^k|
  std::size_t subsets_tested = 0;
  bool exhaustive = false;
  bool all_found = false;
  std::vector<Element> failing_subset;
  /// n k^{2m} eps^m |B|^m ||F||_m^m  versus  ||F||_m^{2m}/|AB|.
  Rational counting_lhs, counting_rhs;
  bool counting_contradiction = false;
};

/// m = ceil(log 2n), gamma^m = ||1_A*1_B||_m^m/(|AB||B|^m), eps = gamma/(e k^2).
AbStructResult ab_struct_pipeline(const GSet& a, const GSet& b, const GSet& s, unsigned k, unsigned n,
                                  const SearchConfig& cfg, std::size_t random_subsets = 100);

/// Some x with x P inside `target`, scanning x over target.p0^-1.
std::optional<Element> find_left_translate(const GSet& target, const std::vector<Element>& p);

// ---- progressions in sumsets ----------------------------------------------

struct SumsetApResult {
  Progression progression;
  unsigned derived_k = 0;
  unsigned k = 0;
  unsigned lemma_k = 0;
  std::uint64_t target_length = 1;  // 2^{k+1}, or 1 when k < 1
  bool trivial = false;
  bool contained = false;           // every element inside A+B
  bool plunnecke_ok = true;         // small-sumset version: |A+A| <= K1 K2^2 |A|
  Rational K1, K2;
  std::optional<AbStructResult> structure;
  std::optional<IteratedDifferenceAp> collision;
};

/// A, B inside [N] of an integer window.
SumsetApResult ap_in_sumset(const GSet& a, const GSet& b, std::int64_t n, const SearchConfig& cfg,
                            std::optional<unsigned> k_override = std::nullopt);
SumsetApResult ap_in_small_sumset(const GSet& a, const GSet& b, const SearchConfig& cfg,
                                  std::optional<unsigned> k_override = std::nullopt);

/// Longest progression inside X; ties by smallest step (positive for a
/// window, smaller rank of {d, -d} otherwise) then smallest base.
Progression longest_ap_oracle(const GSet& x);

// ---- Roth ------------------------------------------------------------------

struct T3ApproxResult {
  Progression Q;
  Progression P;  // 4P inside Q, P inside [-N/8, N/8]
  AlmostPeriodAp corollary;
  Integer t3_set;        // T3(1_A)
  Integer t3_smoothed;   // T3(1_A * 1_P) = |P|^3 T3(1_A * mu_P)
  Rational deviation;    // |T3(1_A*mu_P) - T3(1_A)|
  Rational bound;        // eps |A|^2
  bool ok = false;
};
T3ApproxResult t3_approx_progression(const GSet& a, std::int64_t n, const Rational& epsilon, const SearchConfig& cfg,
                                     std::optional<unsigned> k_override = std::nullopt);

/// (2M)^10 <= N.
bool varnavides_precondition(std::uint64_t m, const Integer& n);
/// (alpha - (r3(M)+2)/M) M^-4 N^2; throws precondition-violation unless
/// the precondition holds or enforce is false.
Rational varnavides_lower_bound(const Rational& alpha, const Integer& n, std::uint64_t m, bool enforce = true);
/// T3 of the indicator of a union of disjoint closed integer intervals.
Integer t3_interval_union(const std::vector<std::pair<Integer, Integer>>& intervals);

struct R3Result {
  unsigned value = 0;
  std::vector<int> witness;  // subset of [N]
};
/// r3(N) for N <= 32 by branch and bound.
R3Result r3_exhaustive(unsigned n);
/// r3(1..n).
std::vector<R3Result> r3_table(unsigned n);

struct IncrementMode {
  Rational delta{9, 10};
  std::uint64_t M = 10;
  Rational c1{1, 8};
};

struct IncrementStep {
  std::int64_t N = 0;
  Rational alpha;
  Progression P;
  Element x;
  std::int64_t x_value = 0;
  Rational new_density;
  Rational threshold;  // alpha / delta
  bool passed = false;
  Rational epsilon;
  T3ApproxResult approx;
  bool varnavides_ok = false;  // (2M)^10 <= N
  /// The rescaled set, inside [1, |P|] of a fresh window.
  GSet next;
};
IncrementStep density_increment_step(const GSet& a, std::int64_t n, const IncrementMode& mode,
                                     const SearchConfig& cfg, std::optional<unsigned> k_override = std::nullopt);

struct IncrementRun {
  std::vector<IncrementStep> steps;
  std::string stop_reason;
  /// (10/9)^j <= N/|A| for the completed step count j (with delta^-1 in place of 10/9).
  bool iteration_bound_ok = false;
};
IncrementRun density_increment_run(const GSet& a, std::int64_t n, const IncrementMode& mode, const SearchConfig& cfg,
                                   unsigned max_steps, std::optional<unsigned> k_override = std::nullopt);

// ---- strong approximate groups ----------------------------------------------

struct StrongApproxCheck {
  bool is_strong = false;
  Rational K;  // |A| / min_{x in A^2} 1_A*1_A(x)
};
StrongApproxCheck strong_approx_check(const GSet& a, std::optional<Rational> claimed_K = std::nullopt);

struct StrongApproxResult {
  GSet S;
  GSet T;
  GSet C;
  Rational K;
  Rational epsilon;
  std::uint64_t k = 0;
  Rational lambda_hi;
  bool trivial = false;  // k > |A|: greedy certified T, no sampling
  std::uint64_t attempts_used = 0;
  std::uint64_t attempt_limit = 0;
  bool doubling_ok = false;  // |A^2| <= K|A|
  std::size_t max_symmetric_difference = 0;
  bool ok = false;
};
StrongApproxResult strong_approx_periods(const GSet& a, const Rational& epsilon, const SearchConfig& cfg);

GSet nonzero_squares(std::uint64_t p);

}  // namespace aplab
