#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "aplab/almost_periods.hpp"
#include "aplab/gset.hpp"
#include "aplab/rational.hpp"

namespace aplab {

/// base, base + step, ..., base + (length - 1) step in an abelian group.
struct Progression {
  Group group;
  Element base;
  Element step;
  std::uint64_t length = 1;
  bool symmetric = false;

  std::vector<Element> elements() const;
  GSet as_set() const;
  /// (length - 1)/2 for symmetric progressions.
  std::uint64_t radius() const { return (length - 1) / 2; }
};

/// {-r d, ..., r d}; throws if the elements leave a window.
Progression symmetric_progression(const Group& g, Element step, std::uint64_t radius);
Progression make_progression(const Group& g, Element base, Element step, std::uint64_t length);
/// Pairwise distinct elements, nonzero step, and the symmetric shape if flagged.
bool is_valid_progression(const Progression& p);
Progression rewindow(const Progression& p, const Group& target);
nlohmann::json to_json(const Progression& p, bool expand = false);

/// delta^{2(k+1)} |S|^2 > K^{3k(k+1)} with delta = |A|/|S| and
/// K = min(|S+S|, |S-S|)/|S|.
struct DensityCheck {
  Rational K;
  Rational delta;
  bool holds = false;
};
DensityCheck lemma_density_condition(const GSet& a, const GSet& s, unsigned k);

struct IteratedDifferenceAp {
  /// Lives in `a.group()` widened enough to hold every 2^j (a - b).
  Progression progression;
  unsigned k = 0;
  DensityCheck density;
  Element a, b;
  /// The colliding tuples (a, x_1..x_k) and (b, y_1..y_k).
  std::vector<Element> x, y;
  /// The step has order below 2^{k+1}+1 and the progression was shortened.
  bool degenerate = false;
  /// Every element checked in kA - kA.
  bool verified = false;
};

/// Symmetric progression of radius 2^k with step a - b (a != b in A) inside
/// kA - kA, from the first collision of (a, x) -> (x_j - 2^j a)_j in
/// lexicographic order. With enforce_density, a failing density condition
/// raises density-too-low; otherwise it is only reported.
IteratedDifferenceAp find_ap_in_iterated_difference(const GSet& a, const GSet& s, unsigned k,
                                                    bool enforce_density = true);

/// The same first collision by streaming every tuple of A^{k+1} through a
/// hash map. Exponential in k; kept as a reference for small inputs.
std::optional<std::pair<std::vector<Element>, std::vector<Element>>> first_collision_streaming(const GSet& a,
                                                                                              unsigned k);

struct DilateReport {
  std::size_t lhs = 0;  // |A - 2^k A|
  Rational K;
  Rational rhs;         // K^{3k} |A|
  bool holds = false;
};
DilateReport verify_dilate_bound(const GSet& a, unsigned k);

struct AlmostPeriodAp {
  /// Symmetric, inside [-N/2, N/2], in `working_group`.
  Progression progression;
  /// Before clipping to [-N/2, N/2].
  Progression unclipped;
  Group working_group;
  PeriodCertificate certificate;
  IteratedDifferenceAp collision;
  Rational alpha;
  Rational delta;
  bool alpha_condition = false;  // alpha >= 4 N^{-delta^2/36}
  unsigned derived_k = 0;
  unsigned k = 0;          // k actually used (derived_k unless overridden)
  unsigned lemma_k = 0;    // summand count used in the collision step
  Rational epsilon;        // delta / k
  Rational K_derived;        // 2/alpha
  std::uint64_t target_length = 0;  // 2 floor(2^{k-1}/k) + 1
  Enclosure length_bound;           // exp((1/14)(delta^2 log N / log(4/alpha))^{1/3})
  Integer max_defect;
  Rational defect_bound;            // delta^2 |A|^3
  bool verified = false;
};

/// A symmetric progression of common almost-periods of 1_A*1_A for A in
/// [N]. A must live in an integer window. k_override replaces the k of the
/// proof (which is 0 for small N); the proof's value is still reported.
AlmostPeriodAp ap_of_almost_periods(const GSet& a, std::int64_t n, const Rational& delta, const SearchConfig& cfg,
                                    std::optional<unsigned> k_override = std::nullopt);

/// floor((delta^2 log N / (36 log(4/alpha)))^{1/3}), certified.
unsigned corollary_k(std::int64_t n, const Rational& alpha, const Rational& delta);

struct SubspaceStep {
  unsigned summands = 0;
  std::size_t sumset_size = 0;
  /// Largest i with span(v_1..v_i) contained in the iterated sumset.
  unsigned contained_dimension = 0;
};
struct SubspaceReport {
  std::vector<Element> basis;  // greedy independent elements of S, canonical order
  std::vector<SubspaceStep> steps;
};
/// Iterated sums S, 2S, ... of a symmetric S in F_p^n and the subspaces they
/// contain.
SubspaceReport generate_subspaces(const GSet& s, unsigned max_summands);

}  // namespace aplab
