#pragma once

#include <cstdint>
#include <random>

#include "aplab/gset.hpp"

namespace aplab {

std::uint64_t splitmix64(std::uint64_t x);
/// Independent seed for attempt `index` of a run seeded with `master`.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

/// mt19937_64 with a platform-independent unbiased bounded draw (the
/// standard distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi);
  bool coin(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::mt19937_64 engine_;
};

/// Uniform k-subset by a partial Fisher-Yates shuffle over canonical order.
GSet sample_k_subset(const GSet& a, std::size_t k, Rng& rng);

/// Each element of `pool` kept independently with probability num/den.
GSet random_subset(const GSet& pool, std::uint64_t num, std::uint64_t den, Rng& rng);

}  // namespace aplab
