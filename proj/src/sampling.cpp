#include "aplab/sampling.hpp"

#include <algorithm>

#include "aplab/error.hpp"

namespace aplab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorKind::out_of_range, "empty sampling range");
  // rejection on the top partial bucket
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  while (true) {
    std::uint64_t x = engine_();
    if (x <= limit) return x % bound;
  }
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(below(span));
}

GSet sample_k_subset(const GSet& a, std::size_t k, Rng& rng) {
  if (k < 1 || k > a.size())
    fail(ErrorKind::out_of_range, "sample size " + std::to_string(k) + " outside [1, " + std::to_string(a.size()) + "]");
  std::vector<Element> pool(a.begin(), a.end());
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return make_sorted(a.group(), std::move(pool));
}

GSet random_subset(const GSet& pool, std::uint64_t num, std::uint64_t den, Rng& rng) {
  std::vector<Element> out;
  for (Element e : pool)
    if (rng.coin(num, den)) out.push_back(e);
  return make_sorted(pool.group(), std::move(out));
}

}  // namespace aplab
