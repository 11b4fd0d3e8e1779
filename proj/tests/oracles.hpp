#pragma once

// Brute-force reference computations used only by the tests. None of these
// call into the convolution or search code they are checking.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "aplab/gset.hpp"
#include "aplab/rational.hpp"
#include "aplab/sampling.hpp"

namespace oracle {

using aplab::Element;
using aplab::Group;
using aplab::GSet;

inline std::vector<Element> all_elements(const Group& g) {
  std::vector<Element> out;
  for (std::uint64_t r = 0; r < g.order(); ++r) out.push_back(Element{r});
  return out;
}

// number of tuples (a_1..a_n) in A_1 x .. x A_n with a_1 ... a_n = x
inline std::int64_t tuple_count(const std::vector<GSet>& sets, Element x) {
  const Group& g = sets.front().group();
  std::int64_t count = 0;
  std::vector<std::size_t> idx(sets.size(), 0);
  for (const auto& s : sets)
    if (s.empty()) return 0;
  while (true) {
    std::optional<Element> p = g.identity();
    for (std::size_t i = 0; i < sets.size() && p; ++i) p = g.try_mul(*p, sets[i][idx[i]]);
    if (p && *p == x) ++count;
    std::size_t pos = sets.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < sets[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) return count;
    }
  }
}

inline std::int64_t quadruple_energy(const GSet& a, const GSet& b) {
  const Group& g = a.group();
  std::int64_t n = 0;
  for (Element a1 : a)
    for (Element b1 : b)
      for (Element a2 : a)
        for (Element b2 : b)
          if (g.mul(a1, b1) == g.mul(a2, b2)) ++n;
  return n;
}

// |A ∩ x B^-1|
inline std::int64_t intersection_count(const GSet& a, const GSet& b, Element x) {
  const Group& g = a.group();
  std::int64_t n = 0;
  for (Element y : b) {
    auto z = g.try_mul(x, g.inverse(y));
    if (z && a.contains(*z)) ++n;
  }
  return n;
}

// f = 1_A * 1_B as a map, by pair enumeration
inline std::map<std::uint64_t, std::int64_t> pair_table(const GSet& a, const GSet& b) {
  std::map<std::uint64_t, std::int64_t> f;
  for (Element x : a)
    for (Element y : b) ++f[a.group().mul(x, y).rank];
  return f;
}

// sum over the whole group of |f(tx) - f(x)|^p (left) or |f(xt) - f(x)|^p (right)
inline aplab::Integer shift_defect(const GSet& a, const GSet& b, Element t, bool left, unsigned p) {
  const Group& g = a.group();
  auto f = pair_table(a, b);
  auto at = [&](std::optional<Element> e) -> std::int64_t {
    if (!e) return 0;
    auto it = f.find(e->rank);
    return it == f.end() ? 0 : it->second;
  };
  auto power = [p](std::int64_t d) {
    aplab::Integer v = d < 0 ? -d : d, pw = 1;
    for (unsigned i = 0; i < p; ++i) pw *= v;
    return pw;
  };
  aplab::Integer total = 0;
  for (Element x : all_elements(g)) total += power(at(left ? g.try_mul(t, x) : g.try_mul(x, t)) - at(x));
  // in a window, x outside the window can still land on the support
  for (const auto& [y, fy] : f) {
    Element ti = g.inverse(t);
    if (!(left ? g.try_mul(ti, Element{y}) : g.try_mul(Element{y}, ti))) total += power(fy);
  }
  return total;
}

// #{(x, y) in A^2 : 2y - x in A} for a set of integers
inline std::int64_t t3_pairs(const std::vector<std::int64_t>& a) {
  std::set<std::int64_t> s(a.begin(), a.end());
  std::int64_t n = 0;
  for (auto x : a)
    for (auto y : a)
      if (s.count(2 * y - x)) ++n;
  return n;
}

inline bool progression_free(const std::vector<std::int64_t>& a) { return t3_pairs(a) == static_cast<std::int64_t>(a.size()); }

inline GSet random_set(const Group& g, std::uint64_t num, std::uint64_t den, aplab::Rng& rng) {
  std::vector<Element> out;
  for (Element e : all_elements(g))
    if (rng.below(den) < num) out.push_back(e);
  if (out.empty()) out.push_back(Element{rng.below(g.order())});
  return GSet(g, out);
}

// greedy random 3AP-free subset of [1, n]
inline std::vector<std::int64_t> random_progression_free(std::int64_t n, aplab::Rng& rng) {
  std::vector<std::int64_t> order;
  for (std::int64_t i = 1; i <= n; ++i) order.push_back(i);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::int64_t> out;
  for (auto v : order) {
    out.push_back(v);
    if (!progression_free(out)) out.pop_back();
  }
  std::sort(out.begin(), out.end());
  return out;
}

// longest AP inside a set of integers, by scanning every base and step
inline std::uint64_t longest_ap_length(const std::vector<std::int64_t>& xs) {
  std::set<std::int64_t> s(xs.begin(), xs.end());
  std::uint64_t best = xs.empty() ? 0 : 1;
  for (auto a : xs)
    for (auto b : xs)
      if (b > a) {
        std::int64_t d = b - a;
        std::uint64_t len = 1;
        while (s.count(a + static_cast<std::int64_t>(len) * d)) ++len;
        best = std::max(best, len);
      }
  return best;
}

// largest 3AP-free subset of [1, n] by plain subset enumeration (n <= 20)
inline unsigned r3_subsets(unsigned n) {
  unsigned best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    unsigned c = __builtin_popcount(mask);
    if (c <= best) continue;
    bool ok = true;
    for (unsigned a = 0; a < n && ok; ++a)
      if (mask >> a & 1)
        for (unsigned b = a + 1; b < n && ok; ++b)
          if ((mask >> b & 1) && 2 * b - a < n && (mask >> (2 * b - a) & 1)) ok = false;
    if (ok) best = c;
  }
  return best;
}

}  // namespace oracle
