#pragma once

#include <cstdint>
#include <vector>

#include "aplab/group.hpp"

namespace aplab {

/// An immutable finite subset of a group, kept sorted by canonical encoding
/// with no duplicates.
class GSet {
 public:
  GSet() = default;
  explicit GSet(Group group) : group_(std::move(group)) {}
  /// Sorts and deduplicates; every element is validated.
  GSet(Group group, std::vector<Element> elements);

  static GSet whole(const Group& group);
  static GSet singleton(const Group& group, Element e);
  /// Window or Z/N only.
  static GSet from_integers(const Group& group, const std::vector<std::int64_t>& values);
  /// Integers lo..hi inclusive (window or Z/N).
  static GSet interval(const Group& group, std::int64_t lo, std::int64_t hi);
  static GSet from_tuples(const Group& group, const std::vector<std::vector<std::int64_t>>& tuples);

  const Group& group() const { return group_; }
  const std::vector<Element>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(Element e) const;
  std::vector<std::int64_t> integers() const;
  Element operator[](std::size_t i) const { return elements_[i]; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  friend bool operator==(const GSet& a, const GSet& b) {
    return a.group_ == b.group_ && a.elements_ == b.elements_;
  }

 private:
  struct Sorted {};
  GSet(Group group, std::vector<Element> elements, Sorted)
      : group_(std::move(group)), elements_(std::move(elements)) {}
  friend GSet make_sorted(Group, std::vector<Element>);

  Group group_;
  std::vector<Element> elements_;
};

/// Builds a set from elements already known to be valid, sorted and unique.
GSet make_sorted(Group group, std::vector<Element> elements);

void require_same_group(const GSet& a, const GSet& b);
void require_abelian(const Group& g, const char* what);

/// Accumulates ranks into a sorted unique list; a bitmap for groups of
/// moderate order, sort + unique otherwise.
class ElementCollector {
 public:
  explicit ElementCollector(const Group& g);
  void add(Element e);
  GSet finish();

 private:
  Group group_;
  std::vector<std::uint64_t> bits_;
  std::vector<Element> list_;
  bool dense_;
};

GSet product_set(const GSet& a, const GSet& b);
GSet inverse_set(const GSet& a);
GSet translate(Element t, const GSet& a, Side side);
GSet iterated_product(const GSet& a, unsigned k);
GSet dilate(std::int64_t lambda, const GSet& a);
/// A·B⁻¹, written additively A − B.
GSet difference_set(const GSet& a, const GSet& b);
/// kA − kA for abelian groups.
GSet iterated_difference(const GSet& a, unsigned k);

GSet set_union(const GSet& a, const GSet& b);
GSet set_intersection(const GSet& a, const GSet& b);
GSet set_minus(const GSet& a, const GSet& b);
std::size_t symmetric_difference_size(const GSet& a, const GSet& b);
bool is_subset(const GSet& a, const GSet& b);
bool is_symmetric(const GSet& a);

/// Re-expresses a set in a group with the same encoding but different window
/// bounds (e.g. Z_window:100 -> Z_window:1000).
GSet rewindow(const GSet& a, const Group& target);
/// Group equal to g with every window bound raised to at least `bound`.
Group widen_windows(const Group& g, std::int64_t bound);
/// Group equal to g with every window bound multiplied by `factor`.
Group scale_windows(const Group& g, std::int64_t factor);

}  // namespace aplab
