#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aplab/gset.hpp"
#include "aplab/rational.hpp"

namespace aplab {

using Count = std::int64_t;

struct TableEntry {
  Element x;
  Count count;

  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

/// Exact nonnegative integer function of finite support, stored as sorted
/// (element, count) pairs with zero entries dropped.
class ConvTable {
 public:
  explicit ConvTable(Group group) : group_(std::move(group)) {}
  /// Entries in any order; repeated elements are summed, zeros dropped.
  ConvTable(Group group, std::vector<TableEntry> entries);

  static ConvTable indicator(const GSet& set);
  static ConvTable delta(const Group& group, Element e);

  const Group& group() const { return group_; }
  const std::vector<TableEntry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Count at(Element x) const;
  GSet support() const;
  Integer total() const;
  Count max_value() const;
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const ConvTable& a, const ConvTable& b) {
    return a.group_ == b.group_ && a.entries_ == b.entries_;
  }

 private:
  friend ConvTable table_from_sorted(Group, std::vector<TableEntry>);
  Group group_;
  std::vector<TableEntry> entries_;
};

ConvTable table_from_sorted(Group group, std::vector<TableEntry> entries);

/// O(1) point lookup into a table (dense array for moderate group orders).
class TableLookup {
 public:
  explicit TableLookup(const ConvTable& f);
  Count operator()(Element x) const;
  /// f(x) if x is defined, else 0 (for partial window products).
  Count operator()(const std::optional<Element>& x) const { return x ? (*this)(*x) : 0; }

 private:
  const ConvTable* table_;
  std::vector<Count> dense_;
};

/// Stores the p-th power of the L^p norm.
struct NormValue {
  unsigned p = 1;
  Integer value;
};

ConvTable convolve(const ConvTable& f, const ConvTable& g);
ConvTable convolve_sets(const std::vector<GSet>& sets);
ConvTable reflect(const ConvTable& f);
NormValue lp_norm_pow(const ConvTable& f, unsigned p);
Integer energy(const GSet& a, const GSet& b);
bool is_gamma_popular(const GSet& a, const GSet& b, const GSet& c, Element x, const Rational& gamma);
/// sum_x |f(t x) - f(x)|^p (left) or |f(x t) - f(x)|^p (right). Points
/// that leave an integer window are outside the support.
NormValue translation_defect(const ConvTable& f, Element t, Side side, unsigned p);
/// sum_{x,y} f(x) f(y) f(2y - x); abelian groups only.
Integer t3_count(const ConvTable& f);

std::string to_csv(const ConvTable& f);
nlohmann::json to_json(const ConvTable& f);
ConvTable table_from_json(const nlohmann::json& j);

Integer to_integer(__int128 v);

}  // namespace aplab
