#include "aplab/conv_table.hpp"

#include <algorithm>
#include <unordered_map>

#include "aplab/error.hpp"

namespace aplab {

namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24;

Count checked_add(Count a, Count b) {
  Count r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::out_of_range, "convolution count overflows 64 bits");
  return r;
}

Count checked_mul(Count a, Count b) {
  Count r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::out_of_range, "convolution count overflows 64 bits");
  return r;
}

// Sums counts keyed by element rank.
class Accumulator {
 public:
  explicit Accumulator(const Group& g) : group_(g), dense_(g.order() <= kDenseLimit) {
    if (dense_) values_.assign(g.order(), 0);
  }
  void add(Element x, Count c) {
    if (dense_) {
      Count& slot = values_[x.rank];
      if (slot == 0) touched_.push_back(x.rank);
      slot = checked_add(slot, c);
    } else {
      Count& slot = sparse_[x.rank];
      slot = checked_add(slot, c);
    }
  }
  ConvTable finish() {
    std::vector<TableEntry> out;
    if (dense_) {
      std::sort(touched_.begin(), touched_.end());
      out.reserve(touched_.size());
      for (auto r : touched_)
        if (values_[r] != 0) out.push_back({Element{r}, values_[r]});
    } else {
      out.reserve(sparse_.size());
      for (auto& [r, c] : sparse_)
        if (c != 0) out.push_back({Element{r}, c});
      std::sort(out.begin(), out.end(), [](const TableEntry& a, const TableEntry& b) { return a.x < b.x; });
    }
    return table_from_sorted(group_, std::move(out));
  }

 private:
  Group group_;
  bool dense_;
  std::vector<Count> values_;
  std::vector<std::uint64_t> touched_;
  std::unordered_map<std::uint64_t, Count> sparse_;
};

void require_same(const Group& a, const Group& b) {
  if (!(a == b)) fail(ErrorKind::group_mismatch, "tables live in different groups: " + a.spec() + " vs " + b.spec());
}

}  // namespace

Integer to_integer(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  Integer r = hi * pow(Integer(2), 64) + lo;
  return neg ? Integer(-r) : r;
}

ConvTable::ConvTable(Group group, std::vector<TableEntry> entries) : group_(std::move(group)) {
  for (const auto& e : entries) {
    group_.check(e.x);
    if (e.count < 0) fail(ErrorKind::out_of_range, "negative table entry");
  }
  std::sort(entries.begin(), entries.end(), [](const TableEntry& a, const TableEntry& b) { return a.x < b.x; });
  for (const auto& e : entries) {
    if (e.count == 0) continue;
    if (!entries_.empty() && entries_.back().x == e.x)
      entries_.back().count = checked_add(entries_.back().count, e.count);
    else
      entries_.push_back(e);
  }
}

ConvTable table_from_sorted(Group group, std::vector<TableEntry> entries) {
  ConvTable t(std::move(group));
  t.entries_ = std::move(entries);
  return t;
}

ConvTable ConvTable::indicator(const GSet& set) {
  std::vector<TableEntry> out;
  out.reserve(set.size());
  for (Element e : set) out.push_back({e, 1});
  return table_from_sorted(set.group(), std::move(out));
}

ConvTable ConvTable::delta(const Group& group, Element e) {
  group.check(e);
  return table_from_sorted(group, {{e, 1}});
}

Count ConvTable::at(Element x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const TableEntry& a, Element b) { return a.x < b; });
  return it != entries_.end() && it->x == x ? it->count : 0;
}

GSet ConvTable::support() const {
  std::vector<Element> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.x);
  return make_sorted(group_, std::move(out));
}

Integer ConvTable::total() const {
  Integer s = 0;
  for (const auto& e : entries_) s += Integer(static_cast<long>(e.count));
  return s;
}

Count ConvTable::max_value() const {
  Count m = 0;
  for (const auto& e : entries_) m = std::max(m, e.count);
  return m;
}

TableLookup::TableLookup(const ConvTable& f) : table_(&f) {
  if (f.group().order() <= kDenseLimit) {
    dense_.assign(f.group().order(), 0);
    for (const auto& e : f) dense_[e.x.rank] = e.count;
  }
}

Count TableLookup::operator()(Element x) const {
  if (!dense_.empty()) return x.rank < dense_.size() ? dense_[x.rank] : 0;
  return table_->at(x);
}

ConvTable convolve(const ConvTable& f, const ConvTable& g) {
  require_same(f.group(), g.group());
  const Group& G = f.group();
  Accumulator acc(G);
  for (const auto& a : f) {
    for (const auto& b : g) {
      auto z = G.try_mul(a.x, b.x);
      if (!z) fail(ErrorKind::window_overflow, "convolution leaves " + G.spec() + " at " + G.format(a.x) + " * " + G.format(b.x));
      acc.add(*z, checked_mul(a.count, b.count));
    }
  }
  return acc.finish();
}

ConvTable convolve_sets(const std::vector<GSet>& sets) {
  if (sets.empty()) fail(ErrorKind::out_of_range, "convolve_sets needs at least one set");
  ConvTable acc = ConvTable::indicator(sets.front());
  for (std::size_t i = 1; i < sets.size(); ++i) acc = convolve(acc, ConvTable::indicator(sets[i]));
  return acc;
}

ConvTable reflect(const ConvTable& f) {
  std::vector<TableEntry> out;
  out.reserve(f.support_size());
  for (const auto& e : f) out.push_back({f.group().inverse(e.x), e.count});
  std::sort(out.begin(), out.end(), [](const TableEntry& a, const TableEntry& b) { return a.x < b.x; });
  return table_from_sorted(f.group(), std::move(out));
}

NormValue lp_norm_pow(const ConvTable& f, unsigned p) {
  if (p < 1) fail(ErrorKind::out_of_range, "norm exponent must be >= 1");
  NormValue out{p, 0};
  if (p == 1) {
    out.value = f.total();
    return out;
  }
  for (const auto& e : f) out.value += pow(Integer(static_cast<long>(e.count)), p);
  return out;
}

Integer energy(const GSet& a, const GSet& b) {
  return lp_norm_pow(convolve_sets({a, b}), 2).value;
}

bool is_gamma_popular(const GSet& a, const GSet& b, const GSet& c, Element x, const Rational& gamma) {
  require_same_group(a, b);
  require_same_group(a, c);
  if (gamma <= 0 || gamma > 1) fail(ErrorKind::out_of_range, "gamma must lie in (0, 1]");
  const Group& G = a.group();
  G.check(x);
  // (1_A*1_B*1_C)(x) = sum_{c in C} (1_A*1_B)(x c^-1)
  ConvTable ab = convolve_sets({a, b});
  TableLookup f(ab);
  Integer value = 0;
  for (Element y : c) value += Integer(static_cast<long>(f(G.try_mul(x, G.inverse(y)))));
  Rational lhs(value * value);
  Rational rhs = gamma * gamma * Rational(static_cast<long>(a.size())) * Rational(static_cast<long>(b.size())) *
                 Rational(static_cast<long>(c.size() * c.size()));
  return lhs >= rhs;
}

NormValue translation_defect(const ConvTable& f, Element t, Side side, unsigned p) {
  if (p < 1) fail(ErrorKind::out_of_range, "norm exponent must be >= 1");
  const Group& G = f.group();
  G.check(t);
  TableLookup look(f);
  Element tinv = G.inverse(t);
  auto shift = [&](Element x, Element by) { return side == Side::left ? G.try_mul(by, x) : G.try_mul(x, by); };
  NormValue out{p, 0};
  bool fast = p == 2 && f.max_value() < (Count{1} << 40) && f.support_size() < (std::size_t{1} << 40);
  __int128 acc = 0;
  auto add = [&](Count d) {
    if (d == 0) return;
    if (fast) {
      acc += static_cast<__int128>(d) * d;
    } else {
      Integer v = pow(Integer(static_cast<long>(d < 0 ? -d : d)), p);
      out.value += v;
    }
  };
  // x in supp f: (f(x.t) - f(x)); then points x not in supp f with x.t in supp f.
  for (const auto& e : f) add(look(shift(e.x, t)) - e.count);
  for (const auto& e : f) {
    auto x = shift(e.x, tinv);
    if (!x || look(*x) == 0) add(e.count);
  }
  if (fast) out.value = to_integer(acc);
  return out;
}

Integer t3_count(const ConvTable& f) {
  const Group& G = f.group();
  require_abelian(G, "t3_count");
  TableLookup look(f);
  Integer total = 0;
  for (const auto& y : f) {
    // if 2y leaves a window, 2y - x may still be representable
    auto twice = G.try_mul(y.x, y.x);
    __int128 inner = 0;
    for (const auto& x : f) {
      std::optional<Element> z;
      if (twice) {
        z = G.try_mul(*twice, G.inverse(x.x));
      } else {
        auto d = G.try_mul(y.x, G.inverse(x.x));
        if (d) z = G.try_mul(y.x, *d);
      }
      Count fz = look(z);
      if (fz) inner += static_cast<__int128>(x.count) * fz;
    }
    if (inner) total += to_integer(inner) * Integer(static_cast<long>(y.count));
  }
  return total;
}

std::string to_csv(const ConvTable& f) {
  std::string out = "element,count\n";
  for (const auto& e : f) {
    std::string el = f.group().format(e.x);
    if (el.find(',') != std::string::npos) el = "\"" + el + "\"";
    out += el + "," + std::to_string(e.count) + "\n";
  }
  return out;
}

nlohmann::json to_json(const ConvTable& f) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : f) entries.push_back({{"element", f.group().encode(e.x)}, {"count", e.count}});
  return {{"group", f.group().spec()}, {"entries", entries}};
}

ConvTable table_from_json(const nlohmann::json& j) {
  try {
    Group g = Group::parse(j.at("group").get<std::string>());
    std::vector<TableEntry> entries;
    for (const auto& e : j.at("entries")) {
      auto tuple = e.at("element").get<std::vector<std::int64_t>>();
      entries.push_back({g.decode(tuple), e.at("count").get<Count>()});
    }
    return ConvTable(g, std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("bad table json: ") + e.what());
  }
}

}  // namespace aplab
