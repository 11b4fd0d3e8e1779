#include "aplab/gset.hpp"

#include <algorithm>

#include "aplab/error.hpp"

namespace aplab {

namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 26;

}  // namespace

GSet::GSet(Group group, std::vector<Element> elements) : group_(std::move(group)), elements_(std::move(elements)) {
  for (Element e : elements_) group_.check(e);
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

GSet make_sorted(Group group, std::vector<Element> elements) {
  return GSet(std::move(group), std::move(elements), GSet::Sorted{});
}

GSet GSet::whole(const Group& group) {
  if (group.order() > kDenseLimit) fail(ErrorKind::out_of_range, "group too large to enumerate: " + group.spec());
  std::vector<Element> all(group.order());
  for (std::uint64_t i = 0; i < all.size(); ++i) all[i] = Element{i};
  return make_sorted(group, std::move(all));
}

GSet GSet::singleton(const Group& group, Element e) {
  group.check(e);
  return make_sorted(group, {e});
}

GSet GSet::from_integers(const Group& group, const std::vector<std::int64_t>& values) {
  std::vector<Element> out;
  out.reserve(values.size());
  for (auto v : values) out.push_back(group.from_integer(v));
  return GSet(group, std::move(out));
}

GSet GSet::interval(const Group& group, std::int64_t lo, std::int64_t hi) {
  std::vector<Element> out;
  for (std::int64_t v = lo; v <= hi; ++v) out.push_back(group.from_integer(v));
  return GSet(group, std::move(out));
}

GSet GSet::from_tuples(const Group& group, const std::vector<std::vector<std::int64_t>>& tuples) {
  std::vector<Element> out;
  out.reserve(tuples.size());
  for (const auto& t : tuples) out.push_back(group.decode(t));
  return GSet(group, std::move(out));
}

bool GSet::contains(Element e) const { return std::binary_search(elements_.begin(), elements_.end(), e); }

std::vector<std::int64_t> GSet::integers() const {
  std::vector<std::int64_t> out;
  out.reserve(size());
  for (Element e : elements_) out.push_back(group_.to_integer(e));
  return out;
}

void require_same_group(const GSet& a, const GSet& b) {
  if (!(a.group() == b.group()))
    fail(ErrorKind::group_mismatch, "sets live in different groups: " + a.group().spec() + " vs " + b.group().spec());
}

void require_abelian(const Group& g, const char* what) {
  if (!g.abelian()) fail(ErrorKind::non_abelian, std::string(what) + " needs an abelian group, got " + g.spec());
}

ElementCollector::ElementCollector(const Group& g) : group_(g), dense_(g.order() <= kDenseLimit) {
  if (dense_) bits_.assign((g.order() + 63) / 64, 0);
}

void ElementCollector::add(Element e) {
  if (dense_)
    bits_[e.rank >> 6] |= std::uint64_t{1} << (e.rank & 63);
  else
    list_.push_back(e);
}

GSet ElementCollector::finish() {
  std::vector<Element> out;
  if (dense_) {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        int b = __builtin_ctzll(word);
        out.push_back(Element{w * 64 + static_cast<std::uint64_t>(b)});
        word &= word - 1;
      }
    }
  } else {
    std::sort(list_.begin(), list_.end());
    list_.erase(std::unique(list_.begin(), list_.end()), list_.end());
    out = std::move(list_);
  }
  return make_sorted(group_, std::move(out));
}

GSet product_set(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  const Group& g = a.group();
  ElementCollector acc(g);
  for (Element x : a) {
    for (Element y : b) {
      auto z = g.try_mul(x, y);
      if (!z) fail(ErrorKind::window_overflow, "product " + g.format(x) + " * " + g.format(y) + " leaves " + g.spec());
      acc.add(*z);
    }
  }
  return acc.finish();
}

GSet inverse_set(const GSet& a) {
  std::vector<Element> out;
  out.reserve(a.size());
  for (Element x : a) out.push_back(a.group().inverse(x));
  std::sort(out.begin(), out.end());
  return make_sorted(a.group(), std::move(out));
}

GSet translate(Element t, const GSet& a, Side side) {
  const Group& g = a.group();
  g.check(t);
  std::vector<Element> out;
  out.reserve(a.size());
  for (Element x : a) out.push_back(side == Side::left ? g.mul(t, x) : g.mul(x, t));
  std::sort(out.begin(), out.end());
  return make_sorted(g, std::move(out));
}

GSet iterated_product(const GSet& a, unsigned k) {
  if (k < 1) fail(ErrorKind::out_of_range, "iterated_product needs k >= 1");
  GSet acc = a;
  for (unsigned i = 1; i < k; ++i) acc = product_set(acc, a);
  return acc;
}

GSet dilate(std::int64_t lambda, const GSet& a) {
  const Group& g = a.group();
  require_abelian(g, "dilate");
  std::vector<Element> out;
  out.reserve(a.size());
  for (Element x : a) out.push_back(g.power(x, lambda));
  return GSet(g, std::move(out));
}

GSet difference_set(const GSet& a, const GSet& b) { return product_set(a, inverse_set(b)); }

GSet iterated_difference(const GSet& a, unsigned k) {
  require_abelian(a.group(), "iterated_difference");
  GSet ka = iterated_product(a, k);
  return difference_set(ka, ka);
}

GSet set_union(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  std::vector<Element> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return make_sorted(a.group(), std::move(out));
}

GSet set_intersection(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  std::vector<Element> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return make_sorted(a.group(), std::move(out));
}

GSet set_minus(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  std::vector<Element> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return make_sorted(a.group(), std::move(out));
}

std::size_t symmetric_difference_size(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  std::size_t common = set_intersection(a, b).size();
  return a.size() + b.size() - 2 * common;
}

bool is_subset(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool is_symmetric(const GSet& a) { return inverse_set(a) == a; }

GSet rewindow(const GSet& a, const Group& target) {
  if (a.group() == target) return a;
  if (a.group().encoding_width() != target.encoding_width())
    fail(ErrorKind::group_mismatch, "cannot rewindow " + a.group().spec() + " into " + target.spec());
  std::vector<Element> out;
  out.reserve(a.size());
  for (Element x : a) out.push_back(target.decode(a.group().encode(x)));
  return GSet(target, std::move(out));
}

Group widen_windows(const Group& g, std::int64_t bound) {
  switch (g.kind()) {
    case Group::Kind::integer_window:
      return g.window_bound() >= bound ? g : Group::integer_window(bound);
    case Group::Kind::direct_product: {
      std::vector<Group> parts;
      for (const auto& f : g.factors()) parts.push_back(widen_windows(f, bound));
      return Group::direct_product(std::move(parts));
    }
    default:
      return g;
  }
}

Group scale_windows(const Group& g, std::int64_t factor) {
  switch (g.kind()) {
    case Group::Kind::integer_window: {
      std::int64_t b = g.window_bound();
      if (b > (std::int64_t{1} << 38) / factor) fail(ErrorKind::out_of_range, "widened window exceeds 2^38");
      return Group::integer_window(b * factor);
    }
    case Group::Kind::direct_product: {
      std::vector<Group> parts;
      for (const auto& f : g.factors()) parts.push_back(scale_windows(f, factor));
      return Group::direct_product(std::move(parts));
    }
    default:
      return g;
  }
}

}  // namespace aplab
