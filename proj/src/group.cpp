#include "aplab/group.hpp"

#include <algorithm>
#include <numeric>

#include "aplab/error.hpp"

namespace aplab {

const char* to_string(Side side) noexcept { return side == Side::left ? "left" : "right"; }

Side parse_side(std::string_view text) {
  if (text == "left") return Side::left;
  if (text == "right") return Side::right;
  fail(ErrorKind::parse, "side must be 'left' or 'right', got '" + std::string(text) + "'");
}

namespace detail {

class GroupImpl {
 public:
  virtual ~GroupImpl() = default;
  virtual Group::Kind kind() const = 0;
  virtual std::string spec() const = 0;
  virtual bool abelian() const = 0;
  virtual std::uint64_t order() const = 0;
  virtual bool windowed() const { return false; }
  virtual std::size_t width() const = 0;
  virtual std::uint64_t identity() const = 0;
  virtual std::optional<std::uint64_t> mul(std::uint64_t a, std::uint64_t b) const = 0;
  virtual std::uint64_t inverse(std::uint64_t a) const = 0;
  virtual void encode(std::uint64_t a, std::vector<std::int64_t>& out) const = 0;
  // Consumes width() entries; nullopt if invalid.
  virtual std::optional<std::uint64_t> decode(std::span<const std::int64_t> t) const = 0;
  virtual const std::vector<Group>* factors() const { return nullptr; }
};

namespace {

class WindowImpl final : public GroupImpl {
 public:
  explicit WindowImpl(std::int64_t bound) : bound_(bound) {}
  Group::Kind kind() const override { return Group::Kind::integer_window; }
  std::string spec() const override { return "Z_window:" + std::to_string(bound_); }
  bool abelian() const override { return true; }
  std::uint64_t order() const override { return 2 * static_cast<std::uint64_t>(bound_) + 1; }
  bool windowed() const override { return true; }
  std::size_t width() const override { return 1; }
  std::uint64_t identity() const override { return static_cast<std::uint64_t>(bound_); }
  std::optional<std::uint64_t> mul(std::uint64_t a, std::uint64_t b) const override {
    std::int64_t v = value(a) + value(b);
    if (v > bound_ || v < -bound_) return std::nullopt;
    return rank(v);
  }
  std::uint64_t inverse(std::uint64_t a) const override { return rank(-value(a)); }
  void encode(std::uint64_t a, std::vector<std::int64_t>& out) const override { out.push_back(value(a)); }
  std::optional<std::uint64_t> decode(std::span<const std::int64_t> t) const override {
    if (t[0] > bound_ || t[0] < -bound_) return std::nullopt;
    return rank(t[0]);
  }
  std::int64_t bound() const { return bound_; }
  std::int64_t value(std::uint64_t r) const { return static_cast<std::int64_t>(r) - bound_; }
  std::uint64_t rank(std::int64_t v) const { return static_cast<std::uint64_t>(v + bound_); }

 private:
  std::int64_t bound_;
};

class CyclicImpl final : public GroupImpl {
 public:
  explicit CyclicImpl(std::uint64_t n) : n_(n) {}
  Group::Kind kind() const override { return Group::Kind::cyclic; }
  std::string spec() const override { return "Z%" + std::to_string(n_); }
  bool abelian() const override { return true; }
  std::uint64_t order() const override { return n_; }
  std::size_t width() const override { return 1; }
  std::uint64_t identity() const override { return 0; }
  std::optional<std::uint64_t> mul(std::uint64_t a, std::uint64_t b) const override {
    std::uint64_t s = a + b;
    return s >= n_ ? s - n_ : s;
  }
  std::uint64_t inverse(std::uint64_t a) const override { return a == 0 ? 0 : n_ - a; }
  void encode(std::uint64_t a, std::vector<std::int64_t>& out) const override {
    out.push_back(static_cast<std::int64_t>(a));
  }
  std::optional<std::uint64_t> decode(std::span<const std::int64_t> t) const override {
    if (t[0] < 0 || static_cast<std::uint64_t>(t[0]) >= n_) return std::nullopt;
    return static_cast<std::uint64_t>(t[0]);
  }

 private:
  std::uint64_t n_;
};

class VectorImpl final : public GroupImpl {
 public:
  VectorImpl(std::uint64_t p, unsigned n) : p_(p), n_(n) {
    order_ = 1;
    for (unsigned i = 0; i < n; ++i) {
      if (order_ > (std::uint64_t{1} << 40) / p) fail(ErrorKind::out_of_range, "F_p^n too large");
      order_ *= p;
    }
  }
  Group::Kind kind() const override { return Group::Kind::vector_fp; }
  std::string spec() const override { return "F:" + std::to_string(p_) + "^" + std::to_string(n_); }
  bool abelian() const override { return true; }
  std::uint64_t order() const override { return order_; }
  std::size_t width() const override { return n_; }
  std::uint64_t identity() const override { return 0; }
  std::optional<std::uint64_t> mul(std::uint64_t a, std::uint64_t b) const override {
    std::uint64_t out = 0;
    std::uint64_t place = 1;
    for (unsigned i = 0; i < n_; ++i) {
      std::uint64_t d = (a % p_ + b % p_) % p_;
      out += d * place;
      place *= p_;
      a /= p_;
      b /= p_;
    }
    return out;
  }
  std::uint64_t inverse(std::uint64_t a) const override {
    std::uint64_t out = 0;
    std::uint64_t place = 1;
    for (unsigned i = 0; i < n_; ++i) {
      std::uint64_t d = a % p_;
      out += ((p_ - d) % p_) * place;
      place *= p_;
      a /= p_;
    }
    return out;
  }
  void encode(std::uint64_t a, std::vector<std::int64_t>& out) const override {
    std::size_t start = out.size();
    out.resize(start + n_);
    for (unsigned i = 0; i < n_; ++i) {
      out[start + n_ - 1 - i] = static_cast<std::int64_t>(a % p_);
      a /= p_;
    }
  }
  std::optional<std::uint64_t> decode(std::span<const std::int64_t> t) const override {
    std::uint64_t r = 0;
    for (unsigned i = 0; i < n_; ++i) {
      if (t[i] < 0 || static_cast<std::uint64_t>(t[i]) >= p_) return std::nullopt;
      r = r * p_ + static_cast<std::uint64_t>(t[i]);
    }
    return r;
  }

 private:
  std::uint64_t p_;
  unsigned n_;
  std::uint64_t order_;
};

class SymmetricImpl final : public GroupImpl {
 public:
  explicit SymmetricImpl(unsigned n) : n_(n) {
    factorial_.assign(n + 1, 1);
    for (unsigned i = 1; i <= n; ++i) factorial_[i] = factorial_[i - 1] * i;
    order_ = factorial_[n];
    perms_.resize(order_ * n_);
    std::vector<std::uint8_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::uint64_t r = 0;
    do {
      std::copy(p.begin(), p.end(), perms_.begin() + static_cast<std::ptrdiff_t>(r * n_));
      ++r;
    } while (std::next_permutation(p.begin(), p.end()));
  }
  Group::Kind kind() const override { return Group::Kind::symmetric; }
  std::string spec() const override { return "S:" + std::to_string(n_); }
  bool abelian() const override { return n_ <= 2; }
  std::uint64_t order() const override { return order_; }
  std::size_t width() const override { return n_; }
  std::uint64_t identity() const override { return 0; }
  std::optional<std::uint64_t> mul(std::uint64_t a, std::uint64_t b) const override {
    const std::uint8_t* pa = perm(a);
    const std::uint8_t* pb = perm(b);
    std::uint8_t out[8];
    for (unsigned i = 0; i < n_; ++i) out[i] = pa[pb[i]];
    return rank(out);
  }
  std::uint64_t inverse(std::uint64_t a) const override {
    const std::uint8_t* pa = perm(a);
    std::uint8_t out[8];
    for (unsigned i = 0; i < n_; ++i) out[pa[i]] = static_cast<std::uint8_t>(i);
    return rank(out);
  }
  void encode(std::uint64_t a, std::vector<std::int64_t>& out) const override {
    for (unsigned i = 0; i < n_; ++i) {
      std::uint64_t f = factorial_[n_ - 1 - i];
      out.push_back(static_cast<std::int64_t>(a / f));
      a %= f;
    }
  }
  std::optional<std::uint64_t> decode(std::span<const std::int64_t> t) const override {
    std::uint64_t r = 0;
    for (unsigned i = 0; i < n_; ++i) {
      if (t[i] < 0 || t[i] > static_cast<std::int64_t>(n_ - 1 - i)) return std::nullopt;
      r += static_cast<std::uint64_t>(t[i]) * factorial_[n_ - 1 - i];
    }
    return r;
  }
  const std::uint8_t* perm(std::uint64_t r) const { return perms_.data() + r * n_; }
  std::uint64_t rank(const std::uint8_t* p) const {
    std::uint64_t r = 0;
    for (unsigned i = 0; i < n_; ++i) {
      unsigned smaller = 0;
      for (unsigned j = i + 1; j < n_; ++j) smaller += p[j] < p[i];
      r += smaller * factorial_[n_ - 1 - i];
    }
    return r;
  }
  unsigned degree() const { return n_; }

 private:
  unsigned n_;
  std::uint64_t order_;
  std::vector<std::uint64_t> factorial_;
  std::vector<std::uint8_t> perms_;
};

class DihedralImpl final : public GroupImpl {
 public:
  explicit DihedralImpl(std::uint64_t n) : n_(n) {}
  Group::Kind kind() const override { return Group::Kind::dihedral; }
  std::string spec() const override { return "D:" + std::to_string(n_); }
  bool abelian() const override { return n_ <= 2; }
  std::uint64_t order() const override { return 2 * n_; }
  std::size_t width() const override { return 2; }
  std::uint64_t identity() const override { return 0; }
  std::optional<std::uint64_t> mul(std::uint64_t a, std::uint64_t b) const override {
    std::uint64_t r1 = a / 2, s1 = a % 2, r2 = b / 2, s2 = b % 2;
    std::uint64_t r = s1 ? (r1 + n_ - r2) % n_ : (r1 + r2) % n_;
    return 2 * r + (s1 ^ s2);
  }
  std::uint64_t inverse(std::uint64_t a) const override {
    std::uint64_t r = a / 2, s = a % 2;
    if (s) return a;
    return 2 * ((n_ - r) % n_);
  }
  void encode(std::uint64_t a, std::vector<std::int64_t>& out) const override {
    out.push_back(static_cast<std::int64_t>(a / 2));
    out.push_back(static_cast<std::int64_t>(a % 2));
  }
  std::optional<std::uint64_t> decode(std::span<const std::int64_t> t) const override {
    if (t[0] < 0 || static_cast<std::uint64_t>(t[0]) >= n_) return std::nullopt;
    if (t[1] != 0 && t[1] != 1) return std::nullopt;
    return 2 * static_cast<std::uint64_t>(t[0]) + static_cast<std::uint64_t>(t[1]);
  }

 private:
  std::uint64_t n_;
};

class ProductImpl final : public GroupImpl {
 public:
  explicit ProductImpl(std::vector<Group> factors) : factors_(std::move(factors)) {
    radix_.resize(factors_.size());
    order_ = 1;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      radix_[i] = order_;
      std::uint64_t o = factors_[i].order();
      if (order_ > (std::uint64_t{1} << 40) / o) fail(ErrorKind::out_of_range, "direct product too large");
      order_ *= o;
    }
  }
  Group::Kind kind() const override { return Group::Kind::direct_product; }
  std::string spec() const override {
    std::string s;
    for (const auto& f : factors_) {
      if (!s.empty()) s += "x";
      s += f.spec();
    }
    return s;
  }
  bool abelian() const override {
    return std::all_of(factors_.begin(), factors_.end(), [](const Group& g) { return g.abelian(); });
  }
  std::uint64_t order() const override { return order_; }
  bool windowed() const override {
    return std::any_of(factors_.begin(), factors_.end(), [](const Group& g) { return g.windowed(); });
  }
  std::size_t width() const override {
    std::size_t w = 0;
    for (const auto& f : factors_) w += f.encoding_width();
    return w;
  }
  std::uint64_t identity() const override {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) r += factors_[i].identity().rank * radix_[i];
    return r;
  }
  std::optional<std::uint64_t> mul(std::uint64_t a, std::uint64_t b) const override {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      auto c = factors_[i].try_mul(component(a, i), component(b, i));
      if (!c) return std::nullopt;
      r += c->rank * radix_[i];
    }
    return r;
  }
  std::uint64_t inverse(std::uint64_t a) const override {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) r += factors_[i].inverse(component(a, i)).rank * radix_[i];
    return r;
  }
  void encode(std::uint64_t a, std::vector<std::int64_t>& out) const override {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      auto t = factors_[i].encode(component(a, i));
      out.insert(out.end(), t.begin(), t.end());
    }
  }
  std::optional<std::uint64_t> decode(std::span<const std::int64_t> t) const override {
    std::uint64_t r = 0;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      std::size_t w = factors_[i].encoding_width();
      try {
        r += factors_[i].decode(t.subspan(offset, w)).rank * radix_[i];
      } catch (const Error&) {
        return std::nullopt;
      }
      offset += w;
    }
    return r;
  }
  const std::vector<Group>* factors() const override { return &factors_; }

 private:
  Element component(std::uint64_t a, std::size_t i) const {
    return Element{(a / radix_[i]) % factors_[i].order()};
  }

  std::vector<Group> factors_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t order_;
};

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t parse_unsigned(std::string_view s, std::string_view whole) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    fail(ErrorKind::parse, "bad group spec '" + std::string(whole) + "'");
  std::uint64_t v = 0;
  for (char c : s) {
    if (v > (std::uint64_t{1} << 58)) fail(ErrorKind::parse, "group parameter too large in '" + std::string(whole) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

Group parse_factor(std::string_view s) {
  if (s.starts_with("Z_window:")) {
    return Group::integer_window(static_cast<std::int64_t>(parse_unsigned(s.substr(9), s)));
  }
  if (s.starts_with("Z%")) return Group::cyclic(parse_unsigned(s.substr(2), s));
  if (s.starts_with("F:")) {
    auto caret = s.find('^');
    if (caret == std::string_view::npos) fail(ErrorKind::parse, "bad group spec '" + std::string(s) + "'");
    return Group::vector_fp(parse_unsigned(s.substr(2, caret - 2), s),
                            static_cast<unsigned>(parse_unsigned(s.substr(caret + 1), s)));
  }
  if (s.starts_with("S:")) return Group::symmetric(static_cast<unsigned>(parse_unsigned(s.substr(2), s)));
  if (s.starts_with("D:")) return Group::dihedral(parse_unsigned(s.substr(2), s));
  fail(ErrorKind::parse, "unknown group spec '" + std::string(s) + "'");
}

}  // namespace
}  // namespace detail

Group::Group() : impl_(std::make_shared<detail::CyclicImpl>(1)) {}

Group Group::integer_window(std::int64_t bound) {
  if (bound < 1 || bound > (std::int64_t{1} << 38))
    fail(ErrorKind::out_of_range, "window bound must lie in [1, 2^38]");
  return Group(std::make_shared<detail::WindowImpl>(bound));
}

Group Group::cyclic(std::uint64_t n) {
  if (n < 1 || n > (std::uint64_t{1} << 40)) fail(ErrorKind::out_of_range, "Z/N needs 1 <= N <= 2^40");
  return Group(std::make_shared<detail::CyclicImpl>(n));
}

Group Group::vector_fp(std::uint64_t p, unsigned n) {
  if (!detail::is_prime(p)) fail(ErrorKind::out_of_range, "F_p^n needs p prime, got " + std::to_string(p));
  if (n < 1) fail(ErrorKind::out_of_range, "F_p^n needs n >= 1");
  return Group(std::make_shared<detail::VectorImpl>(p, n));
}

Group Group::symmetric(unsigned n) {
  if (n < 2 || n > 8) fail(ErrorKind::out_of_range, "Symmetric(n) needs 2 <= n <= 8");
  return Group(std::make_shared<detail::SymmetricImpl>(n));
}

Group Group::dihedral(std::uint64_t n) {
  if (n < 1 || n > (std::uint64_t{1} << 39)) fail(ErrorKind::out_of_range, "Dihedral(n) needs n >= 1");
  return Group(std::make_shared<detail::DihedralImpl>(n));
}

Group Group::direct_product(std::vector<Group> factors) {
  std::vector<Group> flat;
  for (auto& f : factors) {
    if (f.kind() == Kind::direct_product) {
      const auto& inner = f.factors();
      flat.insert(flat.end(), inner.begin(), inner.end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.empty()) fail(ErrorKind::out_of_range, "empty direct product");
  if (flat.size() == 1) return flat.front();
  return Group(std::make_shared<detail::ProductImpl>(std::move(flat)));
}

Group Group::parse(std::string_view spec) {
  std::vector<Group> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t x = spec.find('x', start);
    std::string_view part = spec.substr(start, x == std::string_view::npos ? spec.npos : x - start);
    while (!part.empty() && (part.front() == ' ' || part.front() == '\t')) part.remove_prefix(1);
    while (!part.empty() && (part.back() == ' ' || part.back() == '\t' || part.back() == '\r')) part.remove_suffix(1);
    parts.push_back(detail::parse_factor(part));
    if (x == std::string_view::npos) break;
    start = x + 1;
  }
  return direct_product(std::move(parts));
}

Group::Kind Group::kind() const { return impl_->kind(); }
std::string Group::spec() const { return impl_->spec(); }
bool Group::abelian() const { return impl_->abelian(); }
std::uint64_t Group::order() const { return impl_->order(); }
bool Group::windowed() const { return impl_->windowed(); }
std::size_t Group::encoding_width() const { return impl_->width(); }

const std::vector<Group>& Group::factors() const {
  static const std::vector<Group> none;
  const auto* f = impl_->factors();
  return f ? *f : none;
}

Element Group::identity() const { return Element{impl_->identity()}; }

void Group::check(Element e) const {
  if (!valid(e)) fail(ErrorKind::invalid_element, "element rank " + std::to_string(e.rank) + " invalid for " + spec());
}

std::optional<Element> Group::try_mul(Element a, Element b) const {
  auto r = impl_->mul(a.rank, b.rank);
  if (!r) return std::nullopt;
  return Element{*r};
}

Element Group::mul(Element a, Element b) const {
  check(a);
  check(b);
  auto r = try_mul(a, b);
  if (!r) fail(ErrorKind::window_overflow, "product " + format(a) + " * " + format(b) + " leaves " + spec());
  return *r;
}

Element Group::inverse(Element a) const { return Element{impl_->inverse(a.rank)}; }

std::optional<Element> Group::try_power(Element a, std::int64_t n) const {
  Element base = n < 0 ? inverse(a) : a;
  std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  Element result = identity();
  while (e > 0) {
    if (e & 1) {
      auto r = try_mul(result, base);
      if (!r) return std::nullopt;
      result = *r;
    }
    e >>= 1;
    if (e > 0) {
      auto b = try_mul(base, base);
      if (!b) return std::nullopt;
      base = *b;
    }
  }
  return result;
}

Element Group::power(Element a, std::int64_t n) const {
  check(a);
  auto r = try_power(a, n);
  if (!r) fail(ErrorKind::window_overflow, std::to_string(n) + "-th power of " + format(a) + " leaves " + spec());
  return *r;
}

std::optional<std::uint64_t> Group::element_order(Element a) const {
  if (a == identity()) return 1;
  if (windowed()) {
    // a window factor with a nonzero coordinate has infinite order
    if (kind() == Kind::integer_window) return std::nullopt;
    std::vector<std::int64_t> t = encode(a);
    std::size_t offset = 0;
    for (const auto& f : factors()) {
      std::size_t w = f.encoding_width();
      if (f.kind() == Kind::integer_window && t[offset] != 0) return std::nullopt;
      offset += w;
    }
  }
  std::uint64_t n = 1;
  Element x = a;
  while (x != identity()) {
    x = *try_mul(x, a);
    ++n;
  }
  return n;
}

std::vector<std::int64_t> Group::encode(Element e) const {
  check(e);
  std::vector<std::int64_t> out;
  out.reserve(encoding_width());
  impl_->encode(e.rank, out);
  return out;
}

Element Group::decode(std::span<const std::int64_t> tuple) const {
  auto invalid = [&] {
    std::string s;
    for (auto v : tuple) s += (s.empty() ? "" : ",") + std::to_string(v);
    fail(ErrorKind::invalid_element, "tuple (" + s + ") is not an element of " + spec());
  };
  if (tuple.size() != encoding_width()) invalid();
  auto r = impl_->decode(tuple);
  if (!r) invalid();
  return Element{*r};
}

std::string Group::format(Element e) const {
  if (!valid(e)) return "<rank " + std::to_string(e.rank) + ">";
  std::string s;
  for (auto v : encode(e)) s += (s.empty() ? "" : ",") + std::to_string(v);
  return encoding_width() == 1 ? s : "(" + s + ")";
}

std::int64_t Group::window_bound() const {
  if (kind() != Kind::integer_window) fail(ErrorKind::precondition, spec() + " is not an integer window");
  return static_cast<const detail::WindowImpl&>(*impl_).bound();
}

Element Group::from_integer(std::int64_t v) const {
  if (kind() == Kind::cyclic) {
    auto n = static_cast<std::int64_t>(order());
    return Element{static_cast<std::uint64_t>(((v % n) + n) % n)};
  }
  if (kind() != Kind::integer_window) fail(ErrorKind::precondition, spec() + " has no integer elements");
  const auto& w = static_cast<const detail::WindowImpl&>(*impl_);
  if (v > w.bound() || v < -w.bound())
    fail(ErrorKind::window_overflow, std::to_string(v) + " lies outside " + spec());
  return Element{w.rank(v)};
}

std::int64_t Group::to_integer(Element e) const {
  check(e);
  if (kind() == Kind::cyclic) return static_cast<std::int64_t>(e.rank);
  if (kind() != Kind::integer_window) fail(ErrorKind::precondition, spec() + " has no integer elements");
  return static_cast<const detail::WindowImpl&>(*impl_).value(e.rank);
}

Element Group::from_permutation(std::span<const int> images) const {
  if (kind() != Kind::symmetric) fail(ErrorKind::precondition, spec() + " is not a symmetric group");
  const auto& s = static_cast<const detail::SymmetricImpl&>(*impl_);
  if (images.size() != s.degree()) fail(ErrorKind::invalid_element, "permutation has wrong degree");
  std::uint8_t p[8];
  std::vector<bool> seen(s.degree(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    int v = images[i] - 1;
    if (v < 0 || v >= static_cast<int>(s.degree()) || seen[static_cast<std::size_t>(v)])
      fail(ErrorKind::invalid_element, "not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
    p[i] = static_cast<std::uint8_t>(v);
  }
  return Element{s.rank(p)};
}

std::vector<int> Group::permutation(Element e) const {
  if (kind() != Kind::symmetric) fail(ErrorKind::precondition, spec() + " is not a symmetric group");
  check(e);
  const auto& s = static_cast<const detail::SymmetricImpl&>(*impl_);
  const std::uint8_t* p = s.perm(e.rank);
  std::vector<int> out(s.degree());
  for (unsigned i = 0; i < s.degree(); ++i) out[i] = p[i] + 1;
  return out;
}

bool operator==(const Group& a, const Group& b) {
  return a.impl_ == b.impl_ || a.spec() == b.spec();
}

}  // namespace aplab
