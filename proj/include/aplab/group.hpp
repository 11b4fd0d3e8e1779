#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aplab {

/// A group element, stored as its canonical rank: the position of its
/// canonical integer tuple in lexicographic order. Ranks compare exactly as
/// the tuples do, so sorting by rank is sorting by canonical encoding. The
/// tuple form is available through Group::encode / Group::decode.
struct Element {
  std::uint64_t rank = 0;

  friend auto operator<=>(Element, Element) = default;
};

enum class Side { left, right };

const char* to_string(Side side) noexcept;
Side parse_side(std::string_view text);

namespace detail {
class GroupImpl;
}

/// A concrete group from a fixed menu: a windowed copy of Z, Z/N, F_p^n,
/// S_n (n <= 8), the dihedral group of order 2n, and direct products of
/// these. Cheap to copy; immutable.
///
/// Canonical encodings:
///   Z_window:B  (v)                with |v| <= B
///   Z%N         (r)                with 0 <= r < N
///   F:p^n       (x_1, ..., x_n)    residues mod p
///   S:n         Lehmer code (c_1, ..., c_n), 0 <= c_i <= n - i
///   D:n         (rotation, reflection bit)
///   products    concatenation of the factors' tuples
///
/// Permutations multiply as functions: (ab)(i) = a(b(i)). Dihedral elements
/// are rho^r sigma^s with sigma rho sigma = rho^-1.
class Group {
 public:
  enum class Kind { integer_window, cyclic, vector_fp, symmetric, dihedral, direct_product };

  /// The trivial group Z/1.
  Group();

  static Group integer_window(std::int64_t bound);
  static Group cyclic(std::uint64_t n);
  static Group vector_fp(std::uint64_t p, unsigned n);
  static Group symmetric(unsigned n);
  static Group dihedral(std::uint64_t n);
  static Group direct_product(std::vector<Group> factors);
  /// Parses the spec strings used by set files, e.g. "Z%7", "S:4",
  /// "Z_window:100", "F:3^2", "D:8xZ%5".
  static Group parse(std::string_view spec);

  Kind kind() const;
  std::string spec() const;
  bool abelian() const;
  /// Number of encodable elements (2B + 1 for a window).
  std::uint64_t order() const;
  /// True when some factor is a window, i.e. multiplication is partial.
  bool windowed() const;
  std::size_t encoding_width() const;
  const std::vector<Group>& factors() const;

  Element identity() const;
  bool valid(Element e) const { return e.rank < order(); }
  void check(Element e) const;

  /// nullopt exactly when the product leaves an integer window.
  std::optional<Element> try_mul(Element a, Element b) const;
  Element mul(Element a, Element b) const;
  Element inverse(Element a) const;
  std::optional<Element> try_power(Element a, std::int64_t n) const;
  Element power(Element a, std::int64_t n) const;
  /// Order of a in the group; nullopt for infinite order (window, a != e).
  std::optional<std::uint64_t> element_order(Element a) const;

  std::vector<std::int64_t> encode(Element e) const;
  Element decode(std::span<const std::int64_t> tuple) const;
  std::string format(Element e) const;

  /// Window-only conveniences.
  std::int64_t window_bound() const;
  Element from_integer(std::int64_t v) const;
  std::int64_t to_integer(Element e) const;

  /// Symmetric-only conveniences; images are 1-based.
  Element from_permutation(std::span<const int> images) const;
  std::vector<int> permutation(Element e) const;

  friend bool operator==(const Group& a, const Group& b);

 private:
  explicit Group(std::shared_ptr<const detail::GroupImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::GroupImpl> impl_;
};

}  // namespace aplab
