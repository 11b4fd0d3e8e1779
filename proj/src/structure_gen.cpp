#include "aplab/structure_gen.hpp"

#include <algorithm>
#include <map>

#include "aplab/error.hpp"

namespace aplab {

namespace {

// Membership test with a dense bitmap when the group is small enough.
class Membership {
 public:
  explicit Membership(const GSet& s) : set_(&s) {
    if (s.group().order() <= (std::uint64_t{1} << 24)) {
      bits_.assign(s.group().order(), 0);
      for (Element e : s) bits_[e.rank] = 1;
    }
  }
  bool operator()(Element e) const { return bits_.empty() ? set_->contains(e) : bits_[e.rank] != 0; }

 private:
  const GSet* set_;
  std::vector<char> bits_;
};

Rational small_doubling(const GSet& s) {
  GSet wide = rewindow(s, scale_windows(s.group(), 2));
  std::size_t sum = product_set(wide, wide).size();
  std::size_t diff = difference_set(wide, wide).size();
  return ratio(std::min(sum, diff), s.size());
}

std::int64_t pow2(unsigned k) {
  if (k > 36) fail(ErrorKind::out_of_range, "2^k too large");
  return std::int64_t{1} << k;
}

}  // namespace

std::vector<Element> Progression::elements() const {
  std::vector<Element> out;
  out.reserve(length);
  Element x = base;
  for (std::uint64_t i = 0; i < length; ++i) {
    out.push_back(x);
    if (i + 1 < length) x = group.mul(x, step);
  }
  return out;
}

GSet Progression::as_set() const { return GSet(group, elements()); }

Progression symmetric_progression(const Group& g, Element step, std::uint64_t radius) {
  require_abelian(g, "progression");
  Progression p;
  p.group = g;
  p.step = step;
  p.length = 2 * radius + 1;
  p.symmetric = true;
  p.base = g.power(step, -static_cast<std::int64_t>(radius));
  return p;
}

Progression make_progression(const Group& g, Element base, Element step, std::uint64_t length) {
  require_abelian(g, "progression");
  Progression p;
  p.group = g;
  p.base = base;
  p.step = step;
  p.length = length;
  p.symmetric = false;
  return p;
}

bool is_valid_progression(const Progression& p) {
  if (p.length == 0 || p.step == p.group.identity()) return false;
  std::vector<Element> el;
  try {
    el = p.elements();
  } catch (const Error&) {
    return false;
  }
  std::vector<Element> sorted = el;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  if (p.symmetric) {
    if (p.length % 2 == 0) return false;
    auto mid = p.group.try_power(p.step, static_cast<std::int64_t>(p.radius()));
    if (!mid || p.group.try_mul(p.base, *mid) != p.group.identity()) return false;
  }
  return true;
}

Progression rewindow(const Progression& p, const Group& target) {
  Progression out = p;
  out.group = target;
  out.base = target.decode(p.group.encode(p.base));
  out.step = target.decode(p.group.encode(p.step));
  return out;
}

nlohmann::json to_json(const Progression& p, bool expand) {
  nlohmann::json j = {{"group", p.group.spec()},
                      {"base", p.group.encode(p.base)},
                      {"step", p.group.encode(p.step)},
                      {"length", p.length},
                      {"symmetric", p.symmetric}};
  if (expand) {
    nlohmann::json el = nlohmann::json::array();
    for (Element e : p.elements()) el.push_back(p.group.encode(e));
    j["elements"] = el;
  }
  return j;
}

DensityCheck lemma_density_condition(const GSet& a, const GSet& s, unsigned k) {
  DensityCheck out;
  out.K = small_doubling(s);
  out.delta = ratio(a.size(), s.size());
  Rational lhs = pow(out.delta, 2 * (k + 1)) * Rational(static_cast<unsigned long>(s.size() * s.size()));
  out.holds = lhs > pow(out.K, 3 * static_cast<unsigned long>(k) * (k + 1));
  return out;
}

IteratedDifferenceAp find_ap_in_iterated_difference(const GSet& a_in, const GSet& s, unsigned k, bool enforce_density) {
  require_same_group(a_in, s);
  require_abelian(a_in.group(), "find_ap_in_iterated_difference");
  if (k < 1) fail(ErrorKind::out_of_range, "k must be >= 1");
  if (!is_subset(a_in, s)) fail(ErrorKind::precondition, "A must be a subset of S");
  IteratedDifferenceAp out;
  out.k = k;
  out.density = lemma_density_condition(a_in, s, k);
  if (enforce_density && !out.density.holds)
    fail(ErrorKind::density_too_low, "density " + to_string(out.density.delta) + " too low for k = " +
                                         std::to_string(k) + " (K = " + to_string(out.density.K) + ")");
  if (a_in.size() < 2) fail(ErrorKind::no_collision, "A has fewer than two elements");

  const Group W = scale_windows(a_in.group(), 4 * pow2(k));
  const GSet a = rewindow(a_in, W);
  Membership in_a(a);

  std::optional<std::vector<Element>> best_x;
  Element best_a, best_b;
  for (std::size_t ia = 1; ia < a.size() && !best_x; ++ia) {
    for (std::size_t ib = 0; ib < ia; ++ib) {
      Element d = W.mul(a[ia], W.inverse(a[ib]));
      std::vector<Element> xs;
      Element shift = d;
      bool ok = true;
      for (unsigned j = 1; j <= k && ok; ++j) {
        shift = W.mul(shift, shift);
        Element neg = W.inverse(shift);
        ok = false;
        for (Element x : a) {
          auto y = W.try_mul(x, neg);
          if (y && in_a(*y)) {
            xs.push_back(x);
            ok = true;
            break;
          }
        }
      }
      if (!ok) continue;
      if (!best_x || xs < *best_x) {
        best_x = std::move(xs);
        best_a = a[ia];
        best_b = a[ib];
      }
    }
  }
  if (!best_x) fail(ErrorKind::no_collision, "no collision among tuples of A^" + std::to_string(k + 1));

  out.a = best_a;
  out.b = best_b;
  out.x = *best_x;
  Element d = W.mul(best_a, W.inverse(best_b));
  Element shift = d;
  for (unsigned j = 1; j <= k; ++j) {
    shift = W.mul(shift, shift);
    out.y.push_back(W.mul(out.x[j - 1], W.inverse(shift)));
  }

  std::uint64_t radius = static_cast<std::uint64_t>(pow2(k));
  if (auto ord = W.element_order(d); ord && 2 * radius + 1 > *ord) {
    std::uint64_t len = *ord % 2 == 1 ? *ord : *ord - 1;
    radius = (len - 1) / 2;
    out.degenerate = true;
  }
  out.progression = symmetric_progression(W, d, radius);
  GSet container = iterated_difference(a, k);
  out.verified = is_subset(out.progression.as_set(), container) && is_valid_progression(out.progression);
  return out;
}

std::optional<std::pair<std::vector<Element>, std::vector<Element>>> first_collision_streaming(const GSet& a_in,
                                                                                              unsigned k) {
  require_abelian(a_in.group(), "first_collision_streaming");
  const Group W = scale_windows(a_in.group(), 4 * pow2(k));
  const GSet a = rewindow(a_in, W);
  std::size_t n = a.size();
  if (n == 0) return std::nullopt;
  std::vector<Element> powers(k);  // 2^j a for the current a
  std::map<std::vector<std::uint64_t>, std::vector<Element>> seen;
  std::vector<std::size_t> idx(k + 1, 0);
  while (true) {
    Element first = a[idx[0]];
    Element p = first;
    std::vector<std::uint64_t> image(k);
    std::vector<Element> tuple{first};
    for (unsigned j = 1; j <= k; ++j) {
      p = W.mul(p, p);
      Element x = a[idx[j]];
      tuple.push_back(x);
      image[j - 1] = W.mul(x, W.inverse(p)).rank;
    }
    auto [it, inserted] = seen.emplace(image, tuple);
    if (!inserted && it->second.front() != first) return std::make_pair(it->second, tuple);
    std::size_t pos = k + 1;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < n) break;
      idx[pos] = 0;
      if (pos == 0) return std::nullopt;
    }
  }
}

DilateReport verify_dilate_bound(const GSet& a_in, unsigned k) {
  require_abelian(a_in.group(), "verify_dilate_bound");
  const Group W = scale_windows(a_in.group(), pow2(k) + 1);
  const GSet a = rewindow(a_in, W);
  DilateReport out;
  out.K = small_doubling(a_in);
  out.lhs = difference_set(a, dilate(pow2(k), a)).size();
  out.rhs = pow(out.K, 3 * static_cast<unsigned long>(k)) * Rational(static_cast<unsigned long>(a.size()));
  out.holds = Rational(static_cast<unsigned long>(out.lhs)) <= out.rhs;
  return out;
}

unsigned corollary_k(std::int64_t n, const Rational& alpha, const Rational& delta) {
  if (alpha <= 0 || alpha > 1) fail(ErrorKind::out_of_range, "alpha must lie in (0, 1]");
  if (n < 2) return 0;
  Integer k = certified_floor([&](unsigned bits) {
    Enclosure ln = log_enclosure(Rational(static_cast<long>(n)), bits);
    Enclosure l4 = log_enclosure(Rational(4) / alpha, bits);
    Enclosure q = Enclosure::exact(delta * delta) * ln / (Enclosure::exact(36) * l4);
    return root_enclosure(q, 3, bits);
  });
  return static_cast<unsigned>(k.get_ui());
}

AlmostPeriodAp ap_of_almost_periods(const GSet& a, std::int64_t n, const Rational& delta, const SearchConfig& cfg,
                                    std::optional<unsigned> k_override) {
  const Group& G = a.group();
  if (G.kind() != Group::Kind::integer_window) fail(ErrorKind::precondition, "A must live in an integer window");
  if (n < 1) fail(ErrorKind::out_of_range, "N must be positive");
  if (delta <= 0 || delta >= 1) fail(ErrorKind::precondition, "delta must lie in (0, 1)");
  if (a.empty()) fail(ErrorKind::precondition, "A is empty");
  for (auto v : a.integers())
    if (v < 1 || v > n) fail(ErrorKind::precondition, "A must lie in [1, N]");

  AlmostPeriodAp out;
  out.alpha = ratio(a.size(), static_cast<std::uint64_t>(n));
  out.delta = delta;
  out.K_derived = 2 / out.alpha;
  Rational r = delta * delta / 36;
  // alpha >= 4 N^{-r}; exact for small exponents, by log enclosures otherwise
  if (r.get_den() <= 256 && r.get_num() <= 256) {
    out.alpha_condition = pow(out.alpha / 4, r.get_den().get_ui()) *
                              Rational(pow(Integer(static_cast<long>(n)), r.get_num().get_ui())) >= 1;
  } else {
    out.alpha_condition = false;
    for (unsigned bits = 64; bits <= 1024; bits *= 2) {
      Enclosure e = Enclosure::exact(r) * log_enclosure(Rational(static_cast<long>(n)), bits) -
                    log_enclosure(4 / out.alpha, bits);
      if (e.lo >= 0) out.alpha_condition = true;
      if (e.lo >= 0 || e.hi < 0) break;
    }
  }
  out.derived_k = corollary_k(n, out.alpha, delta);
  out.k = k_override ? *k_override : out.derived_k;
  out.length_bound = exp_enclosure(
      Enclosure::exact(Rational(1, 14)) *
      root_enclosure(Enclosure::exact(delta * delta) * log_enclosure(Rational(static_cast<long>(n))) /
                         log_enclosure(Rational(4) / out.alpha),
                     3));
  if (out.k < 1)
    fail(ErrorKind::density_too_low, "k = 0 for N = " + std::to_string(n) + ", alpha = " + to_string(out.alpha) +
                                         "; supply a k override");
  out.epsilon = delta / static_cast<long>(out.k);
  out.target_length = 2 * static_cast<std::uint64_t>(pow2(out.k - 1) / out.k) + 1;

  out.working_group = widen_windows(G, (static_cast<std::int64_t>(out.k) + 3) * n);
  const Group& W = out.working_group;
  GSet aw = rewindow(a, W);
  GSet s = GSet::interval(W, 1, n);
  out.certificate = find_almost_periods(aw, aw, s, out.epsilon, 1, Side::right, cfg);

  std::optional<Error> last;
  for (unsigned lk = out.k; lk >= 1; --lk) {
    try {
      out.collision = find_ap_in_iterated_difference(out.certificate.T, s, lk, false);
      out.lemma_k = lk;
      last.reset();
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_collision) throw;
      last = e;
    }
  }
  if (last) throw *last;

  out.unclipped = rewindow(out.collision.progression, W);
  std::int64_t d = W.to_integer(out.unclipped.step);
  std::uint64_t fit = static_cast<std::uint64_t>((n / 2) / (d < 0 ? -d : d));
  out.progression = symmetric_progression(W, out.unclipped.step, std::min(out.unclipped.radius(), fit));

  Rational na(static_cast<unsigned long>(a.size()));
  out.defect_bound = delta * delta * na * na * na;
  ConvTable f = convolve_sets({aw, aw});
  out.max_defect = 0;
  for (Element t : out.progression.elements()) {
    Integer v = translation_defect(f, t, Side::right, 2).value;
    if (v > out.max_defect) out.max_defect = v;
  }
  out.verified = Rational(out.max_defect) <= out.defect_bound && is_valid_progression(out.progression);
  return out;
}

SubspaceReport generate_subspaces(const GSet& s, unsigned max_summands) {
  const Group& g = s.group();
  if (g.kind() != Group::Kind::vector_fp) fail(ErrorKind::precondition, "subspace generation needs F_p^n");
  std::size_t n = g.encoding_width();
  std::uint64_t p = 2;
  while (true) {
    std::uint64_t q = 1;
    for (std::size_t i = 0; i < n; ++i) q *= p;
    if (q == g.order()) break;
    ++p;
  }
  auto P = static_cast<std::int64_t>(p);
  auto modp = [P](std::int64_t v) { return ((v % P) + P) % P; };
  auto inv_mod = [&](std::int64_t v) {
    std::int64_t r = 1;
    for (std::int64_t e = P - 2, b = v; e > 0; e >>= 1, b = b * b % P)
      if (e & 1) r = r * b % P;
    return r;
  };

  SubspaceReport out;
  std::vector<std::vector<std::int64_t>> rows;  // echelon form
  std::vector<std::size_t> pivots;
  for (Element e : s) {
    auto v = g.encode(e);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::int64_t c = v[pivots[r]];
      if (c == 0) continue;
      for (std::size_t i = 0; i < n; ++i) v[i] = modp(v[i] - c * rows[r][i]);
    }
    auto it = std::find_if(v.begin(), v.end(), [](std::int64_t c) { return c != 0; });
    if (it == v.end()) continue;
    std::size_t piv = static_cast<std::size_t>(it - v.begin());
    std::int64_t inv = inv_mod(v[piv]);
    for (auto& c : v) c = c * inv % P;
    rows.push_back(v);
    pivots.push_back(piv);
    out.basis.push_back(e);
  }

  GSet sum = s;
  for (unsigned j = 1; j <= max_summands; ++j) {
    if (j > 1) sum = product_set(sum, s);
    SubspaceStep step{j, sum.size(), 0};
    for (std::size_t dim = 1; dim <= out.basis.size(); ++dim) {
      std::vector<std::int64_t> coeff(dim, 0);
      bool all = true;
      while (all) {
        Element x = g.identity();
        for (std::size_t i = 0; i < dim; ++i) x = g.mul(x, g.power(out.basis[i], coeff[i]));
        if (!sum.contains(x)) all = false;
        std::size_t pos = 0;
        while (pos < dim && ++coeff[pos] == P) coeff[pos++] = 0;
        if (pos == dim) break;
      }
      if (!all) break;
      step.contained_dimension = static_cast<unsigned>(dim);
    }
    out.steps.push_back(step);
  }
  return out;
}

}  // namespace aplab
