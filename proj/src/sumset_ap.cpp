#include <algorithm>
#include <unordered_set>

#include "aplab/applications.hpp"
#include "aplab/error.hpp"

namespace aplab {

namespace {

struct RankHash {
  std::size_t operator()(Element e) const noexcept { return std::hash<std::uint64_t>{}(e.rank); }
};

Progression trivial_progression(const GSet& x, const Group& out_group) {
  const Group& g = out_group;
  Element base = g.decode(x.group().encode(x[0]));
  Element step = g.kind() == Group::Kind::integer_window ? g.from_integer(1)
                                                         : Element{g.identity().rank == 0 ? 1u : 0u};
  Progression p;
  p.group = g;
  p.base = base;
  p.step = step;
  p.length = 1;
  return p;
}

// floor((1/10) q^{1/4}) for q given by enclosures.
template <typename Q>
unsigned quarter_root_k(Q&& q) {
  Integer k = certified_floor([&](unsigned bits) {
    Enclosure e = q(bits);
    if (e.lo < 0) e.lo = 0;
    return Enclosure::exact(Rational(1, 10)) * root_enclosure(e, 4, bits);
  });
  return static_cast<unsigned>(k.get_ui());
}

// The shared tail: almost-periods T, a progression in kT - kT, and its
// translate inside A + B.
SumsetApResult finish_sumset(SumsetApResult out, const GSet& a, const GSet& b, const GSet& s,
                             const SearchConfig& cfg) {
  const Group& G = a.group();
  Group out_group = scale_windows(G, 2);
  if (out.k < 1) {
    GSet sum = product_set(rewindow(a, out_group), rewindow(b, out_group));
    out.progression = trivial_progression(sum, out_group);
    out.trivial = true;
    out.contained = true;
    out.target_length = 1;
    return out;
  }
  if (out.k > 20) fail(ErrorKind::out_of_range, "k too large");
  unsigned n = 1u << (out.k + 1);
  out.target_length = n;
  out.structure = ab_struct_pipeline(a, b, s, out.k, n, cfg, 0);
  const AbStructResult& st = *out.structure;
  GSet s_w = rewindow(s, st.T.group());

  std::optional<Error> last;
  for (unsigned lk = out.k; lk >= 1; --lk) {
    try {
      out.collision = find_ap_in_iterated_difference(st.T, s_w, lk, false);
      out.lemma_k = lk;
      last.reset();
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_collision) throw;
      last = e;
    }
  }
  if (last) throw *last;

  const Progression& sym = out.collision->progression;
  const Group& W = sym.group;
  // {-R d, ..., (R - 1) d}: 2R terms of the symmetric progression.
  std::uint64_t len = std::max<std::uint64_t>(1, sym.length - 1);
  Progression p = make_progression(W, sym.base, sym.step, len);
  GSet ab = product_set(rewindow(a, W), rewindow(b, W));
  auto x = find_left_translate(ab, p.elements());
  if (!x)
    fail(ErrorKind::translate_not_found, "A + B contains no translate of the progression with step " +
                                              W.format(p.step));
  Progression found = make_progression(W, W.mul(*x, p.base), p.step, p.length);
  out.contained = is_subset(found.as_set(), ab);
  out.progression = rewindow(found, out_group);
  return out;
}

}  // namespace

SumsetApResult ap_in_sumset(const GSet& a, const GSet& b, std::int64_t n, const SearchConfig& cfg,
                            std::optional<unsigned> k_override) {
  require_same_group(a, b);
  const Group& G = a.group();
  if (G.kind() != Group::Kind::integer_window) fail(ErrorKind::precondition, "A, B must live in an integer window");
  if (n < 1 || n > G.window_bound()) fail(ErrorKind::out_of_range, "N must lie in [1, window bound]");
  if (a.empty() || b.empty()) fail(ErrorKind::precondition, "A and B must be non-empty");
  for (const GSet* x : {&a, &b})
    for (auto v : x->integers())
      if (v < 1 || v > n) fail(ErrorKind::precondition, "A and B must lie in [1, N]");

  SumsetApResult out;
  Rational alpha = ratio(a.size(), static_cast<std::uint64_t>(n));
  Rational beta = ratio(b.size(), static_cast<std::uint64_t>(n));
  out.K1 = 2 / alpha;
  out.K2 = 2 / alpha;
  out.derived_k = n < 2 ? 0 : quarter_root_k([&](unsigned bits) {
    return Enclosure::exact(alpha) * log_enclosure(Rational(static_cast<long>(n)), bits) /
           log_enclosure(4 / beta, bits);
  });
  out.k = k_override ? *k_override : out.derived_k;
  return finish_sumset(std::move(out), a, b, GSet::interval(G, 1, n), cfg);
}

SumsetApResult ap_in_small_sumset(const GSet& a, const GSet& b, const SearchConfig& cfg,
                                  std::optional<unsigned> k_override) {
  require_same_group(a, b);
  require_abelian(a.group(), "ap_in_small_sumset");
  if (a.empty() || b.empty()) fail(ErrorKind::precondition, "A and B must be non-empty");
  Group wide = scale_windows(a.group(), 2);
  GSet aw = rewindow(a, wide), bw = rewindow(b, wide);
  std::size_t sum = product_set(aw, bw).size();
  SumsetApResult out;
  out.K1 = ratio(sum, a.size());
  out.K2 = ratio(sum, b.size());
  Rational na(static_cast<unsigned long>(a.size()));
  out.plunnecke_ok = Rational(static_cast<unsigned long>(product_set(aw, aw).size())) <= out.K1 * out.K2 * out.K2 * na;
  out.derived_k = a.size() < 2 ? 0 : quarter_root_k([&](unsigned bits) {
    return log_enclosure(na, bits) / (Enclosure::exact(out.K1) * log_enclosure(2 * out.K2, bits));
  });
  out.k = k_override ? *k_override : out.derived_k;
  return finish_sumset(std::move(out), a, b, a, cfg);
}

Progression longest_ap_oracle(const GSet& x_in) {
  require_abelian(x_in.group(), "longest_ap_oracle");
  if (x_in.empty()) fail(ErrorKind::precondition, "X is empty");
  const Group& G = x_in.group();
  const bool window = G.kind() == Group::Kind::integer_window;
  Group W = scale_windows(G, 2);
  GSet x = rewindow(x_in, W);
  Progression best = trivial_progression(x_in, G);
  if (x.size() == 1) return best;

  std::unordered_set<Element, RankHash> members(x.begin(), x.end());
  auto in_x = [&](std::optional<Element> e) { return e && members.count(*e) > 0; };

  std::vector<Element> steps;
  for (Element d : difference_set(x, x)) {
    if (d == W.identity()) continue;
    Element neg = W.inverse(d);
    bool canonical = window ? W.to_integer(d) > 0 : d.rank < neg.rank;
    if (canonical) steps.push_back(d);
  }
  std::sort(steps.begin(), steps.end());

  std::uint64_t best_len = 1;
  Element best_base = x[0], best_step{};
  for (Element d : steps) {
    Element neg = W.inverse(d);
    std::unordered_set<Element, RankHash> covered;
    std::uint64_t len_d = 0;
    Element base_d{};
    for (Element s : x) {
      if (in_x(W.try_mul(s, neg))) continue;
      std::uint64_t len = 0;
      std::optional<Element> cur = s;
      while (in_x(cur)) {
        covered.insert(*cur);
        ++len;
        cur = W.try_mul(*cur, d);
      }
      if (len > len_d) {
        len_d = len;
        base_d = s;
      }
    }
    if (covered.size() < x.size()) {
      auto ord = W.element_order(d);
      if (ord && *ord > len_d) {
        for (Element s : x)
          if (!covered.count(s)) {
            len_d = *ord;
            base_d = s;
            break;
          }
      }
    }
    if (len_d > best_len) {
      best_len = len_d;
      best_base = base_d;
      best_step = d;
    }
  }
  if (best_len == 1) return best;
  Progression p = make_progression(W, best_base, best_step, best_len);
  return rewindow(p, G);
}

}  // namespace aplab
