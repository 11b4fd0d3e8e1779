// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance        run all criteria
//   acceptance N      run criterion N only

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "aplab/applications.hpp"
#include "aplab/commands.hpp"
#include "aplab/conv_table.hpp"
#include "aplab/error.hpp"
#include "aplab/moments.hpp"
#include "aplab/report.hpp"
#include "oracles.hpp"

using namespace aplab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> problems;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (problems.size() < 5) problems.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SearchConfig seeded(std::uint64_t seed) {
  SearchConfig cfg;
  cfg.seed = seed;
  return cfg;
}

Rational rat(std::size_t v) { return Rational(static_cast<unsigned long>(v)); }

GSet multiples(const Group& g, std::int64_t d) {
  std::vector<std::int64_t> v;
  for (std::int64_t x = 0; x < static_cast<std::int64_t>(g.order()); x += d) v.push_back(x);
  return GSet::from_integers(g, v);
}

// f = 1_A*1_B by pair enumeration, dense over ranks
std::vector<std::int64_t> dense_pairs(const GSet& a, const GSet& b) {
  const Group& g = a.group();
  std::vector<std::int64_t> f(g.order(), 0);
  for (Element x : a)
    for (Element y : b)
      if (auto p = g.try_mul(x, y)) ++f[p->rank];
  return f;
}

Integer dense_defect(const std::vector<std::int64_t>& f, const Group& g, Element t, Side side, unsigned p) {
  Integer total = 0;
  for (std::uint64_t r = 0; r < g.order(); ++r) {
    Element x{r};
    auto y = side == Side::left ? g.try_mul(t, x) : g.try_mul(x, t);
    std::int64_t d = (y ? f[y->rank] : 0) - f[r];
    Integer v = d < 0 ? -d : d;
    Integer pw = 1;
    for (unsigned i = 0; i < p; ++i) pw *= v;
    total += pw;
  }
  return total;
}

GSet pair_products(const GSet& a, const GSet& b) {
  std::vector<Element> out;
  for (Element x : a)
    for (Element y : b)
      if (auto p = a.group().try_mul(x, y)) out.push_back(*p);
  return GSet(a.group(), out);
}

GSet inverses(const GSet& a) {
  std::vector<Element> out;
  for (Element x : a) out.push_back(a.group().inverse(x));
  return GSet(a.group(), out);
}

// ---------------------------------------------------------------------------

bool ac1(Outcome& o) {
  std::size_t instances = 0;
  auto identities = [&](const GSet& a, const GSet& b, const GSet& c, bool assoc) {
    const Group& g = a.group();
    ConvTable fa = ConvTable::indicator(a), fb = ConvTable::indicator(b), fc = ConvTable::indicator(c);
    ConvTable ab = convolve(fa, fb);
    o.check(ab.total() == Integer(static_cast<unsigned long>(a.size() * b.size())), "full sum on " + g.spec());
    o.check(reflect(ab) == convolve(reflect(fb), reflect(fa)), "reflection of a product on " + g.spec());
    o.check(reflect(fa) == ConvTable::indicator(inverses(a)), "reflection of an indicator on " + g.spec());
    for (std::uint64_t r = 0; r < g.order(); ++r)
      if (ab.at(Element{r}) != oracle::intersection_count(a, b, Element{r})) {
        o.check(false, "pointwise intersection count on " + g.spec());
        break;
      }
    if (assoc) o.check(convolve(ab, fc) == convolve(fa, convolve(fb, fc)), "associativity on " + g.spec());
    ++instances;
  };

  // randomized: every group kind, orders <= 64
  std::vector<std::string> specs{"Z_window:31", "Z%64", "Z%37", "F:2^6", "F:7^2", "S:4",
                                 "D:32",        "D:9",  "Z%4xS:3", "D:4xF:2^2", "Z_window:10xZ%3"};
  Rng rng(0xac1);
  for (std::size_t i = 0; i < 550; ++i) {
    Group g = Group::parse(specs[i % specs.size()]);
    auto pick = [&] { return oracle::random_set(g, 1 + rng.below(3), 4, rng); };
    // windowed groups: keep triple products inside the window
    GSet a, b, c;
    if (g.kind() == Group::Kind::integer_window) {
      a = random_subset(GSet::interval(g, -10, 10), 1, 2, rng);
      b = random_subset(GSet::interval(g, -10, 10), 1, 2, rng);
      c = random_subset(GSet::interval(g, -10, 10), 1, 2, rng);
      if (a.empty() || b.empty() || c.empty()) a = b = c = GSet::interval(g, 0, 3);
    } else if (g.windowed()) {
      std::vector<std::vector<std::int64_t>> ta, tb, tc;
      for (int v = -3; v <= 3; ++v)
        for (int z = 0; z < 3; ++z) {
          if (rng.coin(1, 2)) ta.push_back({v, z});
          if (rng.coin(1, 2)) tb.push_back({v, z});
          if (rng.coin(1, 2)) tc.push_back({v, z});
        }
      ta.push_back({0, 0});
      tb.push_back({1, 1});
      tc.push_back({-1, 2});
      a = GSet::from_tuples(g, ta);
      b = GSet::from_tuples(g, tb);
      c = GSet::from_tuples(g, tc);
    } else {
      a = pick();
      b = pick();
      c = pick();
    }
    identities(a, b, c, true);
  }
  std::size_t random_count = instances;

  // exhaustive: every pair of subsets of Z/8, S3, D4; associativity on all
  // triples for S3 and on all (A, B, {z}) for Z/8 and D4, which by
  // bilinearity covers every triple of functions
  for (const char* spec : {"Z%8", "S:3", "D:4"}) {
    Group g = Group::parse(spec);
    std::size_t n = g.order();
    std::vector<GSet> subsets;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<Element> e;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) e.push_back(Element{i});
      subsets.emplace_back(g, e);
    }
    bool s3 = std::string(spec) == "S:3";
    for (const auto& a : subsets)
      for (const auto& b : subsets) {
        identities(a, b, a, false);
        if (s3) {
          ConvTable ab = convolve(ConvTable::indicator(a), ConvTable::indicator(b));
          for (const auto& c : subsets)
            if (convolve(ab, ConvTable::indicator(c)) !=
                convolve(ConvTable::indicator(a), convolve(ConvTable::indicator(b), ConvTable::indicator(c))))
              o.check(false, "associativity on S:3");
        } else {
          ConvTable ab = convolve(ConvTable::indicator(a), ConvTable::indicator(b));
          for (std::size_t z = 0; z < n; ++z) {
            ConvTable d = ConvTable::delta(g, Element{z});
            if (convolve(ab, d) != convolve(ConvTable::indicator(a), convolve(ConvTable::indicator(b), d)))
              o.check(false, std::string("associativity on ") + spec);
          }
        }
      }
  }
  o.check(random_count >= 500, "fewer than 500 random instances");
  o.detail << "random=" << random_count << " exhaustive_pairs=" << instances - random_count;
  return o.pass;
}

bool ac2(Outcome& o) {
  auto ten = r3_exhaustive(10);
  o.check(ten.value == 5, "r3(10) != 5");
  std::vector<std::int64_t> w(ten.witness.begin(), ten.witness.end());
  o.check(oracle::progression_free(w) && w.size() == 5, "witness for r3(10) is not a 3AP-free 5-set");
  auto table = r3_table(12);
  std::ostringstream vals;
  for (unsigned n = 1; n <= 12; ++n) {
    unsigned v = table[n - 1].value;
    vals << (n > 1 ? "," : "") << v;
    o.check(v == oracle::r3_subsets(n), "r3(" + std::to_string(n) + ") disagrees with subset enumeration");
    std::vector<std::int64_t> wn(table[n - 1].witness.begin(), table[n - 1].witness.end());
    o.check(wn.size() == v && oracle::progression_free(wn), "bad witness at " + std::to_string(n));
    if (n > 1) {
      unsigned prev = table[n - 2].value;
      o.check(prev <= v && v <= prev + 1, "r3 not monotone with unit steps at " + std::to_string(n));
    }
  }
  o.detail << "r3(10)=" << ten.value << " r3(1..12)=" << vals.str();
  return o.pass;
}

// Checks a certificate against brute force, independently of the library's
// verifier: K, the defect bound at every t in T.T^-1 (left) or T^-1.T
// (right), and the size target.
struct CertCheck {
  bool sound = true, size = true, consistent = true;
  Rational worst_ratio = 0;
};

CertCheck check_certificate(const PeriodCertificate& c, const Rational& tau) {
  CertCheck out;
  const Group& g = c.A.group();
  bool left = c.side == Side::left;
  unsigned p = 2 * c.m;
  auto f = dense_pairs(c.A, c.B);
  Rational na = rat(c.A.size()), nb = rat(c.B.size());
  Rational bound;
  if (c.m == 1) {
    bound = left ? c.epsilon * c.epsilon * na * na * nb : c.epsilon * c.epsilon * nb * nb * na;
  } else {
    Rational own = left ? na : nb;
    Integer mnorm = 0;
    std::size_t support = 0;
    for (auto v : f)
      if (v) {
        ++support;
        Integer pw = 1;
        for (unsigned i = 0; i < c.m; ++i) pw *= v;
        mnorm += pw;
      }
    Rational em = pow(c.epsilon, c.m);
    Rational first = em * rat(support) * pow(own, c.m), second(mnorm);
    bound = (first > second ? first : second) * em * pow(own, c.m);
  }
  out.consistent = bound == c.bound_rhs;
  Rational K = left ? rat(pair_products(c.S, c.A).size()) / na : rat(pair_products(c.B, c.S).size()) / nb;
  out.consistent = out.consistent && K == c.K;
  GSet tt = pair_products(c.T, inverses(c.T));
  for (Element t : tt) {
    Rational d(dense_defect(f, g, t, c.side, p));
    if (d > bound) out.sound = false;
    if (bound > 0 && d / bound > out.worst_ratio) out.worst_ratio = d / bound;
  }
  if (!c.trivial) out.size = rat(c.T.size()) * pow(2 * K, c.k) >= tau * rat(c.S.size());
  return out;
}

bool ac3(Outcome& o) {
  const Rational eps(19, 20), tau(1, 2);
  std::size_t certs = 0, exhausted = 0, trivial = 0, total = 0;
  Rational worst = 0, max_growth = 0;
  auto run = [&](const GSet& a, const GSet& b, const GSet& s, Side side, std::uint64_t seed) {
    ++total;
    SearchConfig cfg = seeded(seed);
    cfg.target_fraction = tau;
    try {
      auto c = find_almost_periods(a, b, s, eps, 1, side, cfg);
      ++certs;
      if (c.trivial) ++trivial;
      Rational growth = pow(2 * c.K, c.k);
      if (growth > max_growth) max_growth = growth;
      o.check(growth <= 1000, "(2K)^k above 1000");
      auto chk = check_certificate(c, tau);
      o.check(chk.sound, "unsound certificate, seed " + std::to_string(seed));
      o.check(chk.size, "size target missed, seed " + std::to_string(seed));
      o.check(chk.consistent, "certificate K or bound mismatch, seed " + std::to_string(seed));
      o.check(verify_certificate(c).ok(), "library verifier rejects, seed " + std::to_string(seed));
      if (chk.worst_ratio > worst) worst = chk.worst_ratio;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::attempts_exhausted)
        ++exhausted;
      else
        o.check(false, std::string("error: ") + e.what());
    }
  };

  Rng rng(0xac3);
  const std::int64_t sizes[] = {32, 64, 96, 128, 160, 192, 224, 256};
  for (int i = 0; i < 50; ++i) {
    std::int64_t n = sizes[i % 8];
    Group g = Group::cyclic(n);
    std::int64_t index = n >= 128 ? 4 : 2;
    GSet h = multiples(g, index);
    // drop at most 5% of H so that K <= 20/19
    std::size_t drop = h.size() / 20;
    GSet core = h;
    for (std::size_t j = 0; j < drop; ++j) core = set_minus(core, GSet::singleton(g, core[1 + rng.below(core.size() - 1)]));
    GSet other = oracle::random_set(g, 1, 3, rng);
    GSet s = random_subset(h, 3, 4, rng);
    if (s.empty()) s = h;
    if (i % 2 == 0)
      run(core, other, s, Side::left, 1000 + i);
    else
      run(other, core, s, Side::right, 1000 + i);
  }
  // non-abelian: S4 and D8
  Group s4 = Group::symmetric(4), d8 = Group::dihedral(8);
  for (int i = 0; i < 10; ++i) {
    const Group& g = i < 6 ? s4 : d8;
    GSet all = GSet::whole(g);
    GSet a = i % 2 ? set_minus(all, GSet::singleton(g, Element{1 + rng.below(g.order() - 1)})) : all;
    GSet b = oracle::random_set(g, 1, 2, rng);
    GSet s = random_subset(all, 1, 2, rng);
    if (s.empty()) s = all;
    if (i % 3 == 2)
      run(b, a, s, Side::right, 2000 + i);
    else
      run(a, b, s, Side::left, 2000 + i);
  }
  o.check(exhausted * 20 <= total, "attempts exhausted on more than 5% of instances");
  o.detail << "instances=" << total << " certificates=" << certs << " exhausted=" << exhausted
           << " trivial=" << trivial << " max_(2K)^k=" << max_growth.get_d()
           << " worst_defect/bound=" << worst.get_d();
  return o.pass;
}

bool ac4(Outcome& o) {
  const Rational eps(19, 20), tau(1, 2);
  std::size_t certs = 0, exhausted = 0, trivial = 0, findings = 0, total = 0;
  Rng rng(0xac4);
  for (int i = 0; i < 20; ++i) {
    unsigned m = i % 2 ? 3 : 2;
    GSet a, b, s;
    Side side = i % 4 < 2 ? Side::left : Side::right;
    if (i < 6) {
      // sampling branch: |A| >= 2k needs |A| >= 208 (m = 2) or 310 (m = 3)
      Group g = Group::cyclic(m == 2 ? 512 : 1024);
      GSet h = multiples(g, 2);
      GSet other = random_subset(h, 1, 8, rng);
      if (other.empty()) other = h;
      a = side == Side::left ? h : other;
      b = side == Side::left ? other : h;
      s = random_subset(h, 1, 2, rng);
    } else {
      Group g = Group::cyclic(32 + 16 * (i % 7));
      a = oracle::random_set(g, 1, 2, rng);
      b = oracle::random_set(g, 1, 2, rng);
      s = oracle::random_set(g, 1, 2, rng);
    }
    ++total;
    SearchConfig cfg = seeded(4000 + i);
    cfg.target_fraction = tau;
    try {
      auto c = find_almost_periods(a, b, s, eps, m, side, cfg);
      ++certs;
      if (c.trivial) ++trivial;
      auto chk = check_certificate(c, tau);
      o.check(chk.sound, "unsound L^2m certificate, instance " + std::to_string(i));
      o.check(chk.size, "size target missed, instance " + std::to_string(i));
      o.check(chk.consistent, "bound mismatch, instance " + std::to_string(i));
      // lambda = 2 (m|A|/k)^m sum_{x in AB} (3 f(x) + m|A|/k)^m, recomputed
      const GSet& own = side == Side::left ? c.A : c.B;
      const GSet& other = side == Side::left ? c.B : c.A;
      GSet la = side == Side::left ? own : inverses(own);
      GSet lb = side == Side::left ? other : inverses(other);
      auto f = dense_pairs(la, lb);
      Rational q = Rational(static_cast<unsigned long>(m) * la.size(), static_cast<unsigned long>(c.k));
      q.canonicalize();
      Rational sum = 0;
      for (auto v : f)
        if (v) sum += pow(3 * Rational(v) + q, m);
      Rational lambda = 2 * pow(q, m) * sum;
      auto lc = check_lambda_estimate(la, lb, c.k, m);
      o.check(lc.lambda == lambda, "lambda formula mismatch, instance " + std::to_string(i));
      if (!lc.holds) {
        ++findings;
        std::printf("finding: stated lambda estimate fails on instance %d\n", i);
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::attempts_exhausted)
        ++exhausted;
      else
        o.check(false, std::string("error: ") + e.what());
    }
  }
  o.check(exhausted * 20 <= total, "attempts exhausted on more than 5% of instances");
  o.detail << "instances=" << total << " certificates=" << certs << " trivial=" << trivial
           << " exhausted=" << exhausted << " lambda_findings=" << findings
           << " note=(2K)^k<=1e3 is unreachable for m>=2 (k>=98)";
  return o.pass;
}

bool ac5(Outcome& o) {
  std::vector<std::pair<std::string, GSet>> cases;
  auto add = [&](std::string name, GSet a) { cases.emplace_back(std::move(name), std::move(a)); };
  Group z60 = Group::cyclic(60), z96 = Group::cyclic(96), z128 = Group::cyclic(128), z40 = Group::cyclic(40);
  Group d8 = Group::dihedral(8);
  add("subgroup 60/3", multiples(z60, 3));
  add("subgroup 60/5", multiples(z60, 5));
  add("subgroup 96/2", multiples(z96, 2));
  add("subgroup 128/4", multiples(z128, 4));
  add("subgroup 40/1", GSet::whole(z40));
  add("AP 96 step 1", GSet::interval(z96, 0, 19));
  add("AP 96 step 5", GSet::from_integers(z96, {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55}));
  add("AP 128 step 3", GSet::from_integers(z128, {1, 4, 7, 10, 13, 16, 19, 22, 25, 28, 31, 34, 37, 40}));
  add("AP 60 step 7", GSet::from_integers(z60, {0, 7, 14, 21, 28, 35, 42, 49}));
  add("AP 128 long", GSet::interval(z128, 10, 49));
  add("cosets 60", set_union(multiples(z60, 6), translate(Element{1}, multiples(z60, 6), Side::left)));
  add("cosets 96", set_union(multiples(z96, 8), translate(Element{3}, multiples(z96, 8), Side::left)));
  add("cosets 128", set_union(multiples(z128, 4), translate(Element{2}, multiples(z128, 4), Side::left)));
  add("cosets 40", set_union(multiples(z40, 5), translate(Element{1}, multiples(z40, 5), Side::left)));
  std::vector<Element> rot, refl;
  for (std::uint64_t r = 0; r < d8.order(); ++r) (d8.encode(Element{r})[1] == 0 ? rot : refl).push_back(Element{r});
  add("D8 rotations", GSet(d8, rot));
  add("D8 whole", GSet::whole(d8));
  std::vector<Element> half;
  for (Element e : rot)
    if (d8.encode(e)[0] % 2 == 0) half.push_back(e);
  add("D8 even rotations", GSet(d8, half));
  std::vector<Element> two = half;
  two.push_back(refl[0]);
  for (Element e : half) two.push_back(d8.mul(refl[0], e));
  add("D8 coset union", GSet(d8, two));
  std::vector<Element> rr{rot[0], rot[4], refl[0], refl[4]};
  add("D8 Klein", GSet(d8, rr));
  add("D8 rotation coset union", set_union(GSet(d8, rot), GSet(d8, {refl[1]})));

  std::size_t checked = 0;
  Rational min_ratio = -1;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [name, a] = cases[i];
    GSet a2 = pair_products(a, a);
    if (a2.size() > 4 * a.size()) {
      o.check(false, name + ": |A^2| > 4|A|, bad instance");
      continue;
    }
    unsigned k = i % 3 == 0 ? 2 : 1;
    try {
      auto r = core_set_pipeline(a, k, seeded(5000 + i));
      const Group& g = r.S.group();
      GSet aw = rewindow(a, g);
      GSet ai = inverses(aw);
      GSet container = pair_products(pair_products(aw, aw), pair_products(ai, ai));
      GSet sk = GSet::singleton(g, g.identity());
      for (unsigned j = 0; j < k; ++j) sk = pair_products(sk, r.S);
      o.check(r.S == inverses(r.S), name + ": S not symmetric");
      o.check(r.S.contains(g.identity()), name + ": identity missing");
      o.check(is_subset(sk, container), name + ": S^k not inside A^2 A^-2");
      o.check(sk == r.S_k, name + ": S^k mismatch");
      // representation counts from the 4-fold convolution by pair tables
      std::map<std::uint64_t, std::int64_t> left, right, four;
      for (Element x : aw)
        for (Element y : aw) ++left[g.mul(x, y).rank];
      for (Element x : ai)
        for (Element y : ai) ++right[g.mul(x, y).rank];
      for (auto [u, cu] : left)
        for (auto [v, cv] : right) four[g.mul(Element{u}, Element{v}).rank] += cu * cv;
      Rational K = rat(a2.size()) / rat(a.size());
      Rational need = rat(a.size()) * rat(a.size()) * rat(a.size()) / (2 * K);
      for (Element x : sk) {
        Rational have(four[x.rank]);
        o.check(have >= need, name + ": too few representations");
        if (min_ratio < 0 || have / need < min_ratio) min_ratio = have / need;
      }
      ++checked;
    } catch (const Error& e) {
      o.check(false, name + ": " + e.what());
    }
  }
  o.detail << "instances=" << cases.size() << " verified=" << checked
           << " min_representations/bound=" << min_ratio.get_d();
  return o.pass;
}

GSet naive_k_difference(const GSet& a, unsigned k) {
  const Group& g = a.group();
  GSet d = GSet::singleton(g, g.identity());
  GSet amb = pair_products(a, inverses(a));
  for (unsigned i = 0; i < k; ++i) d = pair_products(d, amb);
  return d;
}

bool ac6(Outcome& o) {
  Rng rng(0xac6);
  std::size_t count = 0, degenerate = 0;
  std::uint64_t min_len = ~0ull;
  for (int i = 0; i < 30; ++i) {
    GSet a, s;
    unsigned k;
    if (i < 20) {
      std::uint64_t p = i % 3 == 0 ? 101 : i % 3 == 1 ? 127 : 211;
      Group g = Group::cyclic(p);
      s = GSet::whole(g);
      k = 1 + i % 3;
      a = random_subset(s, 1, 2, rng);
    } else {
      Group w = Group::integer_window(200);
      s = GSet::interval(w, 1, 64);
      k = 1;
      a = random_subset(s, 4, 5, rng);
    }
    auto dc = lemma_density_condition(a, s, k);
    if (!dc.holds) {
      o.check(false, "instance " + std::to_string(i) + " misses the density precondition");
      continue;
    }
    try {
      auto r = find_ap_in_iterated_difference(a, s, k, true);
      const Progression& p = r.progression;
      const Group& g = p.group;
      GSet aw = rewindow(a, g);
      GSet container = naive_k_difference(aw, k);
      GSet elems = p.as_set();
      o.check(elems.size() == p.length, "repeated elements, instance " + std::to_string(i));
      o.check(p.length >= (2u << k), "progression shorter than 2^{k+1}, instance " + std::to_string(i));
      o.check(is_subset(elems, container), "progression leaves kA-kA, instance " + std::to_string(i));
      o.check(pair_products(aw, inverses(aw)).contains(p.step), "step not in A-A, instance " + std::to_string(i));
      // symmetric: closed under negation and centred at 0
      o.check(elems == inverses(elems) && elems.contains(g.identity()), "not symmetric, instance " + std::to_string(i));
      if (r.degenerate) ++degenerate;
      min_len = std::min<std::uint64_t>(min_len, p.length);
      ++count;
    } catch (const Error& e) {
      o.check(false, "instance " + std::to_string(i) + ": " + e.what());
    }
  }
  o.detail << "instances=30 verified=" << count << " degenerate=" << degenerate << " min_length=" << min_len;
  return o.pass;
}

bool ac7(Outcome& o) {
  Rng rng(0xac7);
  std::size_t runs = 0, trivial = 0, with_k = 0, forced_conditional = 0;
  std::uint64_t longest = 0;
  for (std::int64_t n : {64, 128, 256}) {
    for (int rep = 0; rep < 4; ++rep) {
      Group w = Group::integer_window(n);
      GSet box = GSet::interval(w, 1, n);
      std::uint64_t num = 1 + rep % 3;  // densities 1/4, 1/2, 3/4
      GSet a, b;
      do a = random_subset(box, num, 4, rng);
      while (a.size() * 4 < static_cast<std::size_t>(n));
      do b = random_subset(box, 1 + (rep + 1) % 3, 4, rng);
      while (b.size() * 4 < static_cast<std::size_t>(n));
      std::vector<std::int64_t> sums;
      for (auto x : a.integers())
        for (auto y : b.integers()) sums.push_back(x + y);
      std::set<std::int64_t> sumset(sums.begin(), sums.end());
      std::uint64_t best = oracle::longest_ap_length(std::vector<std::int64_t>(sumset.begin(), sumset.end()));
      for (std::optional<unsigned> ko : {std::optional<unsigned>{}, std::optional<unsigned>{1u}}) {
        ++runs;
        std::string tag = "N=" + std::to_string(n) + " rep " + std::to_string(rep) + (ko ? " k=1" : " derived k");
        try {
          auto r = ap_in_sumset(a, b, n, seeded(7000 + 10 * n + rep), ko);
          if (r.trivial) ++trivial;
          const Group& g = r.progression.group;
          auto elems = r.progression.elements();
          std::set<std::int64_t> seen;
          for (Element e : elems) {
            std::int64_t v = g.to_integer(e);
            o.check(sumset.count(v) > 0, tag + ": element outside A+B");
            seen.insert(v);
          }
          o.check(seen.size() == elems.size(), tag + ": repeated elements");
          if (elems.size() > 1) {
            std::int64_t d = g.to_integer(r.progression.step);
            for (std::size_t j = 1; j < elems.size(); ++j)
              o.check(g.to_integer(elems[j]) - g.to_integer(elems[j - 1]) == d, tag + ": not a progression");
          }
          if (r.k >= 1) {
            ++with_k;
            o.check(r.progression.length >= (2u << r.k), tag + ": shorter than 2^{k+1}");
          }
          o.check(r.progression.length <= best, tag + ": longer than the oracle");
          longest = std::max<std::uint64_t>(longest, r.progression.length);
        } catch (const Error& e) {
          // a forced k outside the proof's range may leave T too sparse for the lemma
          bool conditional = false;
          if (ko && e.kind() == ErrorKind::no_collision) {
            auto st = ab_struct_pipeline(a, b, box, *ko, 2u << *ko, seeded(7000 + 10 * n + rep), 0);
            GSet sw = rewindow(box, st.T.group());
            conditional = !lemma_density_condition(st.T, sw, *ko).holds;
          }
          if (conditional) ++forced_conditional;
          o.check(conditional, tag + ": " + e.what());
        }
      }
    }
  }
  o.detail << "runs=" << runs << " derived_k_trivial=" << trivial << " runs_with_k>=1=" << with_k
           << " forced_k_below_density=" << forced_conditional << " longest=" << longest;
  return o.pass;
}

// T3 of an interval union by summing trapezoids over even x + z.
Integer t3_intervals_oracle(const std::vector<std::pair<Integer, Integer>>& iv) {
  Integer total = 0;
  for (const auto& [a1, a2] : iv)
    for (const auto& [b1, b2] : iv)
      for (const auto& [c1, c2] : iv) {
        // pairs (x, z) in I_a x I_c with x + z = s: h(s), piecewise linear
        auto h = [&](const Integer& s) -> Integer {
          Integer hi = a2 < s - c1 ? a2 : Integer(s - c1);
          Integer lo = a1 > s - c2 ? a1 : Integer(s - c2);
          return hi >= lo ? Integer(hi - lo + 1) : Integer(0);
        };
        Integer p1 = a1 + c1, p4 = a2 + c2;
        Integer p2 = std::min<Integer>(a1 + c2, a2 + c1), p3 = std::max<Integer>(a1 + c2, a2 + c1);
        Integer lo = std::max<Integer>(p1, 2 * b1), hi = std::min<Integer>(p4, 2 * b2);
        std::vector<std::pair<Integer, Integer>> pieces{{p1, p2}, {p2 + 1, p3}, {p3 + 1, p4}};
        for (auto [u, v] : pieces) {
          if (u < lo) u = lo;
          if (v > hi) v = hi;
          if (u > v) continue;
          Integer first = u + (u % 2 != 0 ? 1 : 0);
          if (first < 0 && first % 2 != 0) first += 1;
          Integer last = v - (v % 2 != 0 ? 1 : 0);
          if (first > last) continue;
          Integer count = (last - first) / 2 + 1;
          total += count * (h(first) + h(last)) / 2;
        }
      }
  return total;
}

bool ac8(Outcome& o) {
  Rng rng(0xac8);
  // smoothing by a progression
  std::size_t approx_ok = 0, approx_nontrivial = 0, min_p = SIZE_MAX;
  Rational worst = 0;
  for (int i = 0; i < 10; ++i) {
    std::int64_t n = i < 5 ? 128 : 256;
    Group w = Group::integer_window(n);
    GSet a;
    if (i == 0) {
      std::vector<std::int64_t> v;
      for (std::int64_t x = 4; x <= n; x += 4) v.push_back(x);
      a = GSet::from_integers(w, v);
    } else {
      a = random_subset(GSet::interval(w, 1, n), 1 + i % 3, 4, rng);
    }
    try {
      Rational eps(9, 10);
      auto r = t3_approx_progression(a, n, eps, seeded(8000 + i), 2);
      const Group& g = r.P.group;
      // smoothed function g = 1_A * 1_P over integers
      std::map<std::int64_t, std::int64_t> sm;
      auto av = a.integers();
      std::vector<std::int64_t> pv;
      for (Element e : r.P.elements()) pv.push_back(g.to_integer(e));
      for (auto x : av)
        for (auto p : pv) ++sm[x + p];
      Integer t3s = 0;
      for (auto [x, fx] : sm)
        for (auto [y, fy] : sm) {
          auto it = sm.find(2 * y - x);
          if (it != sm.end()) t3s += Integer(fx) * fy * it->second;
        }
      Integer t3a = oracle::t3_pairs(av);
      Rational len(static_cast<long>(pv.size()));
      Rational dev = abs(Rational(t3s) / (len * len * len) - Rational(t3a));
      Rational bound = eps * rat(av.size()) * rat(av.size());
      o.check(dev == r.deviation, "deviation mismatch, instance " + std::to_string(i));
      o.check(dev <= bound, "deviation above eps|A|^2, instance " + std::to_string(i));
      for (auto p : pv) o.check(8 * std::abs(p) <= n, "P leaves [-N/8, N/8], instance " + std::to_string(i));
      if (dev / bound > worst) worst = dev / bound;
      min_p = std::min<std::size_t>(min_p, pv.size());
      if (pv.size() > 1) ++approx_nontrivial;
      ++approx_ok;
    } catch (const Error& e) {
      o.check(false, "approx instance " + std::to_string(i) + ": " + e.what());
    }
  }

  // counting bound with M = 10
  std::size_t varn = 0, vacuous = 0;
  Integer n0 = pow(Integer(20), 10);
  for (int i = 0; i < 20; ++i) {
    Integer n = n0 * (1 + i);
    std::vector<std::pair<Integer, Integer>> iv;
    if (i % 5 == 0) {
      iv.push_back({1, n});
    } else {
      // remove a few random gaps
      Integer cursor = 1;
      unsigned gaps = 1 + i % 4;
      for (unsigned gidx = 0; gidx < gaps; ++gidx) {
        Integer span = n / (gaps + 1);
        Integer cut = cursor + span * (10 + rng.below(80)) / 100;
        Integer gap = span * (1 + rng.below(i % 3 == 0 ? 40 : 8)) / 100;
        iv.push_back({cursor, cut});
        cursor = cut + gap + 1;
      }
      iv.push_back({cursor, n});
    }
    Integer size = 0;
    for (auto& [l, h] : iv) size += h - l + 1;
    Rational alpha = Rational(size) / Rational(n);
    alpha.canonicalize();
    Integer t3 = t3_interval_union(iv);
    o.check(t3 == t3_intervals_oracle(iv), "interval T3 mismatch, instance " + std::to_string(i));
    if (iv.size() == 1) {
      Integer h = (n + 1) / 2, l = n / 2;
      o.check(t3 == h * h + l * l, "closed form for [N] mismatch");
    }
    Rational bound = varnavides_lower_bound(alpha, n, 10);
    if (bound <= 0) ++vacuous;
    o.check(Rational(t3) >= bound, "counting bound fails, instance " + std::to_string(i));
    ++varn;
  }
  // [N] for small N, outside the stated range of N
  for (std::int64_t n : {10, 100, 1000, 10000, 100000}) {
    Integer t3 = t3_interval_union({{1, n}});
    o.check(Rational(t3) >= varnavides_lower_bound(1, Integer(static_cast<long>(n)), 10, false), "small [N] bound");
  }

  // one density-increment run on a 3AP-free subset of [64]
  Rng frng(0x3a9);
  auto free = oracle::random_progression_free(64, frng);
  Group w64 = Group::integer_window(64);
  GSet a = GSet::from_integers(w64, free);
  std::set<std::int64_t> av(free.begin(), free.end());
  auto check_run = [&](const IncrementRun& run, const std::string& label) -> std::string {
    if (run.steps.empty()) return label + ": parameter-conditional failure (" + run.stop_reason + ")";
    const auto& s = run.steps.front();
    o.check(s.alpha == rat(a.size()) / 64, label + ": increment alpha");
    o.check(s.new_density == rat(s.next.size()) / Rational(static_cast<unsigned long>(s.P.length)),
            label + ": new density");
    o.check(oracle::progression_free(s.next.integers()), label + ": rescaled set has a 3AP");
    o.check(s.passed == (s.new_density >= s.threshold), label + ": increment verdict");
    // x + P recomputed
    std::int64_t d = s.P.group.to_integer(s.P.step), r = static_cast<std::int64_t>(s.P.radius());
    std::size_t hits = 0;
    for (std::int64_t j = -r; j <= r; ++j) hits += av.count(s.x_value + j * d);
    o.check(hits == s.next.size(), label + ": rescaled set size");
    return label + ": " + (s.passed ? "step passed" : "new density below alpha/delta") + " density " +
           to_string(s.alpha) + "->" + to_string(s.new_density) + " (stop: " + run.stop_reason + ")";
  };
  IncrementMode wide;
  wide.c1 = Rational(2);
  std::string base = check_run(density_increment_run(a, 64, IncrementMode{}, seeded(0xac8), 2, 1), "c1=1/8");
  std::string alt = check_run(density_increment_run(a, 64, wide, seeded(0xac8), 2, 1), "c1=2");
  o.detail << "approx=" << approx_ok << "/10 nontrivial_P=" << approx_nontrivial << " min_|P|=" << min_p << " worst_dev/bound=" << worst.get_d()
           << " counting=" << varn << "/20 vacuous=" << vacuous << " increment |A|=" << a.size() << " [" << base
           << "] [" << alt << "]";
  return o.pass;
}

bool ac9(Outcome& o) {
  std::ostringstream ks;
  for (std::uint64_t p : {7u, 11u, 19u, 23u}) {
    GSet sq = nonzero_squares(p);
    // squares recomputed
    std::set<std::uint64_t> expect;
    for (std::uint64_t x = 1; x < p; ++x) expect.insert(x * x % p);
    o.check(sq.size() == expect.size(), "square count for p=" + std::to_string(p));
    auto f = dense_pairs(sq, sq);
    std::int64_t low = -1;
    for (auto v : f)
      if (v && (low < 0 || v < low)) low = v;
    Rational K = rat(sq.size()) / Rational(low);
    auto chk = strong_approx_check(sq);
    o.check(chk.K == K, "K mismatch for p=" + std::to_string(p));
    o.check(chk.is_strong, "not strong for p=" + std::to_string(p));
    ks << (p == 7 ? "" : ",") << "K(" << p << ")=" << to_string(K);
    try {
      auto r = strong_approx_periods(sq, Rational(1, 2), seeded(9000 + p));
      GSet a2 = pair_products(sq, sq);
      std::size_t worst = 0;
      for (Element t : r.S) {
        GSet ta = pair_products(GSet::singleton(sq.group(), t), a2);
        std::size_t sd = symmetric_difference_size(ta, a2);
        worst = std::max(worst, sd);
        o.check(2 * sd <= a2.size(), "symmetric difference above eps|A^2| for p=" + std::to_string(p));
      }
      o.check(!r.S.empty() && r.S == inverses(r.S), "S empty or not symmetric for p=" + std::to_string(p));
      o.check(a2.size() * K.get_den() <= sq.size() * K.get_num(), "|A^2| > K|A| for p=" + std::to_string(p));
      ks << "(|S|=" << r.S.size() << ",maxdiff=" << worst << "/" << a2.size() << (r.trivial ? ",greedy" : "") << ")";
    } catch (const Error& e) {
      o.check(false, "p=" + std::to_string(p) + ": " + e.what());
    }
  }
  o.detail << ks.str();
  return o.pass;
}

Integer binom(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

bool ac10(Outcome& o) {
  auto grid = moments_grid(40, 4, 1);
  o.check(grid.ok(), std::to_string(grid.failures) + " grid rows fail");
  // independent recomputation of the moment and Hoeffding rows
  std::size_t rows = 0;
  Rational min_margin = -1;
  for (unsigned long n = 1; n <= 40; ++n)
    for (unsigned long m = 0; m <= n; ++m)
      for (unsigned long k = 0; k <= n; ++k) {
        Rational mu = Rational(k * m, n);
        mu.canonicalize();
        Rational p(m, n);
        p.canonicalize();
        Integer total = binom(n, k);
        std::vector<Rational> hp, bp;
        for (unsigned long j = 0; j <= k; ++j) {
          Rational h = (j <= m && k - j <= n - m) ? Rational(binom(m, j) * binom(n - m, k - j)) / Rational(total)
                                                  : Rational(0);
          h.canonicalize();
          hp.push_back(h);
          bp.push_back(Rational(binom(k, j)) * pow(p, j) * pow(1 - p, k - j));
        }
        for (unsigned mm = 1; mm <= 4; ++mm) {
          Rational hm = 0, bm = 0;
          for (unsigned long j = 0; j <= k; ++j) {
            Rational dev = pow(Rational(static_cast<long>(j)) - mu, 2 * mm);
            hm += hp[j] * dev;
            bm += bp[j] * dev;
          }
          Rational bound = 2 * pow(3 * mm * mu + mm * mm, mm);
          o.check(hm <= bound, "moment bound fails");
          o.check(hm <= bm, "Hoeffding comparison fails");
          o.check(hm == central_moment_exact(HypergeomParams{n, m, k}, 2 * mm), "moment value mismatch");
          if (min_margin < 0 || bound - hm < min_margin) min_margin = bound - hm;
          rows += 2;
        }
      }
  // binomial moments and tails
  for (unsigned long n = 1; n <= 30; ++n)
    for (Rational p : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      std::vector<Rational> pmf;
      for (unsigned long j = 0; j <= n; ++j) pmf.push_back(Rational(binom(n, j)) * pow(p, j) * pow(1 - p, n - j));
      Rational mu = n * p;
      for (unsigned mm = 1; mm <= 4; ++mm) {
        Rational bm = 0;
        for (unsigned long j = 0; j <= n; ++j) bm += pmf[j] * pow(Rational(static_cast<long>(j)) - mu, 2 * mm);
        o.check(bm <= 2 * pow(3 * mm * mu + mm * mm, mm), "binomial moment bound fails");
        ++rows;
      }
      for (unsigned long t = 1; t <= n; ++t) {
        Rational up = 0, lo = 0;
        for (unsigned long j = 0; j <= n; ++j) {
          if (Rational(static_cast<long>(j)) >= mu + t) up += pmf[j];
          if (Rational(static_cast<long>(j)) <= mu - t) lo += pmf[j];
        }
        BinomialParams b{n, p};
        Rational eu = binom_deviation(b, t, Tail::upper), el = binom_deviation(b, t, Tail::lower);
        o.check(up <= eu && lo <= el, "tail above its enclosure");
        o.check(up == binom_tail_exact(b, t, Tail::upper) && lo == binom_tail_exact(b, t, Tail::lower), "tail value");
        // the enclosures must sit above the real exponentials
        double md = mu.get_d(), td = static_cast<double>(t);
        o.check(eu.get_d() >= std::exp(-td * td / (2 * (md + td / 3))) * (1 - 1e-12), "upper enclosure below exp");
        o.check(el.get_d() >= std::exp(-td * td / (2 * md)) * (1 - 1e-12), "lower enclosure below exp");
        rows += 2;
      }
    }
  o.detail << "grid_rows=" << grid.rows.size() << " grid_failures=" << grid.failures << " oracle_rows=" << rows
           << " min_hyper_margin=" << min_margin.get_d();
  return o.pass;
}

bool ac11(Outcome& o) {
  Group z64 = Group::cyclic(64);
  GSet h = multiples(z64, 2);
  GSet a = set_minus(h, GSet::from_integers(z64, {6}));
  Group w = Group::integer_window(128);
  Rng rng(0xa11);
  GSet dense = random_subset(GSet::interval(w, 1, 128), 1, 2, rng);
  GSet dense64 = random_subset(GSet::interval(w, 1, 64), 1, 2, rng);
  auto free = oracle::random_progression_free(64, rng);

  std::vector<Request> requests;
  auto req = [&](std::string cmd, json params, std::map<std::string, GSet> inputs) {
    Request r;
    r.command = std::move(cmd);
    r.parameters = std::move(params);
    r.parameters["seed"] = 0xa11;
    for (auto& [name, s] : inputs) r.inputs[name] = input_entry(s, name + ".set");
    requests.push_back(r);
  };
  req("periods", {{"epsilon", rational_json(Rational(19, 20))}, {"m", 1}, {"side", "left"}},
      {{"A", a}, {"B", a}, {"S", h}});
  req("periods", {{"epsilon", rational_json(Rational(19, 20))}, {"m", 2}, {"side", "right"}},
      {{"A", a}, {"B", a}, {"S", h}});
  req("structure", {{"mode", "core"}, {"k", 1}}, {{"A", h}});
  req("sumset-ap", {{"N", 64}, {"k", 1}}, {{"A", dense64}, {"B", dense64}});
  req("roth", {{"mode", "approx"}, {"N", 128}, {"epsilon", rational_json(Rational(9, 10))}, {"k", 2}}, {{"A", dense}});
  req("roth",
      {{"mode", "increment"},
       {"N", 64},
       {"c1", rational_json(Rational(1, 8))},
       {"delta", rational_json(Rational(9, 10))},
       {"M", 10},
       {"steps", 1},
       {"k", 1}},
      {{"A", GSet::from_integers(Group::integer_window(64), free)}});
  req("strong-approx", {{"squares", 19}, {"epsilon", rational_json(Rational(1, 2))}}, {});

  std::size_t same = 0;
  for (const auto& rq : requests) {
    std::string tag = rq.command + (rq.parameters.contains("mode") ? " " + rq.parameters["mode"].get<std::string>() : "");
    try {
      RunReport r1 = execute(rq, 1), r2 = execute(rq, 1), r3 = execute(rq, 2);
      for (RunReport* r : {&r1, &r2, &r3}) r->timing_ms = 0;
      std::string s1 = serialize(r1), s2 = serialize(r2), s3 = serialize(r3);
      bool ok = s1 == s2 && s1 == s3 && determinism_hash(r1) == determinism_hash(r3);
      o.check(ok, tag + ": reports differ");
      RunReport v = verify_report(report_from_json(json::parse(s1)));
      o.check(v.all_pass(), tag + ": verify of a stored report failed");
      if (ok) ++same;
    } catch (const Error& e) {
      o.check(false, tag + ": " + e.what());
    }
  }
  o.detail << "commands=" << requests.size() << " byte_identical=" << same << " (threads 1,1,2)";
  return o.pass;
}

struct Criterion {
  const char* label;
  double limit_s;
  std::function<bool(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{
      {"identity suite", 30, ac1},        {"r3 anchor", 60, ac2},
      {"L2 almost periods", 600, ac3},    {"L2m almost periods", 600, ac4},
      {"core set pipeline", 600, ac5},    {"progression in kA-kA", 300, ac6},
      {"progression in A+B", 600, ac7},   {"three-term machinery", 900, ac8},
      {"strong approximate groups", 300, ac9}, {"moment grid", 300, ac10},
      {"determinism", 600, ac11}};
  int first = 1, last = static_cast<int>(all.size());
  if (argc > 1) first = last = std::atoi(argv[1]);
  if (first < 1 || last > static_cast<int>(all.size())) {
    std::fprintf(stderr, "usage: acceptance [1-%zu]\n", all.size());
    return 2;
  }
  int failures = 0;
  for (int i = first; i <= last; ++i) {
    const auto& c = all[i - 1];
    Outcome o;
    auto t0 = Clock::now();
    bool ok = false;
    try {
      ok = c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("uncaught: ") + e.what());
    }
    double secs = seconds_since(t0);
    if (secs > c.limit_s) o.check(false, "runtime over limit");
    ok = ok && o.pass;
    std::printf("AC%d %s: %s [%.1fs <= %.0fs] %s\n", i, ok ? "PASS" : "FAIL", c.label, secs, c.limit_s,
                o.detail.str().c_str());
    for (const auto& p : o.problems) std::printf("  problem: %s\n", p.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures ? 1 : 0;
}
