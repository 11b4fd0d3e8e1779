#include "aplab/commands.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "aplab/applications.hpp"
#include "aplab/moments.hpp"
#include "aplab/set_io.hpp"

namespace aplab {

namespace {

class Params {
 public:
  explicit Params(const json& j) : j_(j) {}

  bool has(const char* name) const { return j_.contains(name) && !j_.at(name).is_null(); }

  const json& at(const char* name) const {
    if (!has(name)) fail(ErrorKind::parse, std::string("missing parameter: ") + name);
    return j_.at(name);
  }

  Rational rational(const char* name) const { return rational_from_json(at(name)); }
  Rational rational(const char* name, const Rational& dflt) const { return has(name) ? rational(name) : dflt; }

  std::int64_t integer(const char* name) const {
    const json& v = at(name);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) {
      try {
        return std::stoll(v.get<std::string>());
      } catch (const std::exception&) {
      }
    }
    fail(ErrorKind::parse, std::string("parameter ") + name + " is not an integer");
  }
  std::int64_t integer(const char* name, std::int64_t dflt) const { return has(name) ? integer(name) : dflt; }

  std::optional<unsigned> optional_unsigned(const char* name) const {
    if (!has(name)) return std::nullopt;
    std::int64_t v = integer(name);
    if (v < 0) fail(ErrorKind::out_of_range, std::string(name) + " must be >= 0");
    return static_cast<unsigned>(v);
  }

  std::string str(const char* name) const {
    const json& v = at(name);
    if (!v.is_string()) fail(ErrorKind::parse, std::string("parameter ") + name + " is not a string");
    return v.get<std::string>();
  }
  std::string str(const char* name, const std::string& dflt) const { return has(name) ? str(name) : dflt; }

  bool flag(const char* name) const { return has(name) && at(name).get<bool>(); }

 private:
  const json& j_;
};

GSet input_set(const Request& rq, const char* name) {
  if (!rq.inputs.contains(name)) fail(ErrorKind::parse, std::string("missing input set: ") + name);
  return set_from_json(rq.inputs.at(name));
}

unsigned positive(std::int64_t v, const char* what) {
  if (v < 1 || v > (std::int64_t{1} << 30)) fail(ErrorKind::out_of_range, std::string(what) + " must be positive");
  return static_cast<unsigned>(v);
}

SearchConfig search_config(const Params& p, unsigned threads) {
  SearchConfig cfg;
  std::int64_t seed = p.integer("seed", 0);
  std::int64_t attempts = p.integer("max_attempts", 0);
  if (seed < 0 || attempts < 0) fail(ErrorKind::out_of_range, "seed and max_attempts must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.max_attempts = static_cast<std::uint64_t>(attempts);
  cfg.target_fraction = p.rational("target_fraction", Rational(1, 2));
  if (cfg.target_fraction <= 0 || cfg.target_fraction > 1)
    fail(ErrorKind::out_of_range, "target fraction must lie in (0, 1]");
  cfg.threads = threads;
  return cfg;
}

json progression_json(const Progression& p) {
  json j = to_json(p, true);
  if (p.group.kind() == Group::Kind::integer_window) {
    j["base_value"] = p.group.to_integer(p.base);
    j["step_value"] = p.group.to_integer(p.step);
  }
  return j;
}

void add_certificate(RunReport& r, const PeriodCertificate& cert, unsigned threads) {
  CertificateCheck check = verify_certificate(cert, threads);
  r.add("certificate_sound", check.sound, cert.bound_rhs - Rational(check.max_defect));
  r.add("certificate_consistent", check.consistent);
  r.add("certificate_size_target", check.size_target,
        Rational(static_cast<unsigned long>(cert.T.size())) - cert.target_size);
}

// ---- commands ----------------------------------------------------------------

void run_convolve(const Request& rq, RunReport& r) {
  std::vector<GSet> sets;
  for (auto it = rq.inputs.begin(); it != rq.inputs.end(); ++it) sets.push_back(set_from_json(it.value()));
  if (sets.empty()) fail(ErrorKind::parse, "convolve needs at least one set");
  ConvTable f = convolve_sets(sets);
  Integer expected = 1;
  for (const auto& s : sets) expected *= static_cast<unsigned long>(s.size());
  r.results["support_size"] = f.support_size();
  r.results["total"] = integer_json(f.total());
  r.results["max_value"] = f.max_value();
  json norms = json::object();
  for (unsigned p = 1; p <= 4; ++p) norms[std::to_string(p)] = integer_json(lp_norm_pow(f, p).value);
  r.results["norm_powers"] = norms;
  if (sets.size() == 2) r.results["energy"] = integer_json(energy(sets[0], sets[1]));
  if (f.support_size() <= 5000) r.results["table"] = to_json(f);
  r.add("total_mass", f.total() == expected, Rational(f.total() - expected));
  r.csv = to_csv(f);
}

void run_periods(const Request& rq, const Params& p, RunReport& r, unsigned threads) {
  GSet a = input_set(rq, "A"), b = input_set(rq, "B"), s = input_set(rq, "S");
  Rational eps = p.rational("epsilon");
  unsigned m = positive(p.integer("m", 1), "m");
  Side side = parse_side(p.str("side", "left"));
  SearchConfig cfg = search_config(p, threads);
  PeriodCertificate cert = find_almost_periods(a, b, s, eps, m, side, cfg);
  r.results["certificate"] = certificate_json(cert);
  r.results["T_size"] = cert.T.size();
  add_certificate(r, cert, threads);
  if (m > 1 && !cert.trivial) {
    LambdaCheck lc = side == Side::left ? check_lambda_estimate(a, b, cert.k, m)
                                        : check_lambda_estimate(inverse_set(b), inverse_set(a), cert.k, m);
    r.results["lambda"] = rational_json(lc.lambda);
    r.results["lambda_stated_bound"] = rational_json(lc.stated_bound);
    r.add("lambda_estimate", lc.holds, lc.stated_bound - lc.lambda);
  }
}

void structure_verdicts(RunReport& r, const StructureResult& s, unsigned threads) {
  r.results["S"] = set_json(s.S);
  r.results["S_size"] = s.S.size();
  r.results["S_k_size"] = s.S_k.size();
  r.results["container_size"] = s.container.size();
  r.results["K"] = rational_json(s.K);
  r.results["K_prime"] = rational_json(s.K_prime);
  r.results["epsilon"] = rational_json(s.epsilon);
  r.results["min_representations"] = integer_json(s.min_representations);
  r.results["representation_bound"] = rational_json(s.rep_lower_bound);
  r.results["certificate"] = certificate_json(s.certificate);
  r.add("symmetric", s.symmetric);
  r.add("contains_identity", s.has_identity);
  r.add("contained", s.contained);
  r.add("representations", s.representations_ok, Rational(s.min_representations) - s.rep_lower_bound);
  add_certificate(r, s.certificate, threads);
}

void run_structure(const Request& rq, const Params& p, RunReport& r, unsigned threads) {
  std::string mode = p.str("mode");
  SearchConfig cfg = search_config(p, threads);
  unsigned k = positive(p.integer("k", 1), "k");
  if (mode == "core") {
    structure_verdicts(r, core_set_pipeline(input_set(rq, "A"), k, cfg), threads);
  } else if (mode == "abba") {
    structure_verdicts(r, abba_pipeline(input_set(rq, "A"), input_set(rq, "B"), input_set(rq, "D"), k, cfg), threads);
  } else if (mode == "abc") {
    GSet a1 = input_set(rq, "A1");
    Element x = a1.group().decode(p.at("x").get<std::vector<std::int64_t>>());
    StructureResult s = abc_pipeline(a1, input_set(rq, "A2"), input_set(rq, "A3"), x, input_set(rq, "D"), k, cfg);
    structure_verdicts(r, s, threads);
    r.add("transfer", s.transfer_ok);
  } else if (mode == "ab") {
    unsigned n = positive(p.integer("n", 2), "n");
    AbStructResult s = ab_struct_pipeline(input_set(rq, "A"), input_set(rq, "B"), input_set(rq, "S"), k, n, cfg);
    r.results["T"] = set_json(s.T);
    r.results["m"] = s.m;
    r.results["K1"] = rational_json(s.K1);
    r.results["K2"] = rational_json(s.K2);
    r.results["K3"] = rational_json(s.K3);
    r.results["gamma_lo"] = rational_json(s.gamma.lo);
    r.results["gamma_hi"] = rational_json(s.gamma.hi);
    r.results["epsilon"] = rational_json(s.epsilon);
    r.results["pool_size"] = s.pool_size;
    r.results["subsets_tested"] = s.subsets_tested;
    r.results["exhaustive"] = s.exhaustive;
    r.results["certificate"] = certificate_json(s.certificate);
    if (!s.all_found) {
      json f = json::array();
      for (Element e : s.failing_subset) f.push_back(element_json(s.T.group(), e));
      r.results["failing_subset"] = f;
    }
    r.add("translates_found", s.all_found);
    r.add("counting_contradiction", s.counting_contradiction, s.counting_rhs - s.counting_lhs);
    add_certificate(r, s.certificate, threads);
  } else {
    fail(ErrorKind::parse, "unknown structure mode: " + mode);
  }
}

void run_sumset_ap(const Request& rq, const Params& p, RunReport& r, unsigned threads) {
  GSet a = input_set(rq, "A"), b = input_set(rq, "B");
  SearchConfig cfg = search_config(p, threads);
  auto k = p.optional_unsigned("k");
  bool small = p.flag("small");
  SumsetApResult s = small ? ap_in_small_sumset(a, b, cfg, k) : ap_in_sumset(a, b, p.integer("N"), cfg, k);
  r.results["progression"] = progression_json(s.progression);
  r.results["derived_k"] = s.derived_k;
  r.results["k"] = s.k;
  r.results["lemma_k"] = s.lemma_k;
  r.results["target_length"] = s.target_length;
  r.results["trivial"] = s.trivial;
  r.results["K1"] = rational_json(s.K1);
  r.results["K2"] = rational_json(s.K2);
  Group wide = scale_windows(a.group(), 2);
  GSet sum = product_set(rewindow(a, wide), rewindow(b, wide));
  Progression oracle = longest_ap_oracle(sum);
  r.results["oracle_length"] = oracle.length;
  r.add("contained", s.contained && is_subset(rewindow(s.progression.as_set(), wide), sum));
  r.add("valid_progression", s.progression.length == 1 || is_valid_progression(s.progression));
  r.add("length_target", s.progression.length >= s.target_length,
        Rational(static_cast<unsigned long>(s.progression.length)) -
            Rational(static_cast<unsigned long>(s.target_length)));
  r.add("oracle_dominates", oracle.length >= s.progression.length,
        Rational(static_cast<unsigned long>(oracle.length)) -
            Rational(static_cast<unsigned long>(s.progression.length)));
  if (small) r.add("plunnecke", s.plunnecke_ok);
  if (s.structure) {
    r.results["certificate"] = certificate_json(s.structure->certificate);
    add_certificate(r, s.structure->certificate, threads);
  }
}

bool three_ap_free(const std::vector<int>& xs) {
  std::vector<bool> in(128, false);
  for (int x : xs) in[x] = true;
  for (int a : xs)
    for (int b : xs)
      if (a < b && 2 * b - a < 128 && in[2 * b - a]) return false;
  return true;
}

void run_roth(const Request& rq, const Params& p, RunReport& r, unsigned threads) {
  std::string mode = p.str("mode");
  if (mode == "r3") {
    unsigned n = positive(p.integer("N"), "N");
    R3Result res = r3_exhaustive(n);
    r.results["value"] = res.value;
    r.results["witness"] = res.witness;
    r.add("witness_progression_free", three_ap_free(res.witness));
    r.add("witness_size", res.witness.size() == res.value);
  } else if (mode == "varnavides") {
    Integer n(p.at("N").is_string() ? p.at("N").get<std::string>() : std::to_string(p.integer("N")));
    std::uint64_t m = positive(p.integer("M", 10), "M");
    std::vector<std::pair<Integer, Integer>> iv;
    Integer size = 0;
    for (const auto& e : p.at("intervals")) {
      Integer lo(e.at(0).get<std::string>()), hi(e.at(1).get<std::string>());
      if (lo < 1 || hi > n) fail(ErrorKind::precondition, "intervals must lie in [1, N]");
      iv.emplace_back(lo, hi);
      size += hi - lo + 1;
    }
    Rational alpha(size, n);
    alpha.canonicalize();
    bool pre = varnavides_precondition(m, n);
    Integer t3 = t3_interval_union(iv);
    Rational bound = varnavides_lower_bound(alpha, n, m, p.flag("enforce") || !p.has("enforce"));
    r.results["alpha"] = rational_json(alpha);
    r.results["t3"] = integer_json(t3);
    r.results["bound"] = rational_json(bound);
    r.results["precondition"] = pre;
    r.add("t3_dominates", Rational(t3) >= bound, Rational(t3) - bound);
  } else if (mode == "approx") {
    GSet a = input_set(rq, "A");
    std::int64_t n = p.integer("N");
    T3ApproxResult t = t3_approx_progression(a, n, p.rational("epsilon"), search_config(p, threads),
                                             p.optional_unsigned("k"));
    r.results["Q"] = progression_json(t.Q);
    r.results["P"] = progression_json(t.P);
    r.results["t3"] = integer_json(t.t3_set);
    r.results["t3_smoothed"] = integer_json(t.t3_smoothed);
    r.results["deviation"] = rational_json(t.deviation);
    r.results["bound"] = rational_json(t.bound);
    r.results["derived_k"] = t.corollary.derived_k;
    std::int64_t reach = static_cast<std::int64_t>(t.P.radius()) * std::abs(t.P.group.to_integer(t.P.step));
    r.add("deviation", t.ok, t.bound - t.deviation);
    r.add("P_inside_eighth", 8 * reach <= n, make_rational(n, 8) - Rational(reach));
    r.add("four_P_inside_Q", 4 * t.P.radius() <= t.Q.radius());
  } else if (mode == "increment") {
    GSet a = input_set(rq, "A");
    IncrementMode im;
    im.delta = p.rational("delta", im.delta);
    im.M = positive(p.integer("M", 10), "M");
    im.c1 = p.rational("c1", im.c1);
    unsigned steps = positive(p.integer("steps", 1), "steps");
    IncrementRun run = density_increment_run(a, p.integer("N"), im, search_config(p, threads), steps,
                                             p.optional_unsigned("k"));
    json js = json::array();
    bool consistent = true;
    for (const auto& st : run.steps) {
      js.push_back({{"N", st.N},
                    {"alpha", rational_json(st.alpha)},
                    {"P", progression_json(st.P)},
                    {"x", st.x_value},
                    {"new_density", rational_json(st.new_density)},
                    {"threshold", rational_json(st.threshold)},
                    {"passed", st.passed},
                    {"varnavides_precondition", st.varnavides_ok},
                    {"deviation", rational_json(st.approx.deviation)},
                    {"deviation_bound", rational_json(st.approx.bound)},
                    {"next", st.next.integers()}});
      std::vector<int> next;
      for (auto v : st.next.integers()) next.push_back(static_cast<int>(v));
      bool free = t3_count(ConvTable::indicator(st.next)) == static_cast<long>(st.next.size());
      Rational dens = ratio(st.next.size(), st.P.length);
      if (!free || dens != st.new_density) consistent = false;
    }
    r.results["steps"] = js;
    r.results["stop_reason"] = run.stop_reason;
    r.add("steps_consistent", consistent);
    r.add("iteration_bound", run.iteration_bound_ok);
  } else {
    fail(ErrorKind::parse, "unknown roth mode: " + mode);
  }
}

void run_strong_approx(const Request& rq, const Params& p, RunReport& r, unsigned threads) {
  GSet a = p.has("squares") ? nonzero_squares(static_cast<std::uint64_t>(p.integer("squares"))) : input_set(rq, "A");
  StrongApproxResult s = strong_approx_periods(a, p.rational("epsilon"), search_config(p, threads));
  r.results["K"] = rational_json(s.K);
  r.results["k"] = s.k;
  r.results["lambda_hi"] = rational_json(s.lambda_hi);
  r.results["trivial"] = s.trivial;
  r.results["attempts_used"] = s.attempts_used;
  r.results["S"] = set_json(s.S);
  r.results["T"] = set_json(s.T);
  r.results["max_symmetric_difference"] = s.max_symmetric_difference;
  Group w = scale_windows(a.group(), 4);
  GSet aw = rewindow(a, w);
  Rational a2(static_cast<unsigned long>(product_set(aw, aw).size()));
  r.add("translation_invariance", s.ok,
        s.epsilon * a2 - Rational(static_cast<unsigned long>(s.max_symmetric_difference)));
  r.add("doubling", s.doubling_ok);
}

void run_moments_grid(const Params& p, RunReport& r, unsigned threads) {
  std::int64_t n_max = p.integer("N_max", 20);
  std::int64_t m_max = p.integer("m_max", 3);
  if (n_max < 1 || n_max > 60 || m_max < 1 || m_max > 8) fail(ErrorKind::out_of_range, "grid bounds out of range");
  GridReport g = moments_grid(static_cast<std::uint64_t>(n_max), static_cast<unsigned>(m_max), threads);
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  std::map<std::string, Rational> min_margin;
  for (const auto& row : g.rows) {
    auto& c = counts[row.check];
    ++c.first;
    if (!row.pass()) ++c.second;
    Rational mg = row.margin();
    auto it = min_margin.find(row.check);
    if (it == min_margin.end() || mg < it->second) min_margin[row.check] = mg;
  }
  json summary = json::object();
  for (const auto& [name, c] : counts) {
    summary[name] = {{"rows", c.first}, {"failures", c.second}, {"min_margin", rational_json(min_margin[name])}};
    r.add(name, c.second == 0, min_margin[name]);
  }
  r.results["summary"] = summary;
  r.results["rows"] = g.rows.size();
  r.csv = grid_csv(g);
}

}  // namespace

json input_entry(const GSet& s, const std::string& path) {
  json j = set_json(s);
  j["path"] = path;
  j["hash"] = set_hash(s);
  return j;
}

RunReport execute(const Request& rq, unsigned threads) {
  auto start = std::chrono::steady_clock::now();
  Params p(rq.parameters);
  RunReport r;
  r.command = rq.command;
  r.inputs = rq.inputs;
  r.parameters = rq.parameters;
  r.seed = static_cast<std::uint64_t>(p.integer("seed", 0));
  if (threads < 1) threads = 1;
  if (rq.command == "convolve")
    run_convolve(rq, r);
  else if (rq.command == "periods")
    run_periods(rq, p, r, threads);
  else if (rq.command == "structure")
    run_structure(rq, p, r, threads);
  else if (rq.command == "sumset-ap")
    run_sumset_ap(rq, p, r, threads);
  else if (rq.command == "roth")
    run_roth(rq, p, r, threads);
  else if (rq.command == "strong-approx")
    run_strong_approx(rq, p, r, threads);
  else if (rq.command == "moments-grid")
    run_moments_grid(p, r, threads);
  else
    fail(ErrorKind::parse, "unknown command: " + rq.command);
  r.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

RunReport verify_report(const RunReport& stored, unsigned threads) {
  auto start = std::chrono::steady_clock::now();
  RunReport out;
  out.command = "verify";
  out.seed = stored.seed;
  out.parameters = {{"command", stored.command}};

  bool hashes = true;
  for (auto it = stored.inputs.begin(); it != stored.inputs.end(); ++it) {
    GSet s = set_from_json(it.value());
    if (!it.value().contains("hash") || it.value().at("hash") != set_hash(s)) hashes = false;
  }
  out.add("input_hashes", hashes);

  Request rq{stored.command, stored.parameters, stored.inputs};
  RunReport fresh = execute(rq, threads);
  json a = to_json(fresh), b = to_json(stored);
  bool results = a.at("results") == b.at("results");
  bool verdicts = a.at("verdicts") == b.at("verdicts");
  out.add("results_match", results);
  out.add("verdicts_match", verdicts);
  out.add("recomputed_verdicts_pass", fresh.all_pass());
  json failed = json::array();
  for (const auto& v : fresh.verdicts)
    if (!v.pass) failed.push_back(v.name);
  out.results = {{"failed_verdicts", failed}, {"recomputed_verdict_count", fresh.verdicts.size()}};
  out.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunReport verify_report_file(const std::string& path, unsigned threads) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot open report: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("report is not valid JSON: ") + e.what());
  }
  return verify_report(report_from_json(j), threads);
}

std::string csv_payload(const RunReport& r) { return r.csv.empty() ? verdicts_csv(r) : r.csv; }

int exit_code_for(const RunReport& r) { return r.all_pass() ? 0 : 1; }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::invalid_element:
    case ErrorKind::out_of_range:
      return 2;
    case ErrorKind::attempts_exhausted:
      return 4;
    case ErrorKind::translate_not_found:
      return 1;
    default:
      return 3;
  }
}

}  // namespace aplab
