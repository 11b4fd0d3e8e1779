#include "aplab/report.hpp"

#include <sstream>

#include "aplab/error.hpp"
#include "aplab/set_io.hpp"

namespace aplab {

bool RunReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

void RunReport::add(std::string name, bool pass, Rational margin) {
  margin.canonicalize();
  verdicts.push_back({std::move(name), pass, std::move(margin)});
}

json rational_json(const Rational& r_in) {
  Rational r = r_in;
  r.canonicalize();
  return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

Rational rational_from_json(const json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    Rational r(Integer(j.at("num").get<std::string>()), Integer(j.at("den").get<std::string>()));
    if (r.get_den() == 0) fail(ErrorKind::parse, "zero denominator");
    r.canonicalize();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("bad rational: ") + e.what());
  } catch (const std::invalid_argument& e) {
    fail(ErrorKind::parse, std::string("bad rational: ") + e.what());
  }
}

json integer_json(const Integer& v) { return v.get_str(); }

json element_json(const Group& g, Element e) { return g.encode(e); }

json set_json(const GSet& s) {
  json el = json::array();
  for (Element e : s) el.push_back(s.group().encode(e));
  return {{"group", s.group().spec()}, {"elements", el}};
}

GSet set_from_json(const json& j) {
  try {
    Group g = Group::parse(j.at("group").get<std::string>());
    std::vector<std::vector<std::int64_t>> tuples;
    for (const auto& e : j.at("elements")) tuples.push_back(e.get<std::vector<std::int64_t>>());
    return GSet::from_tuples(g, tuples);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("bad set: ") + e.what());
  }
}

json certificate_json(const PeriodCertificate& c) {
  json anomalies = c.anomalies;
  return {{"A", set_json(c.A)},
          {"B", set_json(c.B)},
          {"S", set_json(c.S)},
          {"side", to_string(c.side)},
          {"epsilon", rational_json(c.epsilon)},
          {"m", c.m},
          {"k", c.k},
          {"K", rational_json(c.K)},
          {"C", set_json(c.C)},
          {"T", set_json(c.T)},
          {"bound_rhs", rational_json(c.bound_rhs)},
          {"max_defect", integer_json(c.max_defect)},
          {"attempts_used", c.attempts_used},
          {"attempt_limit", c.attempt_limit},
          {"attempt_limit_capped", c.attempt_limit_capped},
          {"seed", c.seed},
          {"target_fraction", rational_json(c.target_fraction)},
          {"target_size", rational_json(c.target_size)},
          {"trivial", c.trivial},
          {"anomalies", anomalies}};
}

PeriodCertificate certificate_from_json(const json& j) {
  try {
    PeriodCertificate c;
    c.A = set_from_json(j.at("A"));
    c.B = set_from_json(j.at("B"));
    c.S = set_from_json(j.at("S"));
    c.side = parse_side(j.at("side").get<std::string>());
    c.epsilon = rational_from_json(j.at("epsilon"));
    c.m = j.at("m").get<unsigned>();
    c.k = j.at("k").get<std::uint64_t>();
    c.K = rational_from_json(j.at("K"));
    c.C = set_from_json(j.at("C"));
    c.T = set_from_json(j.at("T"));
    c.bound_rhs = rational_from_json(j.at("bound_rhs"));
    c.max_defect = Integer(j.at("max_defect").get<std::string>());
    c.attempts_used = j.at("attempts_used").get<std::uint64_t>();
    c.attempt_limit = j.at("attempt_limit").get<std::uint64_t>();
    c.attempt_limit_capped = j.at("attempt_limit_capped").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.target_fraction = rational_from_json(j.at("target_fraction"));
    c.target_size = rational_from_json(j.at("target_size"));
    c.trivial = j.at("trivial").get<bool>();
    c.anomalies = j.at("anomalies").get<std::vector<std::string>>();
    return c;
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("bad certificate: ") + e.what());
  } catch (const std::invalid_argument& e) {
    fail(ErrorKind::parse, std::string("bad certificate: ") + e.what());
  }
}

json to_json(const RunReport& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"margin", rational_json(v.margin)}});
  return {{"schema", kReportSchema}, {"command", r.command},     {"inputs", r.inputs},
          {"parameters", r.parameters}, {"results", r.results}, {"verdicts", verdicts},
          {"timing_ms", r.timing_ms},   {"seed", r.seed},       {"version", r.version},
          {"all_pass", r.all_pass()}};
}

RunReport report_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) fail(ErrorKind::parse, "unknown report schema");
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.parameters = j.at("parameters");
    r.results = j.at("results");
    for (const auto& v : j.at("verdicts"))
      r.verdicts.push_back({v.at("name").get<std::string>(), v.at("pass").get<bool>(), rational_from_json(v.at("margin"))});
    r.timing_ms = j.at("timing_ms").get<std::int64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("bad report: ") + e.what());
  }
}

std::string serialize(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

std::string verdicts_csv(const RunReport& r) {
  std::ostringstream os;
  os << "name,pass,margin_num,margin_den\n";
  for (const auto& v : r.verdicts)
    os << v.name << ',' << (v.pass ? "true" : "false") << ',' << v.margin.get_num().get_str() << ','
       << v.margin.get_den().get_str() << '\n';
  return os.str();
}

std::string determinism_hash(const RunReport& r) {
  RunReport copy = r;
  copy.timing_ms = 0;
  std::string text = serialize(copy);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace aplab
