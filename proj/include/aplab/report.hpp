#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aplab/almost_periods.hpp"
#include "aplab/gset.hpp"
#include "aplab/rational.hpp"

namespace aplab {

using nlohmann::json;

inline constexpr const char* kReportSchema = "aplab/1";
inline constexpr const char* kVersion = "1.0.0";

struct Verdict {
  std::string name;
  bool pass = false;
  Rational margin;
};

struct RunReport {
  std::string command;
  /// name -> {"path", "hash", "group", "elements"}
  json inputs = json::object();
  json parameters = json::object();
  json results = json::object();
  std::vector<Verdict> verdicts;
  std::int64_t timing_ms = 0;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  /// Command-specific CSV body; not serialized.
  std::string csv;

  bool all_pass() const;
  void add(std::string name, bool pass, Rational margin = 0);
};

json rational_json(const Rational& r);
Rational rational_from_json(const json& j);
json integer_json(const Integer& v);

json set_json(const GSet& s);
GSet set_from_json(const json& j);
json element_json(const Group& g, Element e);
json certificate_json(const PeriodCertificate& c);
PeriodCertificate certificate_from_json(const json& j);

json to_json(const RunReport& r);
RunReport report_from_json(const json& j);
/// Pretty JSON with sorted keys and a trailing newline.
std::string serialize(const RunReport& r);
/// name,pass,margin_num,margin_den
std::string verdicts_csv(const RunReport& r);
/// FNV-1a of the serialized report with timing_ms zeroed.
std::string determinism_hash(const RunReport& r);

}  // namespace aplab
