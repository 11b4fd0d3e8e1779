#include "aplab/set_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "aplab/error.hpp"

namespace aplab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::int64_t> parse_tuple(std::string_view line, const std::string& where) {
  std::vector<std::int64_t> out;
  while (true) {
    auto comma = line.find(',');
    std::string_view field = trim(line.substr(0, comma));
    std::int64_t v = 0;
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
      fail(ErrorKind::parse, where + ": bad integer '" + std::string(field) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

GSet parse_set(std::istream& in, const std::string& origin) {
  std::string raw;
  std::optional<Group> group;
  std::vector<Element> elements;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = origin + ":" + std::to_string(lineno);
    if (!group) {
      try {
        group = Group::parse(line);
      } catch (const Error& e) {
        fail(ErrorKind::parse, where + ": " + e.what());
      }
      continue;
    }
    auto tuple = parse_tuple(line, where);
    try {
      elements.push_back(group->decode(tuple));
    } catch (const Error& e) {
      fail(ErrorKind::parse, where + ": " + e.what());
    }
  }
  if (!group) fail(ErrorKind::parse, origin + ": missing group spec line");
  return GSet(*group, std::move(elements));
}

GSet read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot open set file '" + path + "'");
  return parse_set(in, path);
}

void write_set(std::ostream& out, const GSet& set) {
  out << set.group().spec() << '\n';
  for (Element e : set) {
    auto t = set.group().encode(e);
    for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
    out << '\n';
  }
}

std::string format_set(const GSet& set) {
  std::ostringstream out;
  write_set(out, set);
  return out.str();
}

std::string set_hash(const GSet& set) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : format_set(set)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace aplab
