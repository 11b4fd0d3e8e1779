#pragma once

#include <iosfwd>
#include <string>

#include "aplab/gset.hpp"

namespace aplab {

/// Set file: first non-comment line is a group spec, then one element per
/// line as comma-separated integers. '#' starts a comment.
GSet parse_set(std::istream& in, const std::string& origin = "<stream>");
GSet read_set_file(const std::string& path);
void write_set(std::ostream& out, const GSet& set);
std::string format_set(const GSet& set);

/// FNV-1a over the canonical text form; used to identify inputs in reports.
std::string set_hash(const GSet& set);

}  // namespace aplab
