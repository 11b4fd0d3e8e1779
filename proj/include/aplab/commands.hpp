#pragma once

#include <string>

#include "aplab/error.hpp"
#include "aplab/report.hpp"

namespace aplab {

/// A fully specified run: everything needed to recompute the report.
struct Request {
  std::string command;
  json parameters = json::object();
  /// name -> {"path", "hash", "group", "elements"}
  json inputs = json::object();
};

json input_entry(const GSet& s, const std::string& path);

/// Dispatches on request.command: convolve, periods, structure, sumset-ap,
/// roth, strong-approx, moments-grid. Errors propagate as aplab::Error.
RunReport execute(const Request& request, unsigned threads = 1);

/// Re-runs the request stored in a report and compares every result and
/// verdict; also re-checks the input hashes.
RunReport verify_report(const RunReport& stored, unsigned threads = 1);
RunReport verify_report_file(const std::string& path, unsigned threads = 1);

/// Text written for --format csv: the table for convolve, the grid for
/// moments-grid, the verdict list otherwise.
std::string csv_payload(const RunReport& r);

/// 0 if all verdicts pass, else 1.
int exit_code_for(const RunReport& r);
/// 2 for parse errors, 4 for exhausted attempts, 1 for a missing translate,
/// 3 for every other precondition-type failure.
int exit_code_for(ErrorKind kind);

}  // namespace aplab
