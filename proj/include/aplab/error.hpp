#pragma once

#include <stdexcept>
#include <string>

namespace aplab {

enum class ErrorKind {
  invalid_element,
  window_overflow,
  group_mismatch,
  non_abelian,
  out_of_range,
  parse,
  precondition,
  density_too_low,
  attempts_exhausted,
  no_collision,
  not_popular,
  translate_not_found,
  degenerate,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace aplab
