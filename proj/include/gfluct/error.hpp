#pragma once

#include <stdexcept>
#include <string>

namespace gfluct {

enum class ErrorKind {
  Validation,       // malformed or inconsistent input
  Domain,           // argument outside the mathematical domain (odd k, k < 2, ...)
  Range,            // probability or kernel value out of range
  Resource,         // size / budget guard refused the request
  RegimeDivergent,  // requested statistic has no finite limiting variance
  RegimeUnknown,    // unrecognised regime or statistic name
  Io,               // file could not be read or parsed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

  // Stable machine-readable code, e.g. "REGIME_DIVERGENT".
  const char* code() const noexcept;

 private:
  ErrorKind kind_;
};

const char* error_code(ErrorKind kind) noexcept;

// Process exit status used by the command line tool for each error kind.
int exit_status(ErrorKind kind) noexcept;

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace gfluct
