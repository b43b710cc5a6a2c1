#include "gfluct/error.hpp"

namespace gfluct {

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

const char* Error::code() const noexcept { return error_code(kind_); }

const char* error_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "VALIDATION";
    case ErrorKind::Domain: return "DOMAIN";
    case ErrorKind::Range: return "RANGE";
    case ErrorKind::Resource: return "RESOURCE_GUARD";
    case ErrorKind::RegimeDivergent: return "REGIME_DIVERGENT";
    case ErrorKind::RegimeUnknown: return "REGIME_UNKNOWN";
    case ErrorKind::Io: return "IO";
  }
  return "INTERNAL";
}

int exit_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Resource: return 2;
    case ErrorKind::RegimeDivergent: return 3;
    default: return 1;
  }
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace gfluct
