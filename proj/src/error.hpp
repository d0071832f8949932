#pragma once

#include <stdexcept>
#include <string>

namespace vacred {

// One category per failure mode the library can report. Categories map onto
// the stable status names / process exit codes used at the C boundary.
enum class ErrorCode {
  Config,       // malformed configuration or inconsistent call arguments
  Domain,       // value outside an operation's admissible range
  Dimension,    // mass-dimension mismatch in Quantity arithmetic
  NoDecay,      // characteristic volume requested for a non-decaying vacuum
  Integration,  // adaptive integrator could not meet tolerance in budget
  Limit,        // resource cap exceeded (kick budget, step budget)
  Internal,     // broken internal consistency; indicates a bug
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return "CONFIG";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::Dimension: return "DIMENSION";
    case ErrorCode::NoDecay: return "NO_DECAY";
    case ErrorCode::Integration: return "INTEGRATION_FAIL";
    case ErrorCode::Limit: return "CONFIG_LIMIT";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "INTERNAL";
}

// Exit-code set shared by the C API and the CLI.
inline int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return 2;
    case ErrorCode::Domain: return 3;
    case ErrorCode::Dimension: return 3;
    case ErrorCode::NoDecay: return 3;
    case ErrorCode::Integration: return 4;
    case ErrorCode::Limit: return 5;
    case ErrorCode::Internal: return 6;
  }
  return 6;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Integration failure keeps the last accepted point so callers can report
// how far the trajectory got.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& message, double a_reached, double t_reached)
      : Error(ErrorCode::Integration, message),
        a_reached(a_reached),
        t_reached(t_reached) {}

  double a_reached;
  double t_reached;
};

}  // namespace vacred
