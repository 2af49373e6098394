#pragma once

#include <stdexcept>
#include <string>

namespace covbell {

// Exit-code contract used by the CLI:
//   0 success, 1 reproduction mismatch, 2 input error,
//   3 domain-invariant violation, 4 optimizer non-convergence.
enum ExitCode : int {
  kExitOk = 0,
  kExitReproMismatch = 1,
  kExitInputError = 2,
  kExitInvariantViolation = 3,
  kExitNonConvergence = 4,
};

// Malformed files, unknown names, out-of-range CLI arguments.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed data that breaks a domain invariant (signalling, bad state, ...).
struct invariant_error : std::runtime_error {
  explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

// An optimizer exhausted its budget without meeting its convergence contract.
struct non_convergence : std::runtime_error {
  explicit non_convergence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace covbell
