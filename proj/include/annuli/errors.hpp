#pragma once

#include <stdexcept>
#include <string>

namespace annuli {

// Exit-code contract used by the CLI: 0 success, 1 acceptance-band failure,
// 2 usage error, 3 resource error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter combination outside the regime the statistics are valid for
// (M <= T, L/sqrt(M) <= 0.2). Overridable, so a usage-class error.
struct GuardrailError : UsageError {
  using UsageError::UsageError;
};

struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

// Interval-precision cap reached without isolating an integer. The Galois
// product is provably an integer, so hitting this signals a bug.
struct PrecisionExhaustionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotVanishingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace annuli
