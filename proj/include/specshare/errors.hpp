#pragma once

#include <stdexcept>
#include <string>

namespace specshare {

// Bad field values in a MarketConfig or an operation input.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Precondition violations at operation boundaries (dimension mismatch,
// nonpositive bandwidth where one is divided by, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A model outside the regime an operation supports (nonlinear demand fed to
// the potential, etc.).
struct UnsupportedModelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Linear system too ill-conditioned / singular to trust.
struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iteration did not reach tolerance within the cap.
struct ConvergenceError : std::runtime_error {
  double last_residual;
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), last_residual(residual) {}
};

// Independent solver restarts found different equilibria, which signals a
// model violating the uniqueness hypotheses.
struct UniquenessError : std::runtime_error {
  double max_pairwise_distance;
  UniquenessError(const std::string& what, double distance)
      : std::runtime_error(what), max_pairwise_distance(distance) {}
};

// Boundary system has no consistent active set (e.g. both asymptotic groups
// would vacate the open band).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace specshare
