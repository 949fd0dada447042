#pragma once

#include <stdexcept>
#include <string>

namespace cbqr {

/// Inconsistent dimensions or otherwise invalid operation inputs.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An RK4 pass produced a non-finite value or the state norm crossed the
/// divergence cap. Carries the time and step index where it happened.
class IntegrationDiverged : public std::runtime_error {
 public:
  IntegrationDiverged(const std::string& what, double time, long step = -1)
      : std::runtime_error(what), time_(time), step_(step) {}

  double time() const noexcept { return time_; }
  long step() const noexcept { return step_; }  // -1 when not tied to a grid step

 private:
  double time_;
  long step_;
};

/// Unconstrained minimization with a singular weight: the objective has no
/// finite minimizer.
class UnboundedObjective : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Admissible-set / weight combination the minimizer does not handle.
class UnsupportedSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem outside an oracle's validity domain.
class UnsupportedProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config parsing/validation failure, addressed to a field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace cbqr
