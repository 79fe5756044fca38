#pragma once

#include <stdexcept>
#include <string>

namespace dualrail {

/// Argument outside the physical domain of an operation (T <= 0, negative
/// durations, unknown stage kinds).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A keyed quantity (interaction pair, preset name, level label) is missing.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Adaptive integration failed (step-size underflow, too many steps).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, double h)
      : std::runtime_error(what), t_(t), h_(h) {}
  double time() const noexcept { return t_; }
  double step() const noexcept { return h_; }

 private:
  double t_;
  double h_;
};

/// A derived quantity could not be extracted (e.g. a phase from a vanishing
/// amplitude).
class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Velocity grid does not cover enough of the Maxwell distribution.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed preset file or invalid run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dualrail
