#pragma once

#include <stdexcept>
#include <string>

namespace zs {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DiscontinuityError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NotRealPotential : Error { using Error::Error; };

// Raised by the adaptive integrator; `x` is where the step collapsed.
struct StepFailure : Error {
  double x;
  StepFailure(const std::string& msg, double x_) : Error(msg), x(x_) {}
};
struct ToleranceNotMet : Error { using Error::Error; };

struct EigensolverFailure : Error {
  double nu;
  EigensolverFailure(const std::string& msg, double nu_) : Error(msg), nu(nu_) {}
};

struct CountMismatch : Error { using Error::Error; };
struct BoundaryTooClose : Error { using Error::Error; };
struct ClosedCurveDetected : Error { using Error::Error; };
struct SeedExhausted : Error { using Error::Error; };
struct UnboundedParameter : Error { using Error::Error; };

struct ConfigError : Error {
  std::string key;
  ConfigError(const std::string& key_, const std::string& msg)
      : Error("config key '" + key_ + "': " + msg), key(key_) {}
};

}  // namespace zs
