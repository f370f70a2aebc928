#pragma once

#include <stdexcept>
#include <string>

namespace efl {

/// Exit-code family an error maps to when it escapes the CLI.
///   config    -> 1   (bad input: config file, grid file, parameter validation)
///   numerical -> 2   (integration / inversion / stencil failure at runtime)
///   validation-> 3   (a validate-mode invariant check failed)
enum class ErrorFamily { config = 1, numerical = 2, validation = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorFamily family, std::string what) : std::runtime_error(std::move(what)), family_(family) {}
  ErrorFamily family() const { return family_; }

 private:
  ErrorFamily family_;
};

// ---- configuration / input errors -----------------------------------------

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorFamily::config, "config: " + w) {}
};

struct GridFormatError : Error {
  explicit GridFormatError(const std::string& w) : Error(ErrorFamily::config, "grid: " + w) {}
};

struct AxisParityError : Error {
  explicit AxisParityError(const std::string& w) : Error(ErrorFamily::config, "grid axis parity: " + w) {}
};

// ---- evaluation-contract errors --------------------------------------------

struct NegativeRadius : Error {
  explicit NegativeRadius(double r)
      : Error(ErrorFamily::numerical, "field evaluated at negative radius r=" + std::to_string(r)) {}
};

struct OutOfDomain : Error {
  OutOfDomain(double r, double z)
      : Error(ErrorFamily::numerical,
              "point (r=" + std::to_string(r) + ", z=" + std::to_string(z) + ") outside field domain") {}
  explicit OutOfDomain(const std::string& w) : Error(ErrorFamily::numerical, "domain: " + w) {}
};

struct ThirdOrderUnavailable : Error {
  explicit ThirdOrderUnavailable(const std::string& who)
      : Error(ErrorFamily::numerical, who + ": third-order derivatives unavailable for this field") {}
};

// ---- runtime numerical errors ----------------------------------------------

struct StiffnessFailure : Error {
  explicit StiffnessFailure(const std::string& w) : Error(ErrorFamily::numerical, "ode: " + w) {}
};

struct NonMonotone : Error {
  explicit NonMonotone(const std::string& w) : Error(ErrorFamily::numerical, "inversion: " + w) {}
};

struct InsufficientSpan : Error {
  explicit InsufficientSpan(const std::string& w) : Error(ErrorFamily::numerical, "stencil span: " + w) {}
};

struct StepTooLarge : Error {
  explicit StepTooLarge(const std::string& w) : Error(ErrorFamily::numerical, "fd step: " + w) {}
};

struct StagnantPoint : Error {
  StagnantPoint(double r, double z)
      : Error(ErrorFamily::numerical, "speed below floor at (r=" + std::to_string(r) +
                                          ", z=" + std::to_string(z) + ")") {}
};

/// Axial velocity lost positivity where monotone-z machinery needs it.
/// Carries the witness location.
struct NotUnilateral : Error {
  NotUnilateral(double r, double z, double t)
      : Error(ErrorFamily::numerical,
              "flow not unilateral: v_z <= 0 at (r=" + std::to_string(r) +
                  ", z=" + std::to_string(z) + ", t=" + std::to_string(t) + ")"),
        witness_r(r), witness_z(z), witness_t(t) {}
  double witness_r, witness_z, witness_t;
};

struct TubeViolation : Error {
  explicit TubeViolation(double one_minus_kr)
      : Error(ErrorFamily::numerical,
              "moving frame outside tube of validity: 1 - kappa*r_bar = " +
                  std::to_string(one_minus_kr)) {}
};

struct Degenerate : Error {
  explicit Degenerate(const std::string& w) : Error(ErrorFamily::numerical, "degenerate frame: " + w) {}
};

struct ZeroFlux : Error {
  explicit ZeroFlux(const std::string& w) : Error(ErrorFamily::numerical, "flux: " + w) {}
};

struct StagnantAxis : Error {
  explicit StagnantAxis(double z)
      : Error(ErrorFamily::numerical, "axis velocity below floor at z=" + std::to_string(z)) {}
};

struct DegenerateTube : Error {
  explicit DegenerateTube(const std::string& w) : Error(ErrorFamily::numerical, "stream tube: " + w) {}
};

struct SeedSpacingTooCoarse : Error {
  explicit SeedSpacingTooCoarse(const std::string& w) : Error(ErrorFamily::numerical, "tube seeds: " + w) {}
};

struct OutsideTubeRange : Error {
  explicit OutsideTubeRange(const std::string& w) : Error(ErrorFamily::numerical, "tube inversion: " + w) {}
};

struct LeftDomain : Error {
  LeftDomain(double t_exit, double t_request)
      : Error(ErrorFamily::numerical,
              "trajectory left the domain at t=" + std::to_string(t_exit) +
                  " before the requested t=" + std::to_string(t_request)),
        t_exit(t_exit), t_request(t_request) {}
  double t_exit, t_request;
};

struct ValidationFailure : Error {
  explicit ValidationFailure(const std::string& w) : Error(ErrorFamily::validation, "validation: " + w) {}
};

}  // namespace efl
