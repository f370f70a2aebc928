#pragma once

#include <span>
#include <vector>

namespace efl {

/// One-dimensional cubic spline with not-a-knot end conditions.
/// Needs at least 4 strictly increasing abscissae.  Derivatives up to order 2
/// are continuous; order 3 is piecewise constant and exposed for completeness.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::span<const double> x, std::span<const double> y);

  double eval(double x, int deriv = 0) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace efl
