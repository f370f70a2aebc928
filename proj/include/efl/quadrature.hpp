#pragma once

#include <functional>
#include <vector>

namespace efl {

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

/// Cumulative integral of f from x0, queryable at arbitrary points of the
/// covered range.  Each knot segment carries one fixed-order Gauss-Legendre
/// panel, cross-checked against adaptive Simpson at construction and split
/// until the two agree within tol; interior queries integrate the partial
/// panel with the same rule.  value() is therefore deterministic, continuous
/// at knots to the last bit, and smooth enough inside segments to be
/// finite-differenced without tolerance-level jitter.
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::function<double(double)> f, std::vector<double> knots, double tol);

  double value(double x) const;  ///< integral of f over [knots.front(), x]
  double total() const { return sums_.back(); }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& knot_values() const { return sums_; }

 private:
  void append_segment(double a, double b, double seg_tol, int depth);

  std::function<double(double)> f_;
  std::vector<double> knots_;  // input knots plus any verification splits
  std::vector<double> sums_;   // sums_[i] = integral over [knots_[0], knots_[i]]
  double tol_;
};

}  // namespace efl
