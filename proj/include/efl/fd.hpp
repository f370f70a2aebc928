#pragma once

#include <functional>
#include <span>
#include <vector>

namespace efl {

/// Step used by the central-difference oracles:
///   h = max(eps_mach^(1/3) * scale, 1e-7 * scale),  scale = max(1, |x|) unless given.
double fd_step(double x, double scale = 0.0);

/// Richardson-extrapolated central difference of order 1 or 2.
/// One extrapolation level: combines the h and h/2 estimates.
double fd_derivative(const std::function<double(double)>& f, double x, int order,
                     double scale = 0.0);

/// Plain central difference (no extrapolation), used where f itself is already
/// a finite-difference quantity and extra evaluations buy nothing.
double fd_central(const std::function<double(double)>& f, double x, int order,
                  double h);

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
/// Returns w[k][i], the weight of f(nodes[i]) in the order-k derivative at x0,
/// for every k = 0..max_order.
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> nodes,
                                            int max_order);

}  // namespace efl
