#include "efl/fd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace efl {

double fd_step(double x, double scale) {
  if (scale <= 0.0) scale = std::max(1.0, std::fabs(x));
  const double eps_cbrt = std::cbrt(std::numeric_limits<double>::epsilon());
  return std::max(eps_cbrt * scale, 1e-7 * scale);
}

static double central(const std::function<double(double)>& f, double x, int order, double h) {
  switch (order) {
    case 1:
      return (f(x + h) - f(x - h)) / (2.0 * h);
    case 2:
      return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    default:
      throw std::invalid_argument("fd_derivative: order must be 1 or 2");
  }
}

double fd_central(const std::function<double(double)>& f, double x, int order, double h) {
  return central(f, x, order, h);
}

double fd_derivative(const std::function<double(double)>& f, double x, int order, double scale) {
  const double h = fd_step(x, scale);
  const double coarse = central(f, x, order, h);
  const double fine = central(f, x, order, 0.5 * h);
  // Both stencils are O(h^2); one Richardson level cancels the leading term.
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> nodes, int max_order) {
  const int n = static_cast<int>(nodes.size());
  if (n == 0) throw std::invalid_argument("fd_weights: empty node set");
  if (max_order >= n)
    throw std::invalid_argument("fd_weights: need more nodes than the requested order");

  // Fornberg (1988), generation of finite difference formulas on arbitrary nodes.
  std::vector<std::vector<double>> c(n, std::vector<double>(max_order + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }

  // Transpose into w[k][i] for caller convenience.
  std::vector<std::vector<double>> w(max_order + 1, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= max_order; ++k) w[k][i] = c[i][k];
  return w;
}

}  // namespace efl
