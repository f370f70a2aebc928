#include "efl/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace efl {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  const size_t n = x_.size();
  if (n < 4) throw std::invalid_argument("CubicSpline: need at least 4 nodes");
  if (y_.size() != n) throw std::invalid_argument("CubicSpline: x/y size mismatch");
  for (size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicSpline: abscissae not increasing");

  std::vector<double> h(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

  // Interior second-derivative equations with the end values eliminated via
  // the not-a-knot relations:
  //   m0     = m1 (1 + h0/h1) - m2 (h0/h1)
  //   m(n-1) = m(n-2) (1 + h(n-2)/h(n-3)) - m(n-3) (h(n-2)/h(n-3))
  const size_t N = n - 2;
  std::vector<double> sub(N, 0.0), diag(N, 0.0), sup(N, 0.0), rhs(N, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const size_t k = i - 1;
    sub[k] = h[i - 1] / 6.0;
    diag[k] = (h[i - 1] + h[i]) / 3.0;
    sup[k] = h[i] / 6.0;
    rhs[k] = (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
  }
  {
    const double q = h[0] / h[1];
    diag[0] += sub[0] * (1.0 + q);
    sup[0] -= sub[0] * q;
    sub[0] = 0.0;
  }
  {
    const double q = h[n - 2] / h[n - 3];
    diag[N - 1] += sup[N - 1] * (1.0 + q);
    sub[N - 1] -= sup[N - 1] * q;
    sup[N - 1] = 0.0;
  }

  // Thomas solve.
  for (size_t k = 1; k < N; ++k) {
    const double w = sub[k] / diag[k - 1];
    diag[k] -= w * sup[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  std::vector<double> u(N);
  u[N - 1] = rhs[N - 1] / diag[N - 1];
  for (size_t k = N - 1; k-- > 0;) u[k] = (rhs[k] - sup[k] * u[k + 1]) / diag[k];

  m_.assign(n, 0.0);
  for (size_t k = 0; k < N; ++k) m_[k + 1] = u[k];
  m_[0] = m_[1] * (1.0 + h[0] / h[1]) - m_[2] * (h[0] / h[1]);
  m_[n - 1] = m_[n - 2] * (1.0 + h[n - 2] / h[n - 3]) - m_[n - 3] * (h[n - 2] / h[n - 3]);
}

double CubicSpline::eval(double x, int deriv) const {
  const double lo = x_.front();
  const double hi = x_.back();
  const double slack = 1e-12 * (1.0 + hi - lo);
  if (x < lo - slack || x > hi + slack)
    throw std::out_of_range("CubicSpline: query outside node range");
  x = std::clamp(x, lo, hi);

  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const size_t i = static_cast<size_t>(std::clamp<ptrdiff_t>(it - x_.begin() - 1, 0,
                                                             static_cast<ptrdiff_t>(x_.size()) - 2));
  const double h = x_[i + 1] - x_[i];
  const double a = x_[i + 1] - x;
  const double b = x - x_[i];
  switch (deriv) {
    case 0:
      return (m_[i] * a * a * a + m_[i + 1] * b * b * b) / (6.0 * h) +
             (y_[i] / h - m_[i] * h / 6.0) * a + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
    case 1:
      return (-m_[i] * a * a + m_[i + 1] * b * b) / (2.0 * h) - (y_[i] / h - m_[i] * h / 6.0) +
             (y_[i + 1] / h - m_[i + 1] * h / 6.0);
    case 2:
      return (m_[i] * a + m_[i + 1] * b) / h;
    case 3:
      return (m_[i + 1] - m_[i]) / h;
    default:
      throw std::invalid_argument("CubicSpline: derivative order must be 0..3");
  }
}

}  // namespace efl
