#include "efl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace efl {

namespace {

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// 16-point Gauss-Legendre rule on [-1, 1], symmetric halves.
constexpr int kGaussHalf = 8;
constexpr double kGaussNode[kGaussHalf] = {
    0.09501250983763744, 0.28160355077925891, 0.45801677765722739, 0.61787624440264375,
    0.75540440835500303, 0.86563120238783174, 0.94457502307323258, 0.98940093499164993};
constexpr double kGaussWeight[kGaussHalf] = {
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254, 0.14959598881657673,
    0.12462897125553387, 0.09515851168249278, 0.06225352393864789, 0.02715245941175409};

double gauss16(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < kGaussHalf; ++i)
    acc += kGaussWeight[i] * (f(mid - half * kGaussNode[i]) + f(mid + half * kGaussNode[i]));
  return acc * half;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (tol <= 0.0) throw std::invalid_argument("integrate: tol must be positive");
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  return adapt(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 48);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, std::vector<double> knots,
                                       double tol)
    : f_(std::move(f)), tol_(tol) {
  if (knots.size() < 2) throw std::invalid_argument("CumulativeIntegral: need at least 2 knots");
  if (!std::is_sorted(knots.begin(), knots.end()))
    throw std::invalid_argument("CumulativeIntegral: knots must be sorted");
  const double seg_tol = tol_ / static_cast<double>(knots.size());
  knots_.reserve(knots.size());
  sums_.reserve(knots.size());
  knots_.push_back(knots.front());
  sums_.push_back(0.0);
  for (size_t i = 1; i < knots.size(); ++i)
    append_segment(knots[i - 1], knots[i], seg_tol, 24);
}

void CumulativeIntegral::append_segment(double a, double b, double seg_tol, int depth) {
  const double panel = gauss16(f_, a, b);
  if (depth > 0 && a != b) {
    const double check = integrate(f_, a, b, 0.5 * seg_tol);
    if (!(std::fabs(panel - check) <= std::max(seg_tol, 1e-14 * std::fabs(check)))) {
      const double m = 0.5 * (a + b);
      append_segment(a, m, 0.5 * seg_tol, depth - 1);
      append_segment(m, b, 0.5 * seg_tol, depth - 1);
      return;
    }
  }
  knots_.push_back(b);
  sums_.push_back(sums_.back() + panel);
}

double CumulativeIntegral::value(double x) const {
  const double lo = knots_.front();
  const double hi = knots_.back();
  const double slack = 1e-12 * (1.0 + std::fabs(hi - lo));
  if (x < lo - slack || x > hi + slack)
    throw std::out_of_range("CumulativeIntegral: query outside covered range");
  x = std::clamp(x, lo, hi);
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const size_t i = static_cast<size_t>(std::max<ptrdiff_t>(1, it - knots_.begin())) - 1;
  if (x == knots_[i]) return sums_[i];
  return sums_[i] + gauss16(f_, knots_[i], x);
}

}  // namespace efl
