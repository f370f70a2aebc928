#include "efl/arc_curve.hpp"

#include <cassert>
#include <cmath>

namespace efl {

namespace {

double meridian_speed(const CurveGerm& g) {
  const double rth = g.R * g.Th1;
  return std::sqrt(1.0 + g.R1 * g.R1 + rth * rth);
}

}  // namespace

ArcCurve::ArcCurve(std::shared_ptr<const AxisCurve> base, double quad_tol) : base_(std::move(base)) {
  if (!base_) throw ConfigError("arc_length_reparam: null curve");
  if (base_->samples.size() < 2) throw ConfigError("arc_length_reparam: curve has no extent");
  std::vector<double> knots;
  knots.reserve(base_->samples.size());
  for (const auto& s : base_->samples) knots.push_back(s.z);

  const AxisCurve* curve = base_.get();
  s_of_z_ = std::make_unique<CumulativeIntegral>(
      [curve](double z) {
        const double v = meridian_speed(curve->germ(z));
        assert(v > 0.0);  // >= 1 by construction for unilateral curves
        return v;
      },
      std::move(knots), quad_tol);

  samples_.reserve(base_->samples.size());
  for (size_t i = 0; i < base_->samples.size(); ++i) {
    const CurveGerm& g = base_->samples[i];
    ArcSample a;
    a.z = g.z;
    a.s = s_of_z_->value(g.z);
    a.R = g.R;
    a.Theta = g.Th;
    const double q = 1.0 + g.R1 * g.R1 + (g.R * g.Th1) * (g.R * g.Th1);
    a.z1 = 1.0 / std::sqrt(q);
    a.z2 = -(g.R1 * g.R2 + g.R * g.Th1 * (g.R1 * g.Th1 + g.R * g.Th2)) / (q * q);
    samples_.push_back(a);
  }
}

double ArcCurve::s_of_z(double z) const { return s_of_z_->value(z); }

double ArcCurve::z_of_s(double s) const {
  const double total = total_length();
  const double slack = 1e-12 * (1.0 + total);
  if (s < -slack || s > total + slack) throw std::out_of_range("ArcCurve: s outside [0, length]");
  s = std::clamp(s, 0.0, total);
  double lo = base_->z_span.start, hi = base_->z_span.end;
  // Newton from the midpoint with a bisection safeguard; s(z) is smooth and
  // strictly increasing with slope >= 1.
  double z = 0.5 * (lo + hi);
  for (int i = 0; i < 100; ++i) {
    const double fs = s_of_z_->value(z) - s;
    if (fs > 0.0)
      hi = z;
    else
      lo = z;
    const double speed = meridian_speed(base_->germ(z));
    double next = z - fs / speed;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - z) < 1e-16 * (1.0 + std::fabs(z))) return next;
    z = next;
  }
  return z;
}

ArcSample ArcCurve::at_s(double s) const {
  const double z = z_of_s(s);
  const CurveGerm g = base_->germ(z);
  ArcSample a;
  a.s = s;
  a.z = z;
  a.R = g.R;
  a.Theta = g.Th;
  const double q = 1.0 + g.R1 * g.R1 + (g.R * g.Th1) * (g.R * g.Th1);
  a.z1 = 1.0 / std::sqrt(q);
  a.z2 = -(g.R1 * g.R2 + g.R * g.Th1 * (g.R1 * g.Th1 + g.R * g.Th2)) / (q * q);
  return a;
}

Vec3 ArcCurve::point(double s) const {
  const ArcSample a = at_s(s);
  return cyl_point_to_cart(a.R, a.Theta, a.z);
}

ArcCurve arc_length_reparam(std::shared_ptr<const AxisCurve> curve, double quad_tol) {
  return ArcCurve(std::move(curve), quad_tol);
}

}  // namespace efl
