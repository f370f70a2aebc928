/// @file frenet.cpp

#include "efl/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "efl/errors.hpp"
#include "efl/field.hpp"

namespace efl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// z-derivatives of the embedded curve gamma(z) = (R cos Th, R sin Th, z),
/// in the meridian basis e_r = (cos Th, sin Th, 0), e_t = (-sin Th, cos Th, 0).
struct GammaDerivs {
  Vec3 d1, d2, d3;
};

GammaDerivs gamma_derivs(const CurveGerm& g) {
  const double c = std::cos(g.Th), s = std::sin(g.Th);
  const Vec3 e_r{c, s, 0.0}, e_t{-s, c, 0.0};
  const double A = g.R2 - g.R * g.Th1 * g.Th1;
  const double B = 2.0 * g.R1 * g.Th1 + g.R * g.Th2;
  const double C = g.R3 - 3.0 * g.R1 * g.Th1 * g.Th1 - 3.0 * g.R * g.Th1 * g.Th2;
  const double D = 3.0 * g.R2 * g.Th1 + 3.0 * g.R1 * g.Th2 + g.R * (g.Th3 - g.Th1 * g.Th1 * g.Th1);
  GammaDerivs out;
  out.d1 = g.R1 * e_r + g.R * g.Th1 * e_t + Vec3{0.0, 0.0, 1.0};
  out.d2 = A * e_r + B * e_t;
  out.d3 = C * e_r + D * e_t;
  return out;
}

/// Lower bound on the curve length scaling the curvature floor.  Chord sums
/// underestimate; the z-span covers sparse sample sets (speed >= 1).
double length_lower_bound(const AxisCurve& curve) {
  double L = 0.0;
  const auto& ss = curve.samples;
  for (size_t i = 1; i < ss.size(); ++i) {
    const Vec3 a = cyl_point_to_cart(ss[i - 1].R, ss[i - 1].Th, ss[i - 1].z);
    const Vec3 b = cyl_point_to_cart(ss[i].R, ss[i].Th, ss[i].z);
    L += norm(b - a);
  }
  return std::max(L, curve.z_span.length());
}

void mark_degenerate(FrenetData& f) {
  f.degenerate = true;
  f.n = {kNaN, kNaN, kNaN};
  f.b = {kNaN, kNaN, kNaN};
  f.torsion = kNaN;
  f.ds_kappa = kNaN;
}

}  // namespace

FrenetData frame_explicit(const AxisCurve& curve, double z) {
  const CurveGerm g = curve.germ(z);
  const GammaDerivs d = gamma_derivs(g);
  const double q = norm2(d.d1);  // 1 + R'^2 + (R Th')^2
  const double zp = 1.0 / std::sqrt(q);
  const double gg = dot(d.d1, d.d2);
  const double zpp = -gg / (q * q);

  FrenetData f;
  f.tau = zp * d.d1;
  const double k2 = norm2(d.d2) * zp * zp * zp * zp + 2.0 * gg * zp * zp * zpp + q * zpp * zpp;
  f.kappa = std::sqrt(std::max(k2, 0.0));
  if (f.kappa < kKappaFloorScale / length_lower_bound(curve)) {
    mark_degenerate(f);
    return f;
  }

  // d_s^2 phi = gamma'' z'^2 + gamma' z''; unit by the kappa^2 identity,
  // orthogonal to tau because z'' was chosen to cancel the tangential part.
  f.n = (1.0 / f.kappa) * (zp * zp * d.d2 + zpp * d.d1);
  const Vec3 c = cross(d.d1, d.d2);
  const double c2 = norm2(c);
  const double t_signed = dot(c, d.d3) / c2;
  f.sigma = (t_signed < 0.0) ? -1 : 1;
  f.torsion = f.sigma * t_signed;
  f.b = static_cast<double>(f.sigma) * cross(f.tau, f.n);

  // d(kappa^2)/dz of kappa^2 = |c|^2 / q^3, with c' = gamma' x gamma''',
  // q' = 2 gamma'.gamma''.
  const double dk2 =
      2.0 * dot(c, cross(d.d1, d.d3)) / (q * q * q) - 6.0 * c2 * gg / (q * q * q * q);
  f.ds_kappa = zp * dk2 / (2.0 * f.kappa);
  return f;
}

FrenetData frame_numeric(const ArcCurve& curve, double s, double h) {
  if (!(h > 0.0)) throw ConfigError("frame_numeric: stencil step h must be positive");
  const double L = curve.total_length();
  const double slack = 1e-12 * (1.0 + L);
  if (s - 2.0 * h < -slack || s + 2.0 * h > L + slack)
    throw InsufficientSpan("frame_numeric: stencil [s-2h, s+2h] = [" + std::to_string(s - 2.0 * h) +
                           ", " + std::to_string(s + 2.0 * h) + "] leaves the curve [0, " +
                           std::to_string(L) + "]");

  // Nine nodes at spacing h/2; the frame uses the h-spaced subset.
  std::array<Vec3, 9> p;
  for (int k = -4; k <= 4; ++k) p[k + 4] = curve.point(std::clamp(s + 0.5 * h * k, 0.0, L));

  const Vec3 d1 = (1.0 / (12.0 * h)) * (p[0] - 8.0 * p[2] + 8.0 * p[6] - p[8]);
  const Vec3 d2 =
      (1.0 / (12.0 * h * h)) * (-1.0 * p[0] + 16.0 * p[2] - 30.0 * p[4] + 16.0 * p[6] - p[8]);
  const Vec3 d3 = (1.0 / (2.0 * h * h * h)) * (-1.0 * p[0] + 2.0 * p[2] - 2.0 * p[6] + p[8]);

  const double sp = norm(d1);  // ~1 on an arc-length curve
  FrenetData f;
  f.tau = d1 / sp;
  const Vec3 c = cross(d1, d2);
  f.kappa = norm(c) / (sp * sp * sp);
  if (f.kappa < kKappaFloorScale / L) {
    mark_degenerate(f);
    return f;
  }

  f.n = normalized(d2 - dot(d2, f.tau) * f.tau);
  const double t_signed = dot(c, d3) / norm2(c);
  f.sigma = (t_signed < 0.0) ? -1 : 1;
  f.torsion = f.sigma * t_signed;
  f.b = static_cast<double>(f.sigma) * cross(f.tau, f.n);

  // Curvature at the five half-spaced stations, each from its own window.
  const double dlt = 0.5 * h;
  std::array<double, 5> ks;
  for (int j = -2; j <= 2; ++j) {
    const int i = j + 4;
    const Vec3 e1 = (1.0 / (12.0 * dlt)) * (p[i - 2] - 8.0 * p[i - 1] + 8.0 * p[i + 1] - p[i + 2]);
    const Vec3 e2 = (1.0 / (12.0 * dlt * dlt)) *
                    (-1.0 * p[i - 2] + 16.0 * p[i - 1] - 30.0 * p[i] + 16.0 * p[i + 1] - p[i + 2]);
    const double spj = norm(e1);
    ks[j + 2] = norm(cross(e1, e2)) / (spj * spj * spj);
  }
  f.ds_kappa = (ks[0] - 8.0 * ks[1] + 8.0 * ks[3] - ks[4]) / (12.0 * dlt);
  return f;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += a[i][k] * b[k][j];
      out[i][j] = acc;
    }
  return out;
}

FrameMatrices moving_frame_matrices(double kappa, double torsion, double r_bar, double z_bar) {
  const double m = 1.0 - kappa * r_bar;
  if (!(m > 0.0)) throw TubeViolation(m);
  FrameMatrices out;
  out.forward = {{{m, -z_bar * torsion, r_bar * torsion}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  out.inverse = {
      {{1.0 / m, z_bar * torsion / m, -r_bar * torsion / m}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  return out;
}

double ds_kappa_asymptotic(const AxisCurve& curve, double z, AsymptoticRegime regime) {
  const CurveGerm g = curve.germ(z);
  return regime == AsymptoticRegime::breakdown ? g.R * g.Th1 * g.Th2 : g.R * g.Th3;
}

}  // namespace efl
