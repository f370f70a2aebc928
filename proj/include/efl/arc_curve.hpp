#pragma once

/// @file arc_curve.hpp
/// Arc-length view of an axis curve: s(z) by quadrature of the meridian speed
/// |d_z phi| = sqrt(1 + R'^2 + (R Theta')^2), z(s) by monotone inversion.

#include <memory>
#include <vector>

#include "efl/axis_curve.hpp"
#include "efl/geometry.hpp"
#include "efl/quadrature.hpp"

namespace efl {

struct ArcSample {
  double s = 0.0, z = 0.0;
  double R = 0.0, Theta = 0.0;
  double z1 = 0.0, z2 = 0.0;  // dz/ds and d^2 z/ds^2
};

class ArcCurve {
 public:
  ArcCurve(std::shared_ptr<const AxisCurve> base, double quad_tol = 1e-12);

  double total_length() const { return s_of_z_->total(); }
  double s_of_z(double z) const;
  double z_of_s(double s) const;

  /// Germ of the underlying curve at arc position s, with dz/ds and d^2z/ds^2.
  ArcSample at_s(double s) const;

  /// Embedded 3-space point phi(s).
  Vec3 point(double s) const;

  const AxisCurve& base() const { return *base_; }
  const std::vector<ArcSample>& samples() const { return samples_; }

 private:
  std::shared_ptr<const AxisCurve> base_;
  std::unique_ptr<CumulativeIntegral> s_of_z_;
  std::vector<ArcSample> samples_;
};

/// Convenience wrapper matching the pipeline naming.
ArcCurve arc_length_reparam(std::shared_ptr<const AxisCurve> curve, double quad_tol = 1e-12);

}  // namespace efl
