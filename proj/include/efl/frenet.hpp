#pragma once

/// @file frenet.hpp
/// Frenet frames along axis-length curves: curvature, torsion and the
/// arc-derivative of curvature by two independent routes -- assembled from
/// the curve's derivative germ, or finite-differenced from the embedded
/// 3-space curve -- plus the moving-frame coordinate matrices and the
/// near-axis asymptotic forms of ds_kappa.

#include <array>

#include "efl/arc_curve.hpp"
#include "efl/axis_curve.hpp"
#include "efl/geometry.hpp"

namespace efl {

/// Curvatures below kKappaFloorScale / (curve length) mark the frame
/// degenerate instead of emitting noise-driven normals: straight segments
/// are a supported case, not an accident.
inline constexpr double kKappaFloorScale = 1e-9;

/// Orthonormal frame with curvature data at one curve point.
///
/// Conventions: kappa >= 0 and torsion >= 0 always; b = sigma * (tau x n)
/// with sigma in {+1, -1} recording the handedness that keeps the reported
/// torsion nonnegative.  When degenerate only tau and kappa are meaningful;
/// n, b, torsion and ds_kappa are NaN.
struct FrenetData {
  Vec3 tau{}, n{}, b{};
  double kappa = 0.0;
  double torsion = 0.0;
  double ds_kappa = 0.0;  ///< d kappa / d s (arc length)
  int sigma = 1;
  bool degenerate = false;
};

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mat_mul(const Mat3& a, const Mat3& b);

/// Normal-coordinate differentials at offsets (r_bar, z_bar) from the curve.
/// Rows of `forward` express (d_theta_bar, d_r_bar, d_z_bar) in the
/// (tau, n, b) basis; `inverse` is the exact closed-form inverse.  Both are
/// the identity at r_bar = z_bar = 0.
struct FrameMatrices {
  Mat3 forward{};
  Mat3 inverse{};
};

/// Frame from the curve's derivative tables at height z.
///
/// kappa^2 is assembled in the three-term closed form
///   |gamma''|^2 (z')^4 + 2 (gamma'.gamma'') (z')^2 z'' + |gamma'|^2 (z'')^2
/// with gamma(z) the embedded curve, z' = |gamma'|^{-1}; torsion comes from
/// the triple-product identity (gamma' x gamma'').gamma''' / |gamma' x gamma''|^2
/// (one derivative order less noise than differencing b), and ds_kappa from
/// analytic differentiation of the kappa^2 form.  Sub-floor curvature returns
/// a degenerate-flagged result rather than throwing.
FrenetData frame_explicit(const AxisCurve& curve, double z);

/// Independent oracle: 5-point finite differences of phi(s) on a stencil
/// spanning s +- 2h.  The frame and torsion use node spacing h; ds_kappa
/// differences curvature over five half-spaced interior stations, each from
/// its own sliding 5-point window, so every evaluation stays within the
/// 2h margin.  Throws InsufficientSpan when [s - 2h, s + 2h] leaves the
/// curve, ConfigError for a nonpositive h.
FrenetData frame_numeric(const ArcCurve& curve, double s, double h);

/// Matrices of the moving-frame coordinates at offsets (r_bar, z_bar):
///   forward = [[1 - kappa r_bar, -z_bar T, r_bar T], [0, 1, 0], [0, 0, 1]].
/// Throws TubeViolation outside the tube of validity (1 - kappa r_bar <= 0).
FrameMatrices moving_frame_matrices(double kappa, double torsion, double r_bar, double z_bar);

enum class AsymptoticRegime {
  breakdown,  ///< swirl gradient dominated: ds_kappa ~ R Theta' Theta''
  blowup      ///< third-derivative dominated: ds_kappa ~ R Theta'''
};

/// Leading-order proxy for ds_kappa in the given regime, for comparison
/// against the full value from frame_explicit.
double ds_kappa_asymptotic(const AxisCurve& curve, double z, AsymptoticRegime regime);

}  // namespace efl
