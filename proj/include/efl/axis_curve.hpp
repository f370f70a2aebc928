#pragma once

/// @file axis_curve.hpp
/// Curves parametrized by axial position z: frozen-time streamlines and
/// axis-length reparametrizations of particle paths.  Each curve can produce,
/// at any z in its span, the full derivative germ (R, R', R'', R''',
/// Theta', Theta'', Theta''') that the curvature/torsion formulas consume.
///
/// Derivatives through second order in z need only second-order field jets
/// (the right-hand sides are built from field *values*), so they are computed
/// exactly by jet arithmetic even for grid-backed fields.  Third z-derivatives
/// follow the same chain rule off the axis; the only differenced quantity is
/// Theta''' of on-axis curves, whose exact form would require mixed third
/// field derivatives that grid-backed fields cannot supply.

#include <memory>
#include <string>
#include <vector>

#include "efl/trajectory.hpp"

namespace efl {

enum class CurveKind { streamline, trajectory };

/// Derivative germ of the curve z -> (R(z), Theta(z)) at one station.
/// For trajectory-kind curves t varies with z (t1 = dt/dz = 1/v_z); for
/// streamlines t is the frozen time and t1 = t2 = 0.
struct CurveGerm {
  double z = 0.0, t = 0.0;
  double R = 0.0, Th = 0.0;
  double R1 = 0.0, R2 = 0.0, R3 = 0.0;
  double Th1 = 0.0, Th2 = 0.0, Th3 = 0.0;
  double t1 = 0.0, t2 = 0.0;
};

class AxisCurve {
 public:
  CurveKind kind = CurveKind::streamline;
  bool axis = false;  ///< R == 0 identically (seed on the axis)
  double r0 = 0.0, theta0 = 0.0;
  double t_frozen = 0.0;  ///< streamline kind only
  Span z_span{};
  FieldPtr field;
  std::vector<CurveGerm> samples;  ///< one per accepted step, z increasing

  /// Full derivative germ at z (pointwise from field jets, not interpolated).
  CurveGerm germ(double z) const;

  /// Curve state (R, Theta) at z from the dense ODE solution.
  void state(double z, double& R, double& Th) const;

  /// Time at which the underlying particle crosses height z; the frozen time
  /// for streamlines.
  double time_of(double z) const;

  // -- internal representation -------------------------------------------
  DenseOutput<2> line_dense;               ///< (R, Theta)(z) for streamline kind
  std::shared_ptr<const Trajectory> traj;  ///< trajectory kind
  double third_step_floor = 1e-3;  ///< relative step floor for the differenced third order
};

/// Integrate the frozen-time streamline dR/dz = v_r/v_z, R dTheta/dz = v_theta/v_z
/// from (r0_tilde, z_span.start).  Throws NotUnilateral (with the offending
/// point) if v_z <= 0 is met.  Seeds below the axis threshold give the axis
/// curve R == 0, Theta == theta0.
AxisCurve integrate_streamline(FieldPtr field, double r0_tilde, double t_frozen, Span z_span,
                               double ode_tol, double theta0 = 0.0);

/// View a unilateral particle path as a curve in z via t = Z*^{-1}(z).
/// Throws NotUnilateral if the height samples fail to increase strictly.
AxisCurve axis_length_reparam(Trajectory traj, FieldPtr field);

}  // namespace efl
