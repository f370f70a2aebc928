#include "efl/transport.hpp"

#include <algorithm>
#include <cmath>

#include "efl/errors.hpp"
#include "efl/ode.hpp"
#include "efl/quadrature.hpp"
#include "efl/trajectory.hpp"

namespace efl {

double vtheta_gronwall(const FlowField& field, double r0, double z0, double t, double ode_tol) {
  if (!(ode_tol > 0.0)) throw ConfigError("vtheta_gronwall: ode_tol must be positive");
  const double v0 = field.eval(r0, z0, 0.0).th;
  if (t == 0.0) return v0;
  if (!(t > 0.0)) throw ConfigError("vtheta_gronwall: t must be nonnegative");

  const Trajectory traj = integrate_trajectory(field, r0, 0.0, z0, Span{0.0, t}, ode_tol);
  if (traj.left_domain) throw LeftDomain(traj.t_end, t);

  const double eps = field.axis_eps();
  auto rate = [&field, &traj, eps](double tp) {
    const TrajectorySample s = traj.state(tp);
    const double r = std::max(s.r, 0.0);
    const FieldJet J = field.jet(r, s.z, tp, 1);
    return radial_over_r(J, r, eps);  // v_r / R*, parity limit on the axis
  };
  // Same tolerance for the exponent as for the path itself.
  const double expo = integrate(rate, 0.0, t, ode_tol);
  return v0 * std::exp(-expo);
}

Deformation2D deformation_2d(const FlowField& field, double r0, double z0, double t,
                             double ode_tol) {
  if (!(ode_tol > 0.0)) throw ConfigError("deformation_2d: ode_tol must be positive");
  Deformation2D out;
  if (t == 0.0) return out;
  if (!(t > 0.0)) throw ConfigError("deformation_2d: t must be nonnegative");
  if (r0 < 0.0) throw NegativeRadius(r0);
  const Domain& dom = field.domain();
  if (!dom.contains(r0, z0)) throw OutOfDomain(r0, z0);

  const bool axis = r0 < field.axis_eps();
  const double z_lo = dom.z_min_open && std::isfinite(dom.z_min)
                          ? dom.z_min + 1e-12 * (1.0 + std::fabs(dom.z_min))
                          : dom.z_min;

  // State: (R*, Z*, M) with M the meridian deformation, M' = (grad u) M.
  auto rhs = [&field, &dom, axis, z_lo](double tp, const StateVec<6>& y, StateVec<6>& dy) {
    const double r = axis ? 0.0 : std::clamp(y[0], dom.r_min, dom.r_max);
    const double z = std::clamp(y[1], z_lo, dom.z_max);
    const FieldJet J = field.jet(r, z, tp, 1);
    dy[0] = axis ? 0.0 : J.u.r;
    dy[1] = J.u.z;
    dy[2] = J.d_r.r * y[2] + J.d_z.r * y[4];
    dy[3] = J.d_r.r * y[3] + J.d_z.r * y[5];
    dy[4] = J.d_r.z * y[2] + J.d_z.z * y[4];
    dy[5] = J.d_r.z * y[3] + J.d_z.z * y[5];
  };
  auto outside = [&dom](double, const StateVec<6>& y) { return !dom.contains(y[0], y[1]); };

  const IntegrateResult<6> res =
      dopri5<6>(rhs, 0.0, StateVec<6>{axis ? 0.0 : r0, z0, 1.0, 0.0, 0.0, 1.0}, t,
                ode_tol / kDenseSafety, outside, t / kCurveStepDivisor);
  if (res.outcome == OdeOutcome::stopped) throw LeftDomain(res.t_end, t);

  out.dR_dr0 = res.y_end[2];
  out.dR_dz0 = res.y_end[3];
  out.dZ_dr0 = res.y_end[4];
  out.dZ_dz0 = res.y_end[5];
  out.det = out.dR_dr0 * out.dZ_dz0 - out.dR_dz0 * out.dZ_dr0;

  // Determinant law det = exp(-int v_r/R*) over the same dense path.
  const double eps = field.axis_eps();
  auto rate = [&field, &res, eps](double tp) {
    const StateVec<6> y = res.dense.eval(tp);
    const double r = std::max(y[0], 0.0);
    const FieldJet J = field.jet(r, y[1], tp, 1);
    return radial_over_r(J, r, eps);
  };
  out.det_law = std::exp(-integrate(rate, 0.0, t, ode_tol));
  return out;
}

}  // namespace efl
