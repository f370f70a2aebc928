#include "efl/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace efl {

namespace {

/// Pull a point back into the closed domain so that Runge-Kutta stage
/// evaluations just outside the boundary stay well-defined.  Accepted steps
/// are still posted against the exact domain via the stop predicate.
struct Clamp {
  double r_lo, r_hi, z_lo, z_hi;

  explicit Clamp(const Domain& d) {
    r_lo = d.r_min;
    r_hi = d.r_max;
    z_lo = d.z_min;
    z_hi = d.z_max;
    if (d.z_min_open && std::isfinite(d.z_min))
      z_lo = d.z_min + 1e-12 * (1.0 + std::fabs(d.z_min));
  }
  double r(double v) const { return std::clamp(v, r_lo, r_hi); }
  double z(double v) const { return std::clamp(v, z_lo, z_hi); }
};

}  // namespace

Trajectory integrate_trajectory(const FlowField& field, double r0, double theta0, double z0,
                                Span t_span, double ode_tol) {
  if (!(ode_tol > 0.0)) throw ConfigError("integrate_trajectory: ode_tol must be positive");
  if (!(t_span.end > t_span.start))
    throw ConfigError("integrate_trajectory: t_span must advance forward");
  if (r0 < 0.0) throw NegativeRadius(r0);
  if (!field.domain().contains(r0, z0)) throw OutOfDomain(r0, z0);

  const bool axis = r0 < field.axis_eps();
  const Clamp clamp(field.domain());
  const double eps = field.axis_eps();

  std::function<void(double, const StateVec<3>&, StateVec<3>&)> rhs;
  if (axis) {
    rhs = [&field, &clamp](double t, const StateVec<3>& y, StateVec<3>& dy) {
      const double z = clamp.z(y[2]);
      const FieldJet J = field.jet(0.0, z, t, 1);
      dy[0] = 0.0;           // stays on the axis exactly
      dy[1] = J.d_r.th;      // parity limit of v_theta / r
      dy[2] = J.u.z;
    };
  } else {
    rhs = [&field, &clamp, eps](double t, const StateVec<3>& y, StateVec<3>& dy) {
      const double r = clamp.r(y[0]), z = clamp.z(y[2]);
      if (r < eps) {
        const FieldJet J = field.jet(r, z, t, 1);
        dy[0] = J.u.r;
        dy[1] = swirl_over_r(J, r, eps);
        dy[2] = J.u.z;
      } else {
        const CylVec u = field.eval(r, z, t);
        dy[0] = u.r;
        dy[1] = u.th / r;
        dy[2] = u.z;
      }
    };
  }

  const Domain& dom = field.domain();
  auto outside = [&dom](double, const StateVec<3>& y) { return !dom.contains(y[0], y[2]); };

  IntegrateResult<3> res =
      dopri5<3>(rhs, t_span.start, StateVec<3>{axis ? 0.0 : r0, theta0, z0}, t_span.end,
                ode_tol / kDenseSafety, outside,
                std::fabs(t_span.end - t_span.start) / kCurveStepDivisor);

  Trajectory traj;
  traj.r0 = r0;
  traj.theta0 = theta0;
  traj.z0 = z0;
  traj.t_span = t_span;
  traj.t_end = res.t_end;
  traj.left_domain = (res.outcome == OdeOutcome::stopped);
  traj.axis = axis;
  traj.ode_tol = ode_tol;
  traj.field_name = field.name();
  traj.dense = std::move(res.dense);

  traj.samples.push_back({t_span.start, axis ? 0.0 : r0, theta0, z0});
  for (const auto& seg : traj.dense.segments()) {
    const double t1 = seg.t0 + seg.h;
    if (t1 > traj.t_end + 1e-15 * (1.0 + std::fabs(traj.t_end))) break;
    const StateVec<3> y = traj.dense.eval(t1);
    traj.samples.push_back({t1, axis ? 0.0 : std::max(y[0], 0.0), y[1], y[2]});
  }
  if (traj.samples.back().t < traj.t_end - 1e-14 * (1.0 + std::fabs(traj.t_end))) {
    const StateVec<3> y = traj.dense.eval(traj.t_end);
    traj.samples.push_back({traj.t_end, axis ? 0.0 : std::max(y[0], 0.0), y[1], y[2]});
  }
  return traj;
}

UnilateralReport unilateral_check(const FlowField& field, const Region& rect, double t, int nr,
                                  int nz) {
  if (nr < 2 || nz < 2) throw ConfigError("unilateral_check: lattice needs at least 2x2 points");
  UnilateralReport rep;
  rep.min_vz = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nr; ++i) {
    const double r = rect.r_lo + (rect.r_hi - rect.r_lo) * i / (nr - 1);
    for (int j = 0; j < nz; ++j) {
      const double z = rect.z_lo + (rect.z_hi - rect.z_lo) * j / (nz - 1);
      if (r < 0.0 || !field.domain().contains(r, z)) {
        rep.ok = false;
        rep.has_witness = true;
        rep.witness_r = r;
        rep.witness_z = z;
        rep.min_vz = std::numeric_limits<double>::quiet_NaN();
        return rep;
      }
      const double vz = field.eval(r, z, t).z;
      if (vz < rep.min_vz) {
        rep.min_vz = vz;
        rep.witness_r = r;
        rep.witness_z = z;
      }
    }
  }
  rep.ok = rep.min_vz > 0.0;
  rep.has_witness = !rep.ok;
  return rep;
}

}  // namespace efl
