#pragma once

/// @file trajectory.hpp
/// Particle paths of the meridian flow: R*, Theta*, Z* as functions of time,
/// with dense output, plus the lattice-sampling unilaterality check used
/// before any z-parametrized work.

#include <string>
#include <vector>

#include "efl/field.hpp"
#include "efl/ode.hpp"

namespace efl {

struct Span {
  double start = 0.0, end = 0.0;
  double length() const { return end - start; }
};

struct TrajectorySample {
  double t, r, theta, z;
};

/// Result of integrating dR/dt = v_r, dTheta/dt = v_theta/R, dZ/dt = v_z.
/// Theta is accumulated (not wrapped).  Axis seeds stay at r = 0 exactly and
/// advance Theta by the parity limit d_r v_theta(0, z, t).
struct Trajectory {
  std::vector<TrajectorySample> samples;  // one per accepted step, t increasing
  double r0 = 0.0, theta0 = 0.0, z0 = 0.0;
  Span t_span{};        // requested
  double t_end = 0.0;   // reached; < t_span.end iff left_domain
  bool left_domain = false;
  bool axis = false;
  double ode_tol = 1e-10;
  std::string field_name;
  DenseOutput<3> dense;  // state (r, theta, z) over t

  TrajectorySample state(double t) const {
    const StateVec<3> y = dense.eval(t);
    return {t, y[0], y[1], y[2]};
  }
};

/// Integrate the particle path from (r0, theta0, z0) over t_span.
/// Leaves the domain: returns the partial path with left_domain set, truncated
/// at the boundary crossing.  Step-size collapse raises StiffnessFailure.
Trajectory integrate_trajectory(const FlowField& field, double r0, double theta0, double z0,
                                Span t_span, double ode_tol);

/// Rectangle in the meridian half-plane.
struct Region {
  double r_lo = 0.0, r_hi = 1.0, z_lo = 0.0, z_hi = 1.0;
};

struct UnilateralReport {
  bool ok = false;
  bool has_witness = false;
  double witness_r = 0.0, witness_z = 0.0;
  double min_vz = 0.0;  // meaningful only when every lattice point evaluated
};

/// Sample v_z on an nr x nz lattice over the rectangle at time t.  ok iff the
/// minimum is strictly positive; otherwise the witness is the argmin.  Lattice
/// points outside the field's domain count as failures (witness there).
UnilateralReport unilateral_check(const FlowField& field, const Region& rect, double t,
                                  int nr = 33, int nz = 33);

}  // namespace efl
