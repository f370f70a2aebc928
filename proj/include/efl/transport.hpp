#pragma once

/// @file transport.hpp
/// Along-trajectory transport laws: swirl via the Gronwall identity and the
/// 2-d meridian Lagrangian deformation with its determinant law.

#include "efl/field.hpp"

namespace efl {

/// Swirl at time t of the particle seeded at (r0, z0):
///   v_theta = v_theta(r0, z0, 0) * exp(-int_0^t v_r/R* dt'),
/// with the parity limit d_r v_r for axis seeds.  The exponent is integrated
/// over the dense trajectory at the same tolerance as the ODE.
/// Throws LeftDomain if the particle exits the domain before t.
double vtheta_gronwall(const FlowField& field, double r0, double z0, double t, double ode_tol);

/// Meridian deformation matrix d(R*, Z*)/d(r0, z0) at time t, integrated as a
/// variational system along the trajectory (never differenced across seeds).
/// det_law carries the closed-form determinant exp(-int_0^t v_r/R* dt') for
/// comparison against det.
struct Deformation2D {
  double dR_dr0 = 1.0, dR_dz0 = 0.0;
  double dZ_dr0 = 0.0, dZ_dz0 = 1.0;
  double det = 1.0;
  double det_law = 1.0;
};

Deformation2D deformation_2d(const FlowField& field, double r0, double z0, double t,
                             double ode_tol);

}  // namespace efl
