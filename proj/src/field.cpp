#include "efl/field.hpp"

namespace efl {

double divergence(const FlowField& f, double r, double z, double t) {
  const FieldJet J = f.jet(r, z, t);
  return J.d_r.r + radial_over_r(J, r, f.axis_eps()) + J.d_z.z;
}

CylVec acceleration(const FieldJet& J, double r, double eps) {
  const double sor = swirl_over_r(J, r, eps);
  CylVec a;
  a.r = J.d_t.r + J.u.r * J.d_r.r + J.u.z * J.d_z.r - J.u.th * sor;
  a.th = J.d_t.th + J.u.r * J.d_r.th + J.u.z * J.d_z.th + J.u.r * sor;
  a.z = J.d_t.z + J.u.r * J.d_r.z + J.u.z * J.d_z.z;
  return a;
}

CylVec acceleration(const FlowField& f, double r, double z, double t) {
  return acceleration(f.jet(r, z, t), r, f.axis_eps());
}

Vec3 acceleration_cartesian(const FlowField& f, double r, double theta, double z, double t) {
  const CylVec a = acceleration(f, r, z, t);
  if (r < f.axis_eps()) {
    // On the axis the radial/azimuthal components vanish by parity and theta
    // is ill-defined; only the axial part survives.
    return {0.0, 0.0, a.z};
  }
  return cyl_vec_to_cart(a, theta);
}

PressureCompat pressure_compatibility(const FlowField& f, double r, double z, double t) {
  const FieldJet J = f.jet(r, z, t);
  const double eps = f.axis_eps();
  const double sor = swirl_over_r(J, r, eps);

  PressureCompat out;
  out.a_theta = J.d_t.th + J.u.r * J.d_r.th + J.u.z * J.d_z.th + J.u.r * sor;

  // d_z A_r with A_r = v_r,t + v_r v_r,r + v_z v_r,z - v_theta^2 / r.
  const double dz_Ar = J.d_zt.r + J.d_z.r * J.d_r.r + J.u.r * J.d_rz.r + J.d_z.z * J.d_z.r +
                       J.u.z * J.d_zz.r - 2.0 * sor * J.d_z.th;
  // d_r A_z with A_z = v_z,t + v_r v_z,r + v_z v_z,z.
  const double dr_Az = J.d_rt.z + J.d_r.r * J.d_r.z + J.u.r * J.d_rr.z + J.d_r.z * J.d_z.z +
                       J.u.z * J.d_rz.z;
  out.curl_mismatch = dz_Ar - dr_Az;
  return out;
}

}  // namespace efl
