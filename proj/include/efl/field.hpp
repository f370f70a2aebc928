#pragma once

/// @file field.hpp
/// Velocity fields in cylindrical components (v_r, v_theta, v_z) on the
/// meridian half-plane, with derivative jets up to second (optionally third
/// spatial) order.  Everything downstream -- trajectories, curvature tables,
/// stream tubes, diagnostics -- consumes fields only through this interface.

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "efl/errors.hpp"
#include "efl/geometry.hpp"

namespace efl {

/// Vector in cylindrical components at a point (radial, azimuthal, axial).
struct CylVec {
  double r = 0.0, th = 0.0, z = 0.0;
};

inline CylVec operator+(const CylVec& a, const CylVec& b) { return {a.r + b.r, a.th + b.th, a.z + b.z}; }
inline CylVec operator-(const CylVec& a, const CylVec& b) { return {a.r - b.r, a.th - b.th, a.z - b.z}; }
inline CylVec operator*(double s, const CylVec& a) { return {s * a.r, s * a.th, s * a.z}; }
inline double norm(const CylVec& a) { return std::sqrt(a.r * a.r + a.th * a.th + a.z * a.z); }

/// Derivative jet of a field at one point.  d_rt means d^2/(dr dt), etc.
/// Third-order entries are spatial only and valid when has_third is set.
struct FieldJet {
  CylVec u{};
  CylVec d_r{}, d_z{}, d_t{};
  CylVec d_rr{}, d_rz{}, d_zz{}, d_rt{}, d_zt{}, d_tt{};
  bool has_third = false;
  CylVec d_rrr{}, d_rrz{}, d_rzz{}, d_zzz{};
};

/// Meridian-plane domain of validity.  radius_scale feeds the axis-parity
/// switch and default finite-difference steps.
struct Domain {
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
  double z_min = -std::numeric_limits<double>::infinity();
  double z_max = std::numeric_limits<double>::infinity();
  bool z_min_open = false;  // e.g. z > 0 rather than z >= 0
  double radius_scale = 1.0;

  bool contains(double r, double z) const {
    if (r < r_min || r > r_max) return false;
    if (z_min_open ? !(z > z_min) : z < z_min) return false;
    return z <= z_max;
  }
  bool bounded_radius() const { return std::isfinite(r_max); }
};

class FlowField {
 public:
  virtual ~FlowField() = default;

  /// Velocity at (r, z, t).  Throws NegativeRadius / OutOfDomain.
  CylVec eval(double r, double z, double t) const {
    validate(r, z);
    return eval_impl(r, z, t);
  }

  /// Derivative jet at (r, z, t); order 2 by default, 3 adds the spatial
  /// third-order block (ThirdOrderUnavailable if the field cannot supply it).
  FieldJet jet(double r, double z, double t, int order = 2) const {
    if (order < 1 || order > 3) throw std::invalid_argument("FlowField::jet: order must be 1..3");
    validate(r, z);
    if (order == 3 && !supports_third_order()) throw ThirdOrderUnavailable(name());
    return jet_impl(r, z, t, order == 3);
  }

  const Domain& domain() const { return domain_; }

  /// Below this radius, terms with 1/r factors switch to their parity limits.
  double axis_eps() const { return 1e-8 * domain_.radius_scale; }

  virtual bool euler_exact() const = 0;  ///< satisfies incompressible Euler exactly
  virtual bool supports_third_order() const { return true; }
  virtual bool steady() const = 0;
  virtual std::string name() const = 0;

 protected:
  explicit FlowField(Domain d) : domain_(d) {}
  virtual CylVec eval_impl(double r, double z, double t) const = 0;
  virtual FieldJet jet_impl(double r, double z, double t, bool third) const = 0;

 private:
  void validate(double r, double z) const {
    if (r < 0.0) throw NegativeRadius(r);
    if (!domain_.contains(r, z)) throw OutOfDomain(r, z);
  }
  Domain domain_;
};

using FieldPtr = std::shared_ptr<const FlowField>;

// ---- coordinate helpers -----------------------------------------------------

inline Vec3 cyl_point_to_cart(double r, double theta, double z) {
  return {r * std::cos(theta), r * std::sin(theta), z};
}

inline Vec3 cyl_vec_to_cart(const CylVec& v, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {v.r * c - v.th * s, v.r * s + v.th * c, v.z};
}

// ---- pointwise differential operators --------------------------------------

/// v_theta / r with its parity limit d_r v_theta below the axis switch.
inline double swirl_over_r(const FieldJet& J, double r, double eps) {
  return (r < eps) ? J.d_r.th : J.u.th / r;
}

/// v_r / r with its parity limit d_r v_r below the axis switch.
inline double radial_over_r(const FieldJet& J, double r, double eps) {
  return (r < eps) ? J.d_r.r : J.u.r / r;
}

/// Divergence of an axisymmetric field: d_r v_r + v_r / r + d_z v_z.
double divergence(const FlowField& f, double r, double z, double t);

/// Material acceleration (d_t + u . grad) u in cylindrical components,
/// including the geometric terms -v_theta^2/r and +v_r v_theta / r.
CylVec acceleration(const FieldJet& J, double r, double eps);
CylVec acceleration(const FlowField& f, double r, double z, double t);

/// Same acceleration as a Cartesian vector at the full 3-d point.
Vec3 acceleration_cartesian(const FlowField& f, double r, double theta, double z, double t);

struct PressureCompat {
  double a_theta;        ///< azimuthal acceleration component
  double curl_mismatch;  ///< d_z A_r - d_r A_z; zero iff -A is a meridian gradient
};

/// Whether the acceleration field admits a pressure: both outputs vanish for
/// exact axisymmetric Euler solutions without external forcing.
PressureCompat pressure_compatibility(const FlowField& f, double r, double z, double t);

}  // namespace efl
