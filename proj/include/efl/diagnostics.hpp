#pragma once

/// @file diagnostics.hpp
/// Measured quantities of the flow: the material speed derivative D_t|u|,
/// the moving-frame identity residuals along trajectories, the laminar
/// disturbance rates L0/Lx/Lt of a stream-tube map, near-axis breakdown and
/// blow-up indicators, a pulsatile monitor that tracks the rates along
/// particle paths, and the 1-d model momentum-flux ratio.

#include <vector>

#include "efl/field.hpp"
#include "efl/frenet.hpp"
#include "efl/streamtube.hpp"
#include "efl/trajectory.hpp"
#include "efl/waveform.hpp"

namespace efl {

/// Speeds at or below kSpeedFloorScale * u_ref count as stagnant; quotient
/// quantities throw instead of dividing by them.
inline constexpr double kSpeedFloorScale = 1e-8;

// ==== material speed derivative =============================================

/// D_t|u| at a meridian point, evaluated as A . u/|u| with A the material
/// acceleration.  Throws StagnantPoint when |u| <= kSpeedFloorScale * u_ref.
double material_speed_derivative(const FlowField& field, double r, double z, double t,
                                 double u_ref = 1.0);

/// The same projection A . tau at a Cartesian point with a caller-supplied
/// (frozen) unit direction; the stagnation gate still tests |u| at the point.
double material_speed_derivative(const FlowField& field, const Vec3& x, double t, const Vec3& tau,
                                 double u_ref = 1.0);

// ==== moving-frame identity residuals =======================================

/// One evaluation of the two arc-length trajectory identities
///   d/dn (A . tau) = 3 kappa D_t|u| + (ds kappa) |u|^2
///   d/db (A . tau) = T kappa |u|^2.
/// `s` is caller-supplied context (arc length along the parent curve).  When
/// the frame is degenerate the record carries the flag, Dt_speed is still
/// filled, and both residuals are NaN.
struct ResidualRecord {
  double s = 0.0;
  double z = 0.0;
  double t = 0.0;
  double kappa = 0.0, torsion = 0.0, ds_kappa = 0.0;
  double speed = 0.0;
  double Dt_speed = 0.0;
  double res_r = 0.0, res_b = 0.0;
  bool degenerate = false;
};

/// Residuals at Cartesian point x.  The directional derivatives difference
/// xi -> A(x + xi d, t) . tau with tau, n, b all frozen to the supplied
/// frame (the frame is a function of the central trajectory only, never of
/// the probe point) and time held fixed; central differences of step
/// fd_step with one Richardson refinement.  fd_step <= 0 selects
/// 1e-4 / kappa (a fraction of the curvature radius).  Throws StepTooLarge
/// when 1 - kappa * fd_step <= 0.5, StagnantPoint via the projection.
ResidualRecord frame_residuals(const FlowField& field, const Vec3& x, double t,
                               const FrenetData& frame, double speed, double fd_step = 0.0,
                               double u_ref = 1.0);

// ==== laminar disturbance rates =============================================

/// The three disturbance rates of a tube map at one (r0~, z, t): L0 is
/// |d_r0 R~| + |d_r R~^-1| (always >= 2), Lx sums the mixed z/r0~
/// derivative magnitudes of total order <= 3 of both the map and its
/// inverse, Lt the time-mixed ones (time order <= 2).  Terms of different
/// physical dimension are nondimensionalized before summing: a term with
/// spatial order p and time order i carries R_ref^(p-1) * (R_ref/U_ref)^i.
/// The scales used are recorded in the result.
struct DisturbanceRates {
  double L0 = 0.0, Lx = 0.0, Lt = 0.0;
  double r0_tilde = 0.0, z = 0.0, t = 0.0;
  double R_ref = 1.0, U_ref = 1.0;
};

/// Rates from the map's derivative table; inverse-map derivatives follow
/// from the forward ones by implicit differentiation of
/// R~(R~^-1(r, z, t), z, t) = r.  R_ref <= 0 selects map.r0_max().
/// Throws DegenerateTube when d_r0 R~ <= 0 at the point.
DisturbanceRates disturbance_rates(const StreamTubeMap& map, double r0_tilde, double z, double t,
                                   double R_ref = 0.0, double U_ref = 1.0);

// ==== near-axis indicators ==================================================

/// Vortex-breakdown proximity data at an axis station.
///   theta_prime_axis: d_r v_theta / v_z at r = 0 (the axis swirl gradient)
///   curvature_ratio:  kappa(probe_h) / probe_h for the particle path
///                     through (probe_h, z); tends to theta_prime_axis^2
///   d2_Dt_speed:      (f(0) - 2 f(h) + f(2h)) / h^2 of f(r) = D_t|u|(r,z,t)
///   match_ratio:      d2_Dt_speed / theta_prime_axis^2 (NaN when the axis
///                     swirl gradient vanishes: straight-flow branch)
struct BreakdownIndicator {
  double theta_prime_axis = 0.0;
  double curvature_ratio = 0.0;
  double d2_Dt_speed = 0.0;
  double match_ratio = 0.0;
};

/// Throws StagnantAxis when |v_z(0, z, t)| is at or below the speed floor.
BreakdownIndicator near_axis_breakdown_indicator(const FieldPtr& field, double z, double t,
                                                 double probe_h, double ode_tol = 1e-10,
                                                 double u_ref = 1.0);

/// Swirl third-derivative data at an axis station.
///   theta_ppp_axis_proxy: d^3 Theta / dz^3 of the particle path through
///                         (probe_r, z) -- the blow-up regime driver
///   swirl_mix_d_zr:       |d_z d_r v_theta| at r = 0
///   swirl_mix_d_zrr:      |d_z d_r^2 v_theta| at r = 0
///   dominance:            |R Th'''| / (|R Th' Th''| + floor) classifying
///                         which asymptotic regime the station is in
struct BlowupIndicator {
  double theta_ppp_axis_proxy = 0.0;
  double swirl_mix_d_zr = 0.0;
  double swirl_mix_d_zrr = 0.0;
  double dominance = 0.0;
};

/// probe_r <= 0 selects 1e-3 * the domain radius scale.  Throws
/// ThirdOrderUnavailable for fields without third derivatives and
/// StagnantAxis when |v_z(0, z, t)| is at or below the speed floor.
BlowupIndicator blowup_indicator(const FieldPtr& field, double z, double t, double probe_r = 0.0,
                                 double ode_tol = 1e-10, double u_ref = 1.0);

// ==== threshold bundle ======================================================

/// Detection thresholds carried by scenario configs: disturbance bound beta,
/// scale separations eps1 < eps2 and delta, swirl-region level gamma
/// (|v_theta| > gamma), identity-residual tolerance, and the differencing
/// step for frame_residuals.
struct ThresholdConfig {
  double beta = 1.0;
  double eps1 = 0.1;
  double eps2 = 1.0;
  double delta = 0.1;
  double gamma = 0.01;
  double residual_tol = 1e-5;
  double fd_step = 1e-4;

  /// All entries must be positive and eps1 < eps2; throws ConfigError.
  void validate() const;
};

// ==== pulsatile monitor =====================================================

/// Inlet axial profile family U_in(a, t) = U_s(a) + U_o(a) * g(t).
struct InflowFamily {
  RadialProfile U_s;
  RadialProfile U_o;
  Waveform g;

  double eval(double a, double t) const { return U_s.eval(a, 0) + U_o.eval(a, 0) * g.eval(t, 0); }

  /// Cross-section mean of |U_in| over a disc of radius r_max:
  /// (2 / r_max^2) * integral_0^r_max |U_in(a, t)| a da.
  double mean_speed(double t, double r_max, double quad_tol = 1e-10) const;
};

struct MonitorSeed {
  double r0 = 0.0;
  double theta0 = 0.0;
  double z0 = 0.0;
};

/// Per-time extremes over the tracked seeds.  max_abs_res is
/// max(|res_r|, |res_b|) over seeds with non-degenerate frames; it stays 0
/// when every frame at that time is degenerate (straight paths).
struct MonitorSample {
  double t = 0.0;
  double max_L0 = 0.0, max_Lx = 0.0, max_Lt = 0.0;
  double max_abs_res = 0.0;
  int n_seeds = 0;
};

struct MonitorConfig {
  std::vector<double> r0_nodes;  ///< tube-map seed radii, axis first
  Span z_span{};                 ///< tube-map window; must contain the tracked paths
  std::vector<double> t_nodes;   ///< tube-map time nodes; must cover t_grid when unsteady
  double ode_tol = 1e-10;
  double gamma = 0.0;    ///< swirl-region seed filter |v_theta| > gamma at t_grid.front(); 0 disables
  double R_ref = 0.0;    ///< rate length scale; 0 selects r0_nodes.back()
  double fd_step = 0.0;  ///< residual differencing step; 0 selects the curvature default
  int threads = 1;
};

/// Track each seed's particle path over [t_grid.front(), t_grid.back()],
/// build one tube map over cfg's window, and for every grid time record the
/// seed extremes of the disturbance rates (at the tracked inverse-tube
/// coordinates) and of the frame residuals.  U_ref for the rates is the
/// inlet mean speed of the inflow family at the first grid time.
/// Deterministic: seeds reduce in order, times are index-addressed.
/// Throws ConfigError on bad input or when the swirl filter leaves no
/// seeds, LeftDomain when a path exits before the window ends; constituent
/// errors propagate.
std::vector<MonitorSample> pulsatile_monitor(const FieldPtr& field, const InflowFamily& inflow,
                                             const std::vector<MonitorSeed>& seeds,
                                             const std::vector<double>& t_grid,
                                             const MonitorConfig& cfg);

// ==== momentum-flux ratio ===================================================

/// a = integral(v_z^2 dA) / (integral(v_z dA))^2 over the cross-section disc
/// at height z, by adaptive quadrature to quad_tol.  r_section <= 0 selects
/// the field's domain radius (ConfigError when that is unbounded).  Throws
/// ZeroFlux when |integral(v_z dA)| <= 1e-12 * integral(|v_z| dA).
double momentum_flux_ratio(const FlowField& field, double z, double t, double quad_tol,
                           double r_section = 0.0);

}  // namespace efl
