/// @file diagnostics.cpp

#include "efl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "efl/errors.hpp"
#include "efl/parallel.hpp"
#include "efl/quadrature.hpp"

namespace efl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double speed_floor(double u_ref) { return kSpeedFloorScale * u_ref; }

}  // namespace

// ==== material speed derivative =============================================

double material_speed_derivative(const FlowField& field, double r, double z, double t,
                                 double u_ref) {
  if (!(u_ref > 0.0)) throw ConfigError("material_speed_derivative: u_ref must be positive");
  const FieldJet J = field.jet(r, z, t, 2);
  const double speed = norm(J.u);
  if (speed <= speed_floor(u_ref)) throw StagnantPoint(r, z);
  const CylVec A = acceleration(J, r, field.axis_eps());
  return (A.r * J.u.r + A.th * J.u.th + A.z * J.u.z) / speed;
}

double material_speed_derivative(const FlowField& field, const Vec3& x, double t, const Vec3& tau,
                                 double u_ref) {
  if (!(u_ref > 0.0)) throw ConfigError("material_speed_derivative: u_ref must be positive");
  const double r = std::hypot(x.x, x.y);
  const double theta = std::atan2(x.y, x.x);
  const CylVec u = field.eval(r, x.z, t);
  if (norm(u) <= speed_floor(u_ref)) throw StagnantPoint(r, x.z);
  return dot(acceleration_cartesian(field, r, theta, x.z, t), tau);
}

// ==== moving-frame identity residuals =======================================

ResidualRecord frame_residuals(const FlowField& field, const Vec3& x, double t,
                               const FrenetData& frame, double speed, double fd_step,
                               double u_ref) {
  ResidualRecord rec;
  rec.z = x.z;
  rec.t = t;
  rec.kappa = frame.kappa;
  rec.torsion = frame.torsion;
  rec.ds_kappa = frame.ds_kappa;
  rec.speed = speed;
  rec.degenerate = frame.degenerate;
  rec.Dt_speed = material_speed_derivative(field, x, t, frame.tau, u_ref);
  if (frame.degenerate) {
    rec.res_r = kNaN;
    rec.res_b = kNaN;
    return rec;
  }

  double h = fd_step;
  if (!(h > 0.0)) h = 1e-4 / frame.kappa;
  if (!std::isfinite(h))
    throw StepTooLarge("frame_residuals: curvature too small for a default step; pass fd_step");
  const double tube = 1.0 - frame.kappa * h;
  if (tube <= 0.5)
    throw StepTooLarge("frame_residuals: 1 - kappa*h = " + std::to_string(tube) + " <= 0.5");

  // Probe value with the frame frozen: only the evaluation point moves.
  const auto probe = [&](const Vec3& p) {
    return material_speed_derivative(field, p, t, frame.tau, u_ref);
  };
  const auto dir_deriv = [&](const Vec3& d) {
    const auto central = [&](double step) {
      return (probe(x + step * d) - probe(x - step * d)) / (2.0 * step);
    };
    const double coarse = central(h);
    const double fine = central(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
  };

  const double u2 = speed * speed;
  rec.res_r = dir_deriv(frame.n) - 3.0 * frame.kappa * rec.Dt_speed - frame.ds_kappa * u2;
  rec.res_b = dir_deriv(frame.b) - frame.torsion * frame.kappa * u2;
  return rec;
}

// ==== laminar disturbance rates =============================================

DisturbanceRates disturbance_rates(const StreamTubeMap& map, double r0_tilde, double z, double t,
                                   double R_ref, double U_ref) {
  if (!(U_ref > 0.0)) throw ConfigError("disturbance_rates: U_ref must be positive");
  const double Rs = R_ref > 0.0 ? R_ref : map.r0_max();
  if (!(Rs > 0.0)) throw ConfigError("disturbance_rates: no positive length scale");
  const double Ts = Rs / U_ref;

  const TubeJet J = map.jet(r0_tilde, z, t);
  const double Fa = J.R_r0;
  if (!(Fa > 0.0))
    throw DegenerateTube("disturbance rates need d_r0 R~ > 0, got " + std::to_string(Fa));

  // Inverse-map derivatives at r = R~(r0~, z, t), by implicit differentiation
  // of R~(G(r, z, t), z, t) = r.  All forward derivatives sit at the same
  // point, so the chain rules close without re-evaluation.
  const double Gr = 1.0 / Fa;
  const double Gz = -J.R_z / Fa;
  const double Gt = -J.R_t / Fa;

  const double Fa2 = Fa * Fa;
  const double Fa3 = Fa2 * Fa;
  const double Grr = -J.R_r0r0 / Fa3;
  const double P = J.R_r0r0 * Gz + J.R_r0z;  // z-derivative of F_a along the inverse
  const double Grz = -P / Fa2;
  const double Gzz = -(J.R_r0r0 * Gz * Gz + 2.0 * J.R_r0z * Gz + J.R_zz) / Fa;
  const double Grt = -(J.R_r0r0 * Gt + J.R_r0t) / Fa2;
  const double Gzt = -((J.R_r0r0 * Gt + J.R_r0t) * Gz + J.R_r0z * Gt + J.R_zt) / Fa;
  const double Gtt = -(J.R_r0r0 * Gt * Gt + 2.0 * J.R_r0t * Gt + J.R_tt) / Fa;

  const double Grrr = (3.0 * J.R_r0r0 * J.R_r0r0 - Fa * J.R_r0r0r0) / (Fa3 * Fa2);
  const double Grrz =
      -((J.R_r0r0r0 * Gz + J.R_r0r0z) * Fa - 3.0 * J.R_r0r0 * P) / (Fa2 * Fa2);
  const double Grzz =
      -((J.R_r0r0r0 * Gz * Gz + 2.0 * J.R_r0r0z * Gz + J.R_r0r0 * Gzz + J.R_r0zz) * Fa -
        2.0 * P * P) /
      Fa3;
  const double Gzzz = -(J.R_r0r0r0 * Gz * Gz * Gz + 3.0 * J.R_r0r0z * Gz * Gz +
                        3.0 * J.R_r0zz * Gz + J.R_zzz + 3.0 * Gzz * P) /
                      Fa;

  DisturbanceRates out;
  out.r0_tilde = r0_tilde;
  out.z = z;
  out.t = t;
  out.R_ref = Rs;
  out.U_ref = U_ref;

  out.L0 = std::abs(Fa) + std::abs(Gr);

  const double Rs2 = Rs * Rs;
  out.Lx = std::abs(J.R_z) +
           Rs * (std::abs(J.R_zz) + std::abs(J.R_r0r0) + std::abs(J.R_r0z)) +
           Rs2 * (std::abs(J.R_zzz) + std::abs(J.R_r0r0r0) + std::abs(J.R_r0zz) +
                  std::abs(J.R_r0r0z)) +
           std::abs(Gz) + Rs * (std::abs(Gzz) + std::abs(Grr) + std::abs(Grz)) +
           Rs2 * (std::abs(Gzzz) + std::abs(Grrr) + std::abs(Grrz) + std::abs(Grzz));

  const double Ts2 = Ts * Ts;
  out.Lt = Ts * (std::abs(J.R_zt) + std::abs(J.R_r0t)) +
           Ts * Rs * (std::abs(J.R_zzt) + std::abs(J.R_r0zt) + std::abs(J.R_r0r0t)) +
           Ts2 / Rs * std::abs(J.R_tt) + Ts2 * (std::abs(J.R_ztt) + std::abs(J.R_r0tt)) +
           Ts / Rs * std::abs(Gt) + Ts * (std::abs(Gzt) + std::abs(Grt)) +
           Ts2 / Rs * std::abs(Gtt);
  return out;
}

// ==== near-axis indicators ==================================================

namespace {

/// Particle path through (r_probe, z) over a short forward window, as an
/// axis-length curve.  The window only has to be positive: the germ at the
/// seed height is pointwise in the field jets.
AxisCurve probe_path(const FieldPtr& field, double r_probe, double z, double t, double vz_axis,
                     double ode_tol) {
  const double dt = 0.01 * field->domain().radius_scale / std::abs(vz_axis);
  Trajectory tr = integrate_trajectory(*field, r_probe, 0.0, z, {t, t + dt}, ode_tol);
  return axis_length_reparam(std::move(tr), field);
}

}  // namespace

BreakdownIndicator near_axis_breakdown_indicator(const FieldPtr& field, double z, double t,
                                                 double probe_h, double ode_tol, double u_ref) {
  if (!field) throw ConfigError("breakdown indicator: null field");
  if (!(probe_h > 0.0)) throw ConfigError("breakdown indicator: probe_h must be positive");
  if (!(ode_tol > 0.0)) throw ConfigError("breakdown indicator: ode_tol must be positive");
  if (!(u_ref > 0.0)) throw ConfigError("breakdown indicator: u_ref must be positive");

  const FieldJet J0 = field->jet(0.0, z, t, 2);
  if (std::abs(J0.u.z) <= speed_floor(u_ref)) throw StagnantAxis(z);

  BreakdownIndicator out;
  out.theta_prime_axis = J0.d_r.th / J0.u.z;

  const FrenetData F = frame_explicit(probe_path(field, probe_h, z, t, J0.u.z, ode_tol), z);
  out.curvature_ratio = F.kappa / probe_h;

  const auto f = [&](double r) { return material_speed_derivative(*field, r, z, t, u_ref); };
  out.d2_Dt_speed = (f(0.0) - 2.0 * f(probe_h) + f(2.0 * probe_h)) / (probe_h * probe_h);

  const double tp2 = out.theta_prime_axis * out.theta_prime_axis;
  out.match_ratio = tp2 > 0.0 ? out.d2_Dt_speed / tp2 : kNaN;
  return out;
}

BlowupIndicator blowup_indicator(const FieldPtr& field, double z, double t, double probe_r,
                                 double ode_tol, double u_ref) {
  if (!field) throw ConfigError("blowup indicator: null field");
  if (!(ode_tol > 0.0)) throw ConfigError("blowup indicator: ode_tol must be positive");
  if (!(u_ref > 0.0)) throw ConfigError("blowup indicator: u_ref must be positive");

  const FieldJet J0 = field->jet(0.0, z, t, 3);  // gates on third-order support
  BlowupIndicator out;
  out.swirl_mix_d_zr = std::abs(J0.d_rz.th);
  out.swirl_mix_d_zrr = std::abs(J0.d_rrz.th);

  if (std::abs(J0.u.z) <= speed_floor(u_ref)) throw StagnantAxis(z);
  double h = probe_r;
  if (!(h > 0.0)) h = 1e-3 * field->domain().radius_scale;

  const CurveGerm g = probe_path(field, h, z, t, J0.u.z, ode_tol).germ(z);
  out.theta_ppp_axis_proxy = g.Th3;
  out.dominance = std::abs(g.R * g.Th3) / (std::abs(g.R * g.Th1 * g.Th2) + 1e-300);
  return out;
}

// ==== threshold bundle ======================================================

void ThresholdConfig::validate() const {
  const auto positive = [](double v, const char* who) {
    if (!(v > 0.0)) throw ConfigError(std::string("thresholds: ") + who + " must be positive");
  };
  positive(beta, "beta");
  positive(eps1, "eps1");
  positive(eps2, "eps2");
  positive(delta, "delta");
  positive(gamma, "gamma");
  positive(residual_tol, "residual_tol");
  positive(fd_step, "fd_step");
  if (!(eps1 < eps2)) throw ConfigError("thresholds: eps1 must be below eps2");
}

// ==== pulsatile monitor =====================================================

double InflowFamily::mean_speed(double t, double r_max, double quad_tol) const {
  if (!(r_max > 0.0)) throw ConfigError("inflow mean: r_max must be positive");
  const double mass =
      integrate([&](double a) { return std::abs(eval(a, t)) * a; }, 0.0, r_max, quad_tol);
  return 2.0 * mass / (r_max * r_max);
}

std::vector<MonitorSample> pulsatile_monitor(const FieldPtr& field, const InflowFamily& inflow,
                                             const std::vector<MonitorSeed>& seeds,
                                             const std::vector<double>& t_grid,
                                             const MonitorConfig& cfg) {
  if (!field) throw ConfigError("monitor: null field");
  if (seeds.empty()) throw ConfigError("monitor: no seeds");
  if (t_grid.empty()) throw ConfigError("monitor: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("monitor: time grid must ascend strictly");
  if (!(cfg.ode_tol > 0.0)) throw ConfigError("monitor: ode_tol must be positive");
  if (cfg.threads < 1) throw ConfigError("monitor: threads must be >= 1");

  const double t0 = t_grid.front();
  const double t_end = t_grid.back();

  std::vector<MonitorSeed> active;
  active.reserve(seeds.size());
  for (const MonitorSeed& s : seeds) {
    if (cfg.gamma > 0.0 && !(std::abs(field->eval(s.r0, s.z0, t0).th) > cfg.gamma)) continue;
    active.push_back(s);
  }
  if (active.empty()) throw ConfigError("monitor: no seeds in the swirl region");

  const IntegratedTubeMap map =
      build_streamtube_map(field, cfg.r0_nodes, cfg.z_span, cfg.t_nodes, cfg.ode_tol, cfg.threads);
  const double Rs = cfg.R_ref > 0.0 ? cfg.R_ref : map.r0_max();
  const double U_ref = inflow.mean_speed(t0, Rs);
  if (!(U_ref > 0.0)) throw ConfigError("monitor: inflow mean speed vanishes at the window start");

  std::vector<AxisCurve> tracks;
  tracks.reserve(active.size());
  for (const MonitorSeed& s : active) {
    Trajectory tr = integrate_trajectory(*field, s.r0, s.theta0, s.z0, {t0, t_end}, cfg.ode_tol);
    if (tr.left_domain) throw LeftDomain(tr.t_end, t_end);
    tracks.push_back(axis_length_reparam(std::move(tr), field));
  }

  std::vector<MonitorSample> out(t_grid.size());
  parallel_for(t_grid.size(), cfg.threads, [&](std::size_t it) {
    const double t = t_grid[it];
    MonitorSample sample;
    sample.t = t;
    sample.n_seeds = static_cast<int>(tracks.size());
    for (const AxisCurve& track : tracks) {
      const TrajectorySample pos = track.traj->state(t);
      const double r = std::max(pos.r, 0.0);
      const double r0t = invert_streamtube(map, r, pos.z, t);
      const DisturbanceRates rates = disturbance_rates(map, r0t, pos.z, t, Rs, U_ref);
      sample.max_L0 = std::max(sample.max_L0, rates.L0);
      sample.max_Lx = std::max(sample.max_Lx, rates.Lx);
      sample.max_Lt = std::max(sample.max_Lt, rates.Lt);

      const FrenetData frame = frame_explicit(track, pos.z);
      if (frame.degenerate) continue;
      const double speed = norm(field->eval(r, pos.z, t));
      const Vec3 x = cyl_point_to_cart(r, pos.theta, pos.z);
      const ResidualRecord rec =
          frame_residuals(*field, x, t, frame, speed, cfg.fd_step, U_ref);
      sample.max_abs_res =
          std::max(sample.max_abs_res, std::max(std::abs(rec.res_r), std::abs(rec.res_b)));
    }
    out[it] = sample;
  });
  return out;
}

// ==== momentum-flux ratio ===================================================

double momentum_flux_ratio(const FlowField& field, double z, double t, double quad_tol,
                           double r_section) {
  if (!(quad_tol > 0.0)) throw ConfigError("momentum flux: quad_tol must be positive");
  double R = r_section;
  if (!(R > 0.0)) {
    if (!field.domain().bounded_radius())
      throw ConfigError("momentum flux: section radius required for an unbounded field");
    R = field.domain().r_max;
  }

  const double two_pi = 2.0 * std::numbers::pi;
  const auto vz = [&](double r) { return field.eval(r, z, t).z; };
  const double flux = two_pi * integrate([&](double r) { return vz(r) * r; }, 0.0, R, quad_tol);
  const double flux_abs =
      two_pi * integrate([&](double r) { return std::abs(vz(r)) * r; }, 0.0, R, quad_tol);
  if (std::abs(flux) <= 1e-12 * (flux_abs + 1e-300))
    throw ZeroFlux("axial flux vanishes at z=" + std::to_string(z) + ", t=" + std::to_string(t));
  const double num = two_pi * integrate([&](double r) { return vz(r) * vz(r) * r; }, 0.0, R, quad_tol);
  return num / (flux * flux);
}

}  // namespace efl
