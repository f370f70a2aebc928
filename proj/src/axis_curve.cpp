#include "efl/axis_curve.hpp"

#include <algorithm>
#include <cmath>

#include "efl/fd.hpp"
#include "efl/scalar_jet.hpp"

namespace efl {

namespace {

Jet2 component_jet(const FieldJet& J, int c) {
  auto pick = [c](const CylVec& v) { return c == 0 ? v.r : (c == 1 ? v.th : v.z); };
  Jet2 j;
  j.v = pick(J.u);
  j.dr = pick(J.d_r);
  j.dz = pick(J.d_z);
  j.dt = pick(J.d_t);
  j.drr = pick(J.d_rr);
  j.drz = pick(J.d_rz);
  j.dzz = pick(J.d_zz);
  j.drt = pick(J.d_rt);
  j.dzt = pick(J.d_zt);
  j.dtt = pick(J.d_tt);
  return j;
}

constexpr double kDenFloor = 1e-300;  // stage-evaluation guard against v_z -> 0

/// d/dz of W(R(z), z, T(z)) given the curve rates at the same station.
double curve_d1(const Jet2& W, double R1, double T1) { return W.dr * R1 + W.dz + W.dt * T1; }

/// d^2/dz^2 of the same composition.
double curve_d2(const Jet2& W, double R1, double R2, double T1, double T2) {
  return W.drr * R1 * R1 + 2.0 * W.drz * R1 + W.dzz + 2.0 * W.drt * R1 * T1 +
         2.0 * W.dzt * T1 + W.dtt * T1 * T1 + W.dr * R2 + W.dt * T2;
}

/// Everything in the germ except the on-axis Theta''' (which is differenced
/// by the caller because its exact form needs mixed third field derivatives).
CurveGerm germ_core(const FlowField& field, CurveKind kind, bool axis, double z, double t,
                    double R, double Th) {
  const FieldJet J = field.jet(axis ? 0.0 : R, z, t, 2);
  if (!(J.u.z > 0.0)) throw NotUnilateral(axis ? 0.0 : R, z, t);

  CurveGerm g;
  g.z = z;
  g.t = t;
  g.R = axis ? 0.0 : R;
  g.Th = Th;

  const Jet2 vz = component_jet(J, 2);
  if (kind == CurveKind::trajectory) {
    const Jet2 H = Jet2::constant(1.0) / vz;  // dt/dz along the path
    g.t1 = H.v;
    g.t2 = curve_d1(H, 0.0, g.t1);  // R1 not yet known; fixed below for off-axis
  }

  if (axis) {
    // R == 0 exactly; Theta' is the parity limit (d_r v_theta)/v_z.
    const double a = J.d_r.th, az = J.d_rz.th, at = J.d_rt.th;
    const double b = J.u.z, bz = J.d_z.z, bt = J.d_t.z;
    const double W = a / b;
    const double Wz = (az * b - a * bz) / (b * b);
    const double Wt = (at * b - a * bt) / (b * b);
    g.Th1 = W;
    g.Th2 = Wz + Wt * g.t1;
    return g;
  }

  const Jet2 vr = component_jet(J, 0);
  const Jet2 vth = component_jet(J, 1);
  const Jet2 F = vr / vz;
  g.R1 = F.v;
  if (kind == CurveKind::trajectory) {
    const Jet2 H = Jet2::constant(1.0) / vz;
    g.t2 = curve_d1(H, g.R1, g.t1);
  }
  g.R2 = curve_d1(F, g.R1, g.t1);
  g.R3 = curve_d2(F, g.R1, g.R2, g.t1, g.t2);

  const Jet2 G = vth / (Jet2::radius(R) * vz);
  g.Th1 = G.v;
  g.Th2 = curve_d1(G, g.R1, g.t1);
  g.Th3 = curve_d2(G, g.R1, g.R2, g.t1, g.t2);
  return g;
}

}  // namespace

void AxisCurve::state(double z, double& R, double& Th) const {
  if (kind == CurveKind::streamline) {
    const StateVec<2> y = line_dense.eval(z);
    R = axis ? 0.0 : std::max(y[0], 0.0);
    Th = y[1];
  } else {
    const StateVec<3> y = traj->dense.eval(time_of(z));
    R = axis ? 0.0 : std::max(y[0], 0.0);
    Th = y[1];
  }
}

double AxisCurve::time_of(double z) const {
  if (kind == CurveKind::streamline) return t_frozen;
  const double slack = 1e-12 * (1.0 + std::fabs(z_span.end - z_span.start));
  if (z < z_span.start - slack || z > z_span.end + slack)
    throw std::out_of_range("AxisCurve: z outside covered span");
  double lo = traj->dense.t_front(), hi = traj->dense.t_back();
  auto height = [this](double t) { return traj->dense.eval(t)[2]; };
  for (int i = 0; i < 90 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (height(mid) < z)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

CurveGerm AxisCurve::germ(double z) const {
  double R, Th;
  state(z, R, Th);
  CurveGerm g = germ_core(*field, kind, axis, z, time_of(z), R, Th);
  if (!axis) return g;

  // Differenced on-axis Theta''': 5-point first derivative of Theta'' in z,
  // stencil shifted to stay inside the covered span.
  const double span = z_span.end - z_span.start;
  double step = third_step_floor * std::max(1.0, std::fabs(z));
  if (4.0 * step > span) step = span / 4.0;
  double base = std::clamp(z - 2.0 * step, z_span.start, z_span.end - 4.0 * step);
  std::vector<double> nodes(5);
  for (int k = 0; k < 5; ++k) nodes[k] = base + k * step;
  const auto w = fd_weights(z, nodes, 1);
  double th3 = 0.0;
  for (int k = 0; k < 5; ++k) {
    double Rk, Thk;
    state(nodes[k], Rk, Thk);
    th3 += w[1][k] * germ_core(*field, kind, axis, nodes[k], time_of(nodes[k]), Rk, Thk).Th2;
  }
  g.Th3 = th3;
  return g;
}

AxisCurve integrate_streamline(FieldPtr field, double r0_tilde, double t_frozen, Span z_span,
                               double ode_tol, double theta0) {
  if (!field) throw ConfigError("integrate_streamline: null field");
  if (!(ode_tol > 0.0)) throw ConfigError("integrate_streamline: ode_tol must be positive");
  if (!(z_span.end > z_span.start))
    throw ConfigError("integrate_streamline: z_span must advance forward");
  if (r0_tilde < 0.0) throw NegativeRadius(r0_tilde);
  if (!field->domain().contains(r0_tilde, z_span.start)) throw OutOfDomain(r0_tilde, z_span.start);

  const FlowField& f = *field;
  const double eps = f.axis_eps();
  const bool axis = r0_tilde < eps;
  const Domain& dom = f.domain();
  {
    const double vz0 = f.eval(axis ? 0.0 : r0_tilde, z_span.start, t_frozen).z;
    if (!(vz0 > 0.0)) throw NotUnilateral(r0_tilde, z_span.start, t_frozen);
  }

  const double z_lo_closed =
      dom.z_min_open && std::isfinite(dom.z_min) ? dom.z_min + 1e-12 * (1.0 + std::fabs(dom.z_min))
                                                 : dom.z_min;
  auto clamp_r = [&dom](double r) { return std::clamp(r, dom.r_min, dom.r_max); };
  auto clamp_z = [&dom, z_lo_closed](double z) { return std::clamp(z, z_lo_closed, dom.z_max); };
  
  AxisCurve c;
  c.kind = CurveKind::streamline;
  c.axis = axis;
  c.r0 = r0_tilde;
  c.theta0 = theta0;
  c.t_frozen = t_frozen;
  c.z_span = z_span;
  c.third_step_floor = std::max(std::pow(ode_tol, 0.2), 1e-3);

  if (axis) {
    // Axis streamlines carry R == 0 and Theta == theta0 identically; only the
    // derivative tables use the parity limit (d_r v_theta)/v_z.  No ODE to
    // solve, so unilaterality is checked on a fixed lattice instead.
    constexpr int kAxisCheck = 129;
    for (int i = 0; i < kAxisCheck; ++i) {
      const double z = z_span.start + z_span.length() * i / (kAxisCheck - 1);
      if (!(f.eval(0.0, z, t_frozen).z > 0.0)) throw NotUnilateral(0.0, z, t_frozen);
    }
    typename DenseOutput<2>::Segment seg{};
    seg.t0 = z_span.start;
    seg.h = z_span.length();
    seg.r1 = {0.0, theta0};
    c.line_dense.push(seg);
    c.field = std::move(field);
    constexpr int kAxisSamples = 33;
    for (int i = 0; i < kAxisSamples; ++i)
      c.samples.push_back(c.germ(z_span.start + z_span.length() * i / (kAxisSamples - 1)));
    return c;
  }

  auto rhs = [&f, t_frozen, eps, clamp_r, clamp_z](double z, const StateVec<2>& y,
                                                   StateVec<2>& dy) {
    const double r = clamp_r(y[0]);
    const double zc = clamp_z(z);
    if (r < eps) {
      const FieldJet J = f.jet(r, zc, t_frozen, 1);
      const double den = std::max(J.u.z, kDenFloor);
      dy[0] = J.u.r / den;
      dy[1] = swirl_over_r(J, r, eps) / den;
    } else {
      const CylVec u = f.eval(r, zc, t_frozen);
      const double den = std::max(u.z, kDenFloor);
      dy[0] = u.r / den;
      dy[1] = u.th / (r * den);
    }
  };

  auto bad = [&f, &dom, t_frozen, eps](double z, const StateVec<2>& y) {
    double r = y[0];
    if (r < -eps) return true;  // tiny negative excursions are integration noise
    r = std::max(r, 0.0);
    if (!dom.contains(r, z)) return true;
    return !(f.eval(r, z, t_frozen).z > 0.0);
  };

  IntegrateResult<2> res =
      dopri5<2>(rhs, z_span.start, StateVec<2>{r0_tilde, theta0}, z_span.end,
                ode_tol / kDenseSafety, bad,
                std::fabs(z_span.end - z_span.start) / kCurveStepDivisor);
  if (res.outcome == OdeOutcome::stopped) {
    const double r_stop = std::max(res.y_end[0], 0.0);
    if (!dom.contains(r_stop, res.t_end)) throw OutOfDomain(r_stop, res.t_end);
    throw NotUnilateral(r_stop, res.t_end, t_frozen);
  }

  c.field = std::move(field);
  c.line_dense = std::move(res.dense);
  c.samples.push_back(c.germ(z_span.start));
  for (const auto& seg : c.line_dense.segments()) {
    const double z1 = seg.t0 + seg.h;
    if (z1 > z_span.end + 1e-15 * (1.0 + std::fabs(z_span.end))) break;
    c.samples.push_back(c.germ(std::min(z1, z_span.end)));
  }
  if (c.samples.back().z < z_span.end - 1e-14 * (1.0 + std::fabs(z_span.end)))
    c.samples.push_back(c.germ(z_span.end));
  return c;
}

AxisCurve axis_length_reparam(Trajectory traj, FieldPtr field) {
  if (!field) throw ConfigError("axis_length_reparam: null field");
  if (traj.samples.size() < 2)
    throw ConfigError("axis_length_reparam: trajectory too short to reparametrize");
  for (size_t i = 1; i < traj.samples.size(); ++i)
    if (!(traj.samples[i].z > traj.samples[i - 1].z))
      throw NotUnilateral(traj.samples[i].r, traj.samples[i].z, traj.samples[i].t);

  AxisCurve c;
  c.kind = CurveKind::trajectory;
  c.axis = traj.axis;
  c.r0 = traj.r0;
  c.theta0 = traj.theta0;
  c.t_frozen = traj.t_span.start;
  c.z_span = Span{traj.samples.front().z, traj.samples.back().z};
  c.field = std::move(field);
  c.third_step_floor = std::max(std::pow(traj.ode_tol, 0.2), 1e-3);

  std::vector<double> zs;
  zs.reserve(traj.samples.size());
  for (const auto& s : traj.samples) zs.push_back(s.z);
  c.traj = std::make_shared<const Trajectory>(std::move(traj));
  for (double z : zs) c.samples.push_back(c.germ(z));
  return c;
}

}  // namespace efl
