#pragma once

/// @file streamtube.hpp
/// Stream-tube geometry: the inlet-to-station tube map R~(r0~, z, t) with its
/// derivative table, inflow propagation rho, monotone tube inversion, and
/// reconstruction of (v_z, v_r) from an inlet profile.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "efl/axis_curve.hpp"
#include "efl/field.hpp"
#include "efl/trajectory.hpp"

namespace efl {

/// Derivative table of the tube map at one (r0~, z, t).  R_r0z means
/// d^2 R~ / (d r0~ d z), etc.  Time entries beyond the constructing map's
/// temporal resolution are zero.
struct TubeJet {
  double R = 0.0;
  double R_r0 = 0.0, R_z = 0.0, R_t = 0.0;
  double R_r0r0 = 0.0, R_r0z = 0.0, R_zz = 0.0, R_r0t = 0.0, R_zt = 0.0, R_tt = 0.0;
  double R_r0r0r0 = 0.0, R_r0r0z = 0.0, R_r0zz = 0.0, R_zzz = 0.0;
  double R_r0r0t = 0.0, R_r0zt = 0.0, R_zzt = 0.0, R_r0tt = 0.0, R_ztt = 0.0;
};

/// A stream-tube map: station radius R~ of the streamline seeded at inlet
/// radius r0~, as a function of (r0~, z, t), with partials up to total
/// order 3 (time order <= 2).  Maps built from integrated streamlines
/// guarantee R~(0, z, t) = 0, R~(r0~, z_in, t) = r0~, and d_r0 R~ > 0;
/// analytic test maps may relax these.
class StreamTubeMap {
 public:
  virtual ~StreamTubeMap() = default;

  virtual TubeJet jet(double r0_tilde, double z, double t) const = 0;
  virtual double z_inlet() const = 0;
  virtual double r0_max() const = 0;
  virtual std::string field_id() const = 0;
};

/// Closed-form map for oracles and synthetic diagnostics; wraps a callable
/// producing the full derivative table.
class AnalyticTubeMap final : public StreamTubeMap {
 public:
  AnalyticTubeMap(std::function<TubeJet(double, double, double)> fn, double z_in, double r0_max,
                  std::string id)
      : fn_(std::move(fn)), z_in_(z_in), r0_max_(r0_max), id_(std::move(id)) {}

  TubeJet jet(double r0_tilde, double z, double t) const override { return fn_(r0_tilde, z, t); }
  double z_inlet() const override { return z_in_; }
  double r0_max() const override { return r0_max_; }
  std::string field_id() const override { return id_; }

 private:
  std::function<TubeJet(double, double, double)> fn_;
  double z_in_, r0_max_;
  std::string id_;
};

/// Map assembled from one integrated streamline per (r0~ node, t node).
/// z-partials are exact per streamline (curve germs); r0~-partials come from
/// 5-point finite differences across seeds (Fornberg weights on the possibly
/// nonuniform node set); the map value interpolates seeds with a cubic
/// spline, which is also what the tube inversion's Newton iterates on.
/// Time partials difference across t nodes (orders <= 2, 4-node window).
class IntegratedTubeMap final : public StreamTubeMap {
 public:
  TubeJet jet(double r0_tilde, double z, double t) const override;
  double z_inlet() const override { return z_span_.start; }
  double r0_max() const override { return r0_nodes_.back(); }
  std::string field_id() const override;

  const std::vector<double>& r0_nodes() const { return r0_nodes_; }
  const std::vector<double>& t_nodes() const { return t_nodes_; }
  Span z_span() const { return z_span_; }

  friend IntegratedTubeMap build_streamtube_map(FieldPtr field, std::vector<double> r0_nodes,
                                                Span z_span, std::vector<double> t_nodes,
                                                double ode_tol, int threads);

 private:
  IntegratedTubeMap() = default;

  FieldPtr field_;
  std::vector<double> r0_nodes_;  // ascending, first node 0
  std::vector<double> t_nodes_;   // ascending
  Span z_span_{};
  std::vector<AxisCurve> curves_;  // index k * nr + i for (t node k, seed i)
};

/// Seed nodes clustered quadratically toward the axis: r_i = r_max (i/(n-1))^2.
/// Resolves the axis limits of rho and its r0~-derivatives.
std::vector<double> clustered_seed_nodes(double r_max, int n);

/// Integrate one frozen-time streamline per (r0~, t) node and assemble the
/// derivative table.  r0_nodes must start at 0, ascend strictly, and have at
/// least 5 entries; t_nodes must be nonempty and strictly ascending.
/// Throws NotUnilateral from the underlying integrations and
/// SeedSpacingTooCoarse when the assembled node values fail the tube
/// ordering d_r0 R~ > 0 anywhere on the checked lattice.
/// Seed integrations are farmed out over `threads` (deterministic: every
/// slot is index-addressed).
IntegratedTubeMap build_streamtube_map(FieldPtr field, std::vector<double> r0_nodes, Span z_span,
                                       std::vector<double> t_nodes, double ode_tol,
                                       int threads = 1);

/// Inflow propagation rho = 2 r0~ / d_r0(R~^2); on the axis 1/(d_r0 R~)^2.
/// Throws DegenerateTube when the denominator is not positive.
double inflow_propagation(const StreamTubeMap& map, double r0_tilde, double z, double t);

/// Solve R~(r0~, z, t) = r for r0~ in [0, r0_max] by bisection with local
/// Newton, to residual <= 1e-12 * tube radius.  r = 0 maps to 0.
/// Throws OutsideTubeRange when r lies outside [0, R~(r0_max)] and
/// NonMonotone when a non-positive d_r0 R~ is met while solving.
double invert_streamtube(const StreamTubeMap& map, double r, double z, double t);

struct ReconstructedVelocity {
  double v_z = 0.0;
  double v_r = 0.0;
};

/// Proposition-level reconstruction from the inlet axial profile U_in(r0~, t):
/// v_z = rho(R~^-1) U_in(R~^-1, t),  v_r = d_z R~ (R~^-1) * v_z.
ReconstructedVelocity reconstruct_velocity(const StreamTubeMap& map,
                                           const std::function<double(double, double)>& U_in,
                                           double r, double z, double t);

}  // namespace efl
