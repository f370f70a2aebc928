#include "efl/streamtube.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "efl/errors.hpp"
#include "efl/fd.hpp"
#include "efl/parallel.hpp"
#include "efl/spline.hpp"

namespace efl {

namespace {

// Start of the `width`-node window nearest x in an ascending node list.
size_t window_start(const std::vector<double>& nodes, double x, size_t width) {
  const size_t n = nodes.size();
  if (n <= width) return 0;
  const size_t hi = std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin();
  const size_t half = (width + 1) / 2;
  const size_t start = hi > half ? hi - half : 0;
  return std::min(start, n - width);
}

// w[k] . vals over a node window: the k-th derivative estimate.
double apply_weights(const std::vector<double>& w, const double* vals) {
  double acc = 0.0;
  for (size_t i = 0; i < w.size(); ++i) acc += w[i] * vals[i];
  return acc;
}

}  // namespace

std::vector<double> clustered_seed_nodes(double r_max, int n) {
  if (!(r_max > 0.0)) throw ConfigError("seed nodes: r_max must be positive");
  if (n < 2) throw ConfigError("seed nodes: need at least 2 nodes");
  std::vector<double> nodes(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    nodes[static_cast<size_t>(i)] = r_max * f * f;
  }
  nodes.back() = r_max;
  return nodes;
}

// ============================================================================
// Construction
// ============================================================================

IntegratedTubeMap build_streamtube_map(FieldPtr field, std::vector<double> r0_nodes, Span z_span,
                                       std::vector<double> t_nodes, double ode_tol, int threads) {
  if (!field) throw ConfigError("stream tube: null field");
  if (!(ode_tol > 0.0)) throw ConfigError("stream tube: ode_tol must be positive");
  if (!(z_span.length() > 0.0)) throw ConfigError("stream tube: z span must increase");
  if (r0_nodes.size() < 5) throw ConfigError("stream tube: need at least 5 seed nodes");
  if (r0_nodes.front() != 0.0) throw ConfigError("stream tube: seed nodes must start at 0");
  for (size_t i = 1; i < r0_nodes.size(); ++i)
    if (!(r0_nodes[i] > r0_nodes[i - 1]))
      throw ConfigError("stream tube: seed nodes must ascend strictly");
  if (t_nodes.empty()) throw ConfigError("stream tube: need at least 1 time node");
  for (size_t k = 1; k < t_nodes.size(); ++k)
    if (!(t_nodes[k] > t_nodes[k - 1]))
      throw ConfigError("stream tube: time nodes must ascend strictly");

  const size_t nr = r0_nodes.size(), nt = t_nodes.size();

  IntegratedTubeMap map;
  map.field_ = field;
  map.r0_nodes_ = std::move(r0_nodes);
  map.t_nodes_ = std::move(t_nodes);
  map.z_span_ = z_span;
  map.curves_.resize(nr * nt);

  parallel_for(nr * nt, threads, [&](size_t idx) {
    const size_t k = idx / nr, i = idx % nr;
    map.curves_[idx] =
        integrate_streamline(field, map.r0_nodes_[i], map.t_nodes_[k], z_span, ode_tol, 0.0);
  });

  // Tube ordering: node radii must stay strictly nested and the differenced
  // d_r0 R~ positive at every node, checked on a fixed z lattice.
  constexpr int kLattice = 33;
  const size_t mr = std::min<size_t>(5, nr);
  std::vector<double> R(nr), Th(nr);
  for (size_t k = 0; k < nt; ++k) {
    for (int j = 0; j < kLattice; ++j) {
      const double z =
          z_span.start + z_span.length() * static_cast<double>(j) / (kLattice - 1);
      for (size_t i = 0; i < nr; ++i) map.curves_[k * nr + i].state(z, R[i], Th[i]);
      for (size_t i = 1; i < nr; ++i)
        if (!(R[i] > R[i - 1]))
          throw SeedSpacingTooCoarse(
              "node radii not strictly nested at z=" + std::to_string(z) +
              ", t=" + std::to_string(map.t_nodes_[k]) +
              " between seeds r0~=" + std::to_string(map.r0_nodes_[i - 1]) + " and " +
              std::to_string(map.r0_nodes_[i]));
      for (size_t i = 0; i < nr; ++i) {
        const size_t i0 = window_start(map.r0_nodes_, map.r0_nodes_[i], mr);
        const auto w = fd_weights(map.r0_nodes_[i],
                                  std::span<const double>(map.r0_nodes_.data() + i0, mr), 1);
        if (!(apply_weights(w[1], R.data() + i0) > 0.0))
          throw SeedSpacingTooCoarse("differenced d_r0 R~ not positive at z=" +
                                     std::to_string(z) + ", t=" +
                                     std::to_string(map.t_nodes_[k]) +
                                     ", r0~=" + std::to_string(map.r0_nodes_[i]));
      }
    }
  }
  return map;
}

// ============================================================================
// Derivative table
// ============================================================================

std::string IntegratedTubeMap::field_id() const { return field_ ? field_->name() : ""; }

TubeJet IntegratedTubeMap::jet(double r0_tilde, double z, double t) const {
  const size_t nr = r0_nodes_.size(), nt = t_nodes_.size();
  const double rmax = r0_nodes_.back();

  const double rslack = 1e-12 * (1.0 + rmax);
  if (!(r0_tilde >= -rslack) || !(r0_tilde <= rmax + rslack))
    throw OutOfDomain("tube map seed radius " + std::to_string(r0_tilde) + " outside [0, " +
                      std::to_string(rmax) + "]");
  const double r0 = std::clamp(r0_tilde, 0.0, rmax);

  const double zslack = 1e-12 * (1.0 + z_span_.length());
  if (!(z >= z_span_.start - zslack) || !(z <= z_span_.end + zslack))
    throw OutOfDomain("tube map station z=" + std::to_string(z) + " outside [" +
                      std::to_string(z_span_.start) + ", " + std::to_string(z_span_.end) + "]");
  const double zq = std::clamp(z, z_span_.start, z_span_.end);

  // Time window: single-node maps are steady in t, otherwise difference over
  // the min(4, nt) nearest nodes (orders up to min(2, nt-1)).
  size_t kt0 = 0, mt = 1;
  std::vector<std::vector<double>> wt{{1.0}};
  double tq = t;
  if (nt > 1) {
    const double tslack = 1e-12 * (1.0 + t_nodes_.back() - t_nodes_.front());
    if (!(t >= t_nodes_.front() - tslack) || !(t <= t_nodes_.back() + tslack))
      throw OutOfDomain("tube map time t=" + std::to_string(t) + " outside [" +
                        std::to_string(t_nodes_.front()) + ", " +
                        std::to_string(t_nodes_.back()) + "]");
    tq = std::clamp(t, t_nodes_.front(), t_nodes_.back());
    mt = std::min<size_t>(4, nt);
    kt0 = window_start(t_nodes_, tq, mt);
    wt = fd_weights(tq, std::span<const double>(t_nodes_.data() + kt0, mt),
                    static_cast<int>(std::min<size_t>(2, mt - 1)));
  }

  const size_t mr = std::min<size_t>(5, nr);
  const size_t i0 = window_start(r0_nodes_, r0, mr);
  const auto wr = fd_weights(r0, std::span<const double>(r0_nodes_.data() + i0, mr), 3);

  TubeJet out;
  std::vector<double> Rs(nr), Th(nr), R1(mr), R2(mr), R3(mr);
  for (size_t k = 0; k < mt; ++k) {
    const AxisCurve* row = curves_.data() + (kt0 + k) * nr;
    for (size_t i = 0; i < nr; ++i) row[i].state(zq, Rs[i], Th[i]);
    for (size_t j = 0; j < mr; ++j) {
      const CurveGerm g = row[i0 + j].germ(zq);
      Rs[i0 + j] = g.R;
      R1[j] = g.R1;
      R2[j] = g.R2;
      R3[j] = g.R3;
    }

    // Spatial table at this time node: value from the full-node spline
    // (bypassed on exact nodes so the axis and inlet identities hold
    // bitwise), r0~-derivatives from the seed window, z-derivatives exact
    // per curve.
    double S00;
    const auto node = std::lower_bound(r0_nodes_.begin(), r0_nodes_.end(), r0);
    if (node != r0_nodes_.end() && *node == r0)
      S00 = Rs[static_cast<size_t>(node - r0_nodes_.begin())];
    else
      S00 = CubicSpline(r0_nodes_, Rs).eval(r0);
    const double S10 = apply_weights(wr[1], Rs.data() + i0);
    const double S20 = apply_weights(wr[2], Rs.data() + i0);
    const double S30 = apply_weights(wr[3], Rs.data() + i0);
    const double S01 = apply_weights(wr[0], R1.data());
    const double S11 = apply_weights(wr[1], R1.data());
    const double S21 = apply_weights(wr[2], R1.data());
    const double S02 = apply_weights(wr[0], R2.data());
    const double S12 = apply_weights(wr[1], R2.data());
    const double S03 = apply_weights(wr[0], R3.data());

    const double w0 = wt[0][k];
    const double w1 = wt.size() > 1 ? wt[1][k] : 0.0;
    const double w2 = wt.size() > 2 ? wt[2][k] : 0.0;

    out.R += w0 * S00;
    out.R_t += w1 * S00;
    out.R_tt += w2 * S00;
    out.R_r0 += w0 * S10;
    out.R_r0t += w1 * S10;
    out.R_r0tt += w2 * S10;
    out.R_z += w0 * S01;
    out.R_zt += w1 * S01;
    out.R_ztt += w2 * S01;
    out.R_r0r0 += w0 * S20;
    out.R_r0r0t += w1 * S20;
    out.R_r0z += w0 * S11;
    out.R_r0zt += w1 * S11;
    out.R_zz += w0 * S02;
    out.R_zzt += w1 * S02;
    out.R_r0r0r0 += w0 * S30;
    out.R_r0r0z += w0 * S21;
    out.R_r0zz += w0 * S12;
    out.R_zzz += w0 * S03;
  }
  return out;
}

// ============================================================================
// Derived quantities
// ============================================================================

double inflow_propagation(const StreamTubeMap& map, double r0_tilde, double z, double t) {
  const TubeJet J = map.jet(r0_tilde, z, t);
  if (r0_tilde == 0.0) {
    if (!(J.R_r0 > 0.0))
      throw DegenerateTube("d_r0 R~ = " + std::to_string(J.R_r0) +
                           " on the axis at z=" + std::to_string(z));
    return 1.0 / (J.R_r0 * J.R_r0);
  }
  const double den = 2.0 * J.R * J.R_r0;  // d_r0 (R~^2)
  if (!(den > 0.0))
    throw DegenerateTube("d_r0(R~^2) = " + std::to_string(den) + " at r0~=" +
                         std::to_string(r0_tilde) + ", z=" + std::to_string(z));
  return 2.0 * r0_tilde / den;
}

double invert_streamtube(const StreamTubeMap& map, double r, double z, double t) {
  if (r == 0.0) return 0.0;
  const double b = map.r0_max();
  const double radius = map.jet(b, z, t).R;
  if (!(radius > 0.0))
    throw DegenerateTube("outer radius " + std::to_string(radius) + " at z=" + std::to_string(z));
  const double tol = 1e-12 * radius;
  if (!(r >= 0.0) || r > radius * (1.0 + 1e-9))
    throw OutsideTubeRange("r=" + std::to_string(r) + " outside tube [0, " +
                           std::to_string(radius) + "] at z=" + std::to_string(z));
  if (r >= radius) return b;

  double lo = 0.0, hi = b;
  double x = std::clamp(b * (r / radius), 0.0, b);  // linear-map initial guess
  for (int it = 0; it < 200; ++it) {
    const TubeJet J = map.jet(x, z, t);
    if (!(J.R_r0 > 0.0))
      throw NonMonotone("d_r0 R~ = " + std::to_string(J.R_r0) + " at r0~=" + std::to_string(x) +
                        ", z=" + std::to_string(z));
    const double f = J.R - r;
    if (std::fabs(f) <= tol) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    double next = x - f / J.R_r0;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
    if (next == x) return x;  // double resolution exhausted
    x = next;
  }
  throw NonMonotone("no convergence to residual " + std::to_string(tol) + " at r=" +
                    std::to_string(r) + ", z=" + std::to_string(z));
}

ReconstructedVelocity reconstruct_velocity(const StreamTubeMap& map,
                                           const std::function<double(double, double)>& U_in,
                                           double r, double z, double t) {
  const double r0 = invert_streamtube(map, r, z, t);
  const double rho = inflow_propagation(map, r0, z, t);
  const TubeJet J = map.jet(r0, z, t);
  ReconstructedVelocity v;
  v.v_z = rho * U_in(r0, t);
  v.v_r = J.R_z * v.v_z;
  return v;
}

}  // namespace efl
