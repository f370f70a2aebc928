#include "efl/fixtures.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "efl/bessel.hpp"
#include "efl/grid_field.hpp"

namespace efl {

namespace {

// ============================================================================
// Closed-form fixtures
// ============================================================================

class StraightTubeField final : public FlowField {
 public:
  explicit StraightTubeField(StraightTubeSpec s) : FlowField(Domain{}), s_(std::move(s)) {}

  bool euler_exact() const override { return true; }
  bool steady() const override { return s_.g.steady(); }
  std::string name() const override { return "straight_tube"; }

 protected:
  CylVec eval_impl(double, double, double t) const override { return {0.0, 0.0, s_.g(t)}; }

  FieldJet jet_impl(double, double, double t, bool third) const override {
    FieldJet J;
    J.u.z = s_.g.eval(t, 0);
    J.d_t.z = s_.g.eval(t, 1);
    J.d_tt.z = s_.g.eval(t, 2);
    J.has_third = third;
    return J;
  }

 private:
  StraightTubeSpec s_;
};

class ShearFlowField final : public FlowField {
 public:
  explicit ShearFlowField(ShearFlowSpec s) : FlowField(Domain{}), s_(std::move(s)) {}

  bool euler_exact() const override { return true; }
  bool steady() const override { return true; }
  std::string name() const override { return "shear_flow"; }

 protected:
  CylVec eval_impl(double r, double, double) const override { return {0.0, 0.0, s_.f(r)}; }

  FieldJet jet_impl(double r, double, double, bool third) const override {
    FieldJet J;
    J.u.z = s_.f.eval(r, 0);
    J.d_r.z = s_.f.eval(r, 1);
    J.d_rr.z = s_.f.eval(r, 2);
    if (third) {
      J.has_third = true;
      J.d_rrr.z = s_.f.eval(r, 3);
    }
    return J;
  }

 private:
  ShearFlowSpec s_;
};

class RigidHelixField final : public FlowField {
 public:
  explicit RigidHelixField(RigidHelixSpec s) : FlowField(Domain{}), s_(s) {}

  bool euler_exact() const override { return true; }
  bool steady() const override { return true; }
  std::string name() const override { return "rigid_helix"; }

 protected:
  CylVec eval_impl(double r, double, double) const override {
    return {0.0, s_.omega * r, s_.axial};
  }

  FieldJet jet_impl(double r, double, double, bool third) const override {
    FieldJet J;
    J.u.th = s_.omega * r;
    J.u.z = s_.axial;
    J.d_r.th = s_.omega;
    J.has_third = third;
    return J;
  }

 private:
  RigidHelixSpec s_;
};

class StagnationSwirlField final : public FlowField {
 public:
  explicit StagnationSwirlField(StagnationSwirlSpec s)
      : FlowField([] {
          Domain d;
          d.z_min = 0.0;
          d.z_min_open = true;
          return d;
        }()),
        s_(s) {
    if (!(s_.alpha > 0.0)) throw ConfigError("stagnation_swirl: alpha must be positive");
  }

  bool euler_exact() const override { return true; }
  bool steady() const override { return s_.omega0 == 0.0; }
  std::string name() const override { return "stagnation_swirl"; }

 protected:
  CylVec eval_impl(double r, double z, double t) const override {
    return {-0.5 * s_.alpha * r, s_.omega0 * std::exp(s_.alpha * t) * r, s_.alpha * z};
  }

  FieldJet jet_impl(double r, double z, double t, bool third) const override {
    const double w = s_.omega0 * std::exp(s_.alpha * t);
    FieldJet J;
    J.u = {-0.5 * s_.alpha * r, w * r, s_.alpha * z};
    J.d_r.r = -0.5 * s_.alpha;
    J.d_r.th = w;
    J.d_z.z = s_.alpha;
    J.d_t.th = s_.alpha * w * r;
    J.d_rt.th = s_.alpha * w;
    J.d_tt.th = s_.alpha * s_.alpha * w * r;
    J.has_third = third;  // all third spatial partials vanish
    return J;
  }

 private:
  StagnationSwirlSpec s_;
};

class PoiseuilleField final : public FlowField {
 public:
  explicit PoiseuilleField(PoiseuilleSpec s)
      : FlowField([&] {
          if (!(s.radius > 0.0)) throw ConfigError("poiseuille: radius must be positive");
          if (!(s.nu > 0.0)) throw ConfigError("poiseuille: nu must be positive");
          if (!(s.ell > 0.0)) throw ConfigError("poiseuille: ell must be positive");
          Domain d;
          d.r_max = s.radius;
          d.radius_scale = s.radius;
          return d;
        }()),
        s_(s),
        c_(s.p_s / (4.0 * s.nu * s.ell)) {}

  bool euler_exact() const override { return false; }  // needs the viscous term
  bool steady() const override { return true; }
  std::string name() const override { return "poiseuille"; }

 protected:
  CylVec eval_impl(double r, double, double) const override {
    return {0.0, 0.0, c_ * (s_.radius * s_.radius - r * r)};
  }

  FieldJet jet_impl(double r, double, double, bool third) const override {
    FieldJet J;
    J.u.z = c_ * (s_.radius * s_.radius - r * r);
    J.d_r.z = -2.0 * c_ * r;
    J.d_rr.z = -2.0 * c_;
    J.has_third = third;
    return J;
  }

 private:
  PoiseuilleSpec s_;
  double c_;
};

class WomersleyField final : public FlowField {
 public:
  explicit WomersleyField(WomersleySpec s)
      : FlowField([&] {
          if (!(s.radius > 0.0)) throw ConfigError("womersley: radius must be positive");
          if (!(s.nu > 0.0)) throw ConfigError("womersley: nu must be positive");
          if (!(s.N > 0.0)) throw ConfigError("womersley: N must be positive");
          Domain d;
          d.r_max = s.radius;
          d.radius_scale = s.radius;
          return d;
        }()),
        s_(s) {
    alpha_ = womersley_number(s_);
    if (alpha_ > 20.0)
      throw ConfigError("womersley: alpha = " + std::to_string(alpha_) +
                        " outside the supported range (alpha <= 20)");
    // k = i^(3/2) alpha / radius, so that k^2 = -i N / nu.
    const std::complex<double> i32(-std::sqrt(0.5), std::sqrt(0.5));
    k_ = i32 * (alpha_ / s_.radius);
    const std::complex<double> j0_wall = j0_radial_jets(k_, s_.radius)[0];
    plateau_ = s_.p_o / std::complex<double>(0.0, s_.N);
    scale_ = plateau_ / j0_wall;
  }

  bool euler_exact() const override { return false; }
  bool steady() const override { return false; }
  std::string name() const override { return "womersley"; }
  double alpha() const { return alpha_; }

 protected:
  CylVec eval_impl(double r, double, double t) const override {
    const auto S = j0_radial_jets(k_, r);
    const std::complex<double> E(std::cos(s_.N * t), std::sin(s_.N * t));
    return {0.0, 0.0, ((plateau_ - scale_ * S[0]) * E).real()};
  }

  FieldJet jet_impl(double r, double, double t, bool third) const override {
    const auto S = j0_radial_jets(k_, r);
    const std::complex<double> E(std::cos(s_.N * t), std::sin(s_.N * t));
    const std::complex<double> iN(0.0, s_.N);
    const std::complex<double> w0 = plateau_ - scale_ * S[0];
    const std::complex<double> w1 = -scale_ * S[1];
    const std::complex<double> w2 = -scale_ * S[2];

    FieldJet J;
    J.u.z = (w0 * E).real();
    J.d_r.z = (w1 * E).real();
    J.d_rr.z = (w2 * E).real();
    J.d_t.z = (iN * w0 * E).real();
    J.d_rt.z = (iN * w1 * E).real();
    J.d_tt.z = (iN * iN * w0 * E).real();
    if (third) {
      J.has_third = true;
      J.d_rrr.z = (-scale_ * S[3] * E).real();
    }
    return J;
  }

 private:
  WomersleySpec s_;
  double alpha_ = 0.0;
  std::complex<double> k_, plateau_, scale_;
};

}  // namespace

double womersley_number(const WomersleySpec& s) { return s.radius * std::sqrt(s.N / s.nu); }

FieldPtr make_field(const FixtureSpec& spec) {
  return std::visit(
      [](const auto& s) -> FieldPtr {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StraightTubeSpec>)
          return std::make_shared<StraightTubeField>(s);
        else if constexpr (std::is_same_v<T, ShearFlowSpec>)
          return std::make_shared<ShearFlowField>(s);
        else if constexpr (std::is_same_v<T, RigidHelixSpec>)
          return std::make_shared<RigidHelixField>(s);
        else if constexpr (std::is_same_v<T, StagnationSwirlSpec>)
          return std::make_shared<StagnationSwirlField>(s);
        else if constexpr (std::is_same_v<T, PoiseuilleSpec>)
          return std::make_shared<PoiseuilleField>(s);
        else if constexpr (std::is_same_v<T, WomersleySpec>)
          return std::make_shared<WomersleyField>(s);
        else
          return std::make_shared<GriddedField>(s.grid);
      },
      spec);
}

const std::vector<FixtureInfo>& fixture_registry() {
  static const std::vector<FixtureInfo> reg = {
      {"straight_tube", "u = (0, 0, g(t))", {"g: waveform"}, true},
      {"shear_flow", "u = (0, 0, f(r))", {"f: radial profile"}, true},
      {"rigid_helix", "u = (0, omega r, W)", {"omega", "axial (W)"}, true},
      {"stagnation_swirl",
       "u = (-alpha r/2, omega0 e^{alpha t} r, alpha z), z > 0",
       {"alpha", "omega0"},
       true},
      {"poiseuille", "v_z = p_s (R^2 - r^2) / (4 nu ell)", {"p_s", "nu", "ell", "radius"}, false},
      {"womersley",
       "v_z = Re[(p_o/(iN)) (1 - J0(i^{3/2} alpha r/R)/J0(i^{3/2} alpha)) e^{iNt}]",
       {"p_o", "N", "nu", "radius"},
       false},
      {"gridded", "cubic-spline interpolation of tabulated (v_r, v_theta, v_z)", {"grid: path"}, false},
  };
  return reg;
}

std::string describe_fixture(const FixtureSpec& spec) {
  std::ostringstream os;
  const FieldPtr f = make_field(spec);
  const size_t idx = spec.index();
  const FixtureInfo& info = fixture_registry()[idx];
  os << info.name << "\n  " << info.formula << "\n";
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StraightTubeSpec>) {
          os << "  g = " << s.g.describe() << "\n";
        } else if constexpr (std::is_same_v<T, ShearFlowSpec>) {
          os << "  f = " << s.f.describe() << "\n";
        } else if constexpr (std::is_same_v<T, RigidHelixSpec>) {
          os << "  omega = " << s.omega << ", W = " << s.axial << "\n";
        } else if constexpr (std::is_same_v<T, StagnationSwirlSpec>) {
          os << "  alpha = " << s.alpha << ", omega0 = " << s.omega0 << "\n";
        } else if constexpr (std::is_same_v<T, PoiseuilleSpec>) {
          os << "  p_s = " << s.p_s << ", nu = " << s.nu << ", ell = " << s.ell
             << ", radius = " << s.radius << "\n";
          os << "  centerline speed = " << s.p_s * s.radius * s.radius / (4.0 * s.nu * s.ell)
             << "\n";
        } else if constexpr (std::is_same_v<T, WomersleySpec>) {
          os << "  p_o = " << s.p_o << ", N = " << s.N << ", nu = " << s.nu
             << ", radius = " << s.radius << "\n";
          os << "  Womersley number alpha = radius sqrt(N/nu) = " << womersley_number(s) << "\n";
        } else {
          os << "  grid: " << s.grid->nr() << " x " << s.grid->nz() << " x " << s.grid->nt()
             << " nodes (r x z x t)\n";
        }
      },
      spec);
  const Domain& d = f->domain();
  os << "  domain: r in [" << d.r_min << ", ";
  if (d.bounded_radius())
    os << d.r_max;
  else
    os << "inf";
  os << "], z in " << (d.z_min_open ? "(" : "[");
  if (std::isfinite(d.z_min))
    os << d.z_min;
  else
    os << "-inf";
  os << ", ";
  if (std::isfinite(d.z_max))
    os << d.z_max;
  else
    os << "inf";
  os << "]\n";
  os << "  exact Euler solution: " << (f->euler_exact() ? "yes" : "no") << "\n";
  os << "  steady: " << (f->steady() ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace efl
