#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "efl/fd.hpp"
#include "efl/field.hpp"
#include "efl/fixtures.hpp"
#include "efl/grid_field.hpp"

using namespace efl;

namespace {

struct Box {
  double r_lo, r_hi, z_lo, z_hi, t_lo, t_hi;
};

struct Case {
  FieldPtr field;
  Box box;
};

std::vector<Case> analytic_cases() {
  std::vector<Case> cs;
  cs.push_back({make_field(StraightTubeSpec{Waveform::Sinusoid{1.0, 0.5, 2.0, 0.3}}),
                {0.05, 2.0, -1.0, 1.0, 0.0, 2.0}});
  cs.push_back({make_field(ShearFlowSpec{RadialProfile::Poly{{0.3, 0.0, -0.5, 0.25}}}),
                {0.05, 1.5, -1.0, 1.0, 0.0, 2.0}});
  cs.push_back({make_field(RigidHelixSpec{2.0, 1.0}), {0.05, 1.5, -1.0, 1.0, 0.0, 2.0}});
  cs.push_back({make_field(StagnationSwirlSpec{1.0, 1.0}), {0.05, 1.5, 0.2, 2.0, 0.0, 1.5}});
  cs.push_back({make_field(PoiseuilleSpec{4.0, 1.0, 1.0, 1.0}), {0.05, 0.95, -1.0, 1.0, 0.0, 2.0}});
  cs.push_back({make_field(WomersleySpec{1.0, 4.0, 1.0, 1.0}), {0.05, 0.95, -1.0, 1.0, 0.0, 2.0}});
  return cs;
}

double comp(const CylVec& v, int c) { return c == 0 ? v.r : (c == 1 ? v.th : v.z); }

double jet_scale(const FieldJet& J) {
  double s = 1.0;
  for (const CylVec* v : {&J.u, &J.d_r, &J.d_z, &J.d_t, &J.d_rr, &J.d_rz, &J.d_zz, &J.d_rt,
                          &J.d_zt, &J.d_tt})
    s = std::max({s, std::fabs(v->r), std::fabs(v->th), std::fabs(v->z)});
  return s;
}

/// Every analytic partial must agree with one differencing layer applied to
/// the next-lower analytic derivative.
void check_jet_consistency(const FlowField& f, double r, double z, double t) {
  const bool third = f.supports_third_order();
  const FieldJet J = f.jet(r, z, t, third ? 3 : 2);
  const double tol = 1e-6 * jet_scale(J);

  auto jr = [&](double rr) { return f.jet(rr, z, t); };
  auto jz = [&](double zz) { return f.jet(r, zz, t); };
  auto jt = [&](double tt) { return f.jet(r, z, tt); };

  for (int c = 0; c < 3; ++c) {
    CAPTURE(c);
    CAPTURE(r);
    CAPTURE(z);
    CAPTURE(t);
    // first partials against differenced values
    CHECK(std::fabs(comp(J.d_r, c) -
                    fd_derivative([&](double x) { return comp(f.eval(x, z, t), c); }, r, 1)) < tol);
    CHECK(std::fabs(comp(J.d_z, c) -
                    fd_derivative([&](double x) { return comp(f.eval(r, x, t), c); }, z, 1)) < tol);
    CHECK(std::fabs(comp(J.d_t, c) -
                    fd_derivative([&](double x) { return comp(f.eval(r, z, x), c); }, t, 1)) < tol);
    // second partials against differenced first partials
    CHECK(std::fabs(comp(J.d_rr, c) -
                    fd_derivative([&](double x) { return comp(jr(x).d_r, c); }, r, 1)) < tol);
    CHECK(std::fabs(comp(J.d_rz, c) -
                    fd_derivative([&](double x) { return comp(jz(x).d_r, c); }, z, 1)) < tol);
    CHECK(std::fabs(comp(J.d_zz, c) -
                    fd_derivative([&](double x) { return comp(jz(x).d_z, c); }, z, 1)) < tol);
    CHECK(std::fabs(comp(J.d_rt, c) -
                    fd_derivative([&](double x) { return comp(jt(x).d_r, c); }, t, 1)) < tol);
    CHECK(std::fabs(comp(J.d_zt, c) -
                    fd_derivative([&](double x) { return comp(jt(x).d_z, c); }, t, 1)) < tol);
    CHECK(std::fabs(comp(J.d_tt, c) -
                    fd_derivative([&](double x) { return comp(jt(x).d_t, c); }, t, 1)) < tol);
    if (third) {
      CHECK(std::fabs(comp(J.d_rrr, c) -
                      fd_derivative([&](double x) { return comp(jr(x).d_rr, c); }, r, 1)) < tol);
      CHECK(std::fabs(comp(J.d_rrz, c) -
                      fd_derivative([&](double x) { return comp(jz(x).d_rr, c); }, z, 1)) < tol);
      CHECK(std::fabs(comp(J.d_rzz, c) -
                      fd_derivative([&](double x) { return comp(jz(x).d_rz, c); }, z, 1)) < tol);
      CHECK(std::fabs(comp(J.d_zzz, c) -
                      fd_derivative([&](double x) { return comp(jz(x).d_zz, c); }, z, 1)) < tol);
    }
  }
}

/// Sample a smooth analytic field onto a full lattice in the text format the
/// loader expects.
std::string grid_text(const std::vector<double>& rs, const std::vector<double>& zs,
                      const std::vector<double>& ts,
                      const std::function<CylVec(double, double, double)>& u) {
  std::ostringstream os;
  os.precision(17);
  os << "r z t v_r v_theta v_z\n";
  for (double t : ts)
    for (double z : zs)
      for (double r : rs) {
        const CylVec v = u(r, z, t);
        os << r << " " << z << " " << t << " " << v.r << " " << v.th << " " << v.z << "\n";
      }
  return os.str();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

}  // namespace

TEST_CASE("registry lists the seven built-in fixtures in order") {
  const auto& reg = fixture_registry();
  REQUIRE(reg.size() == 7);
  const char* names[] = {"straight_tube", "shear_flow",  "rigid_helix", "stagnation_swirl",
                         "poiseuille",    "womersley",   "gridded"};
  for (size_t i = 0; i < 7; ++i) CHECK(reg[i].name == names[i]);
  CHECK(reg[0].euler_exact);
  CHECK(reg[3].euler_exact);
  CHECK_FALSE(reg[4].euler_exact);
  CHECK_FALSE(reg[6].euler_exact);
}

TEST_CASE("eval reproduces the closed-form fixture values") {
  auto pois = make_field(PoiseuilleSpec{4.0, 1.0, 1.0, 1.0});
  const CylVec c = pois->eval(0.0, 0.3, 1.7);
  CHECK(c.z == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.r == 0.0);
  CHECK(c.th == 0.0);

  auto stag = make_field(StagnationSwirlSpec{1.0, 1.0});
  const CylVec v = stag->eval(0.5, 1.0, 0.0);
  CHECK(v.r == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(v.th == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v.z == doctest::Approx(1.0).epsilon(1e-15));

  auto helix = make_field(RigidHelixSpec{2.0, 1.0});
  const CylVec h = helix->eval(0.5, -2.0, 5.0);
  CHECK(h.th == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h.z == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("domain violations throw the dedicated errors") {
  auto pois = make_field(PoiseuilleSpec{4.0, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(pois->eval(1.2, 0.0, 0.0), OutOfDomain);
  CHECK_THROWS_AS(pois->eval(-0.1, 0.0, 0.0), NegativeRadius);
  auto stag = make_field(StagnationSwirlSpec{1.0, 0.0});
  CHECK_THROWS_AS(stag->eval(0.5, 0.0, 0.0), OutOfDomain);   // z > 0 is open
  CHECK_THROWS_AS(stag->eval(0.5, -1.0, 0.0), OutOfDomain);
  CHECK_NOTHROW(stag->eval(0.5, 1e-12, 0.0));
  CHECK_THROWS_AS(make_field(StagnationSwirlSpec{-1.0, 0.0}), ConfigError);
}

TEST_CASE("jet entries match the fixture formulas at spot points") {
  auto tube = make_field(StraightTubeSpec{Waveform::Sinusoid{1.0, 0.5, 2.0, 0.0}});
  const FieldJet J = tube->jet(0.7, 0.2, 0.9, 3);
  CHECK(J.d_r.z == 0.0);
  CHECK(J.d_z.z == 0.0);
  CHECK(J.d_rr.z == 0.0);
  // g(t) = 1 + 0.5 sin(2t): g'(t) = cos(2t)
  CHECK(J.d_t.z == doctest::Approx(std::cos(1.8)).epsilon(1e-14));

  auto helix = make_field(RigidHelixSpec{2.0, 1.0});
  CHECK(helix->jet(0.3, 0.0, 0.0).d_r.th == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(helix->jet(1.1, -3.0, 7.0).d_r.th == doctest::Approx(2.0).epsilon(1e-15));

  auto stag = make_field(StagnationSwirlSpec{1.0, 1.0});
  CHECK(stag->jet(0.5, 1.0, 0.0).d_t.th == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("axis parity: no radial or azimuthal velocity on the axis") {
  for (const auto& c : analytic_cases()) {
    if (c.field->domain().z_min_open && c.box.z_lo <= 0.0) continue;
    const CylVec v = c.field->eval(0.0, (c.box.z_lo + c.box.z_hi) / 2, c.box.t_lo);
    CAPTURE(c.field->name());
    CHECK(v.r == 0.0);
    CHECK(v.th == 0.0);
  }
}

TEST_CASE("analytic jets agree with one layer of differencing everywhere") {
  std::mt19937 rng(7101);
  for (const auto& c : analytic_cases()) {
    CAPTURE(c.field->name());
    std::uniform_real_distribution<double> ur(c.box.r_lo, c.box.r_hi), uz(c.box.z_lo, c.box.z_hi),
        ut(c.box.t_lo, c.box.t_hi);
    for (int i = 0; i < 6; ++i) check_jet_consistency(*c.field, ur(rng), uz(rng), ut(rng));
  }
}

TEST_CASE("all fixtures are pointwise divergence-free") {
  std::mt19937 rng(90210);
  for (const auto& c : analytic_cases()) {
    CAPTURE(c.field->name());
    std::uniform_real_distribution<double> ur(0.0, c.box.r_hi), uz(c.box.z_lo, c.box.z_hi),
        ut(c.box.t_lo, c.box.t_hi);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      double z = uz(rng);
      if (c.field->domain().z_min_open) z = std::max(z, 1e-3);
      worst = std::max(worst, std::fabs(divergence(*c.field, ur(rng), z, ut(rng))));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("acceleration matches the closed forms") {
  auto helix = make_field(RigidHelixSpec{2.0, 1.0});
  const CylVec A = acceleration(*helix, 0.5, 0.0, 0.0);
  CHECK(A.r == doctest::Approx(-2.0).epsilon(1e-14));  // -omega^2 r
  CHECK(A.th == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(A.z == doctest::Approx(0.0).epsilon(1e-14));

  auto tube = make_field(StraightTubeSpec{Waveform::Sinusoid{1.0, 0.5, 2.0, 0.0}});
  const CylVec At = acceleration(*tube, 0.4, 1.0, 0.7);
  CHECK(At.r == 0.0);
  CHECK(At.th == 0.0);
  CHECK(At.z == doctest::Approx(std::cos(1.4)).epsilon(1e-14));

  auto stag = make_field(StagnationSwirlSpec{1.3, 0.8});
  for (double r : {0.0, 0.2, 1.0})
    for (double z : {0.5, 2.0})
      CHECK(acceleration(*stag, r, z, 0.4).th == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("acceleration agrees with differencing the velocity along the known helix path") {
  const double omega = 2.0, W = 1.0, r0 = 0.5, th0 = 0.4, z0 = -0.2;
  auto helix = make_field(RigidHelixSpec{omega, W});
  auto u_along = [&](double t) {
    const double th = th0 + omega * t;
    return cyl_vec_to_cart(helix->eval(r0, z0 + W * t, t), th);
  };
  const Vec3 a_fd{fd_derivative([&](double t) { return u_along(t).x; }, 0.0, 1),
                  fd_derivative([&](double t) { return u_along(t).y; }, 0.0, 1),
                  fd_derivative([&](double t) { return u_along(t).z; }, 0.0, 1)};
  const Vec3 a = acceleration_cartesian(*helix, r0, th0, z0, 0.0);
  CHECK(a.x == doctest::Approx(a_fd.x).epsilon(1e-8));
  CHECK(a.y == doctest::Approx(a_fd.y).epsilon(1e-8));
  CHECK(a.z == doctest::Approx(a_fd.z).scale(1.0).epsilon(1e-8));
}

TEST_CASE("pressure compatibility separates Euler solutions from viscous profiles") {
  std::mt19937 rng(5150);
  auto cases = analytic_cases();
  for (size_t i : {size_t(0), size_t(1), size_t(2), size_t(3)}) {
    const auto& c = cases[i];
    CAPTURE(c.field->name());
    REQUIRE(c.field->euler_exact());
    std::uniform_real_distribution<double> ur(0.0, c.box.r_hi), uz(c.box.z_lo, c.box.z_hi),
        ut(c.box.t_lo, c.box.t_hi);
    for (int k = 0; k < 20; ++k) {
      double z = uz(rng);
      if (c.field->domain().z_min_open) z = std::max(z, 1e-2);
      const PressureCompat pc = pressure_compatibility(*c.field, ur(rng), z, ut(rng));
      CHECK(std::fabs(pc.a_theta) <= 1e-8);
      CHECK(std::fabs(pc.curl_mismatch) <= 1e-8);
    }
  }
  // sharp version of the swirling stagnation example
  auto stag = make_field(StagnationSwirlSpec{1.0, 1.0});
  const PressureCompat pc = pressure_compatibility(*stag, 0.7, 1.3, 0.5);
  CHECK(std::fabs(pc.a_theta) <= 1e-10);
  CHECK(std::fabs(pc.curl_mismatch) <= 1e-10);

  // the oscillatory viscous profile is *not* pressure-compatible
  auto wom = make_field(WomersleySpec{1.0, 4.0, 1.0, 1.0});
  double worst = 0.0;
  for (int i = 0; i < 32; ++i) {
    const double t = i * (std::acos(-1.0) / 2) / 32.0;  // one period of N=4
    worst = std::max(worst, std::fabs(pressure_compatibility(*wom, 0.5, 0.0, t).curl_mismatch));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("oscillatory pipe profile satisfies its momentum balance") {
  const double p_o = 1.0, N = 4.0, nu = 1.0;
  auto wom = make_field(WomersleySpec{p_o, N, nu, 1.0});
  for (double r : {0.0, 0.2, 0.5, 0.8})
    for (double t : {0.0, 0.3, 0.7, 1.5}) {
      const FieldJet J = wom->jet(r, 0.0, t);
      const double lap = J.d_rr.z + (r < wom->axis_eps() ? J.d_rr.z : J.d_r.z / r);
      const double resid = J.d_t.z - nu * lap - p_o * std::cos(N * t);
      CAPTURE(r);
      CAPTURE(t);
      CHECK(std::fabs(resid) <= 1e-6);
    }
}

TEST_CASE("oscillatory profile tends to the steady parabolic profile as N -> 0") {
  auto wom = make_field(WomersleySpec{1.0, 1e-6, 1.0, 1.0});
  auto pois = make_field(PoiseuilleSpec{1.0, 1.0, 1.0, 1.0});
  for (double r : {0.0, 0.3, 0.6, 0.9}) {
    const double w = wom->eval(r, 0.0, 0.0).z;
    const double p = pois->eval(r, 0.0, 0.0).z;
    CHECK(w == doctest::Approx(p).epsilon(1e-4));
  }
}

TEST_CASE("frequency parameter is capped at the supported range") {
  CHECK(womersley_number(WomersleySpec{1.0, 4.0, 1.0, 1.0}) == doctest::Approx(2.0));
  CHECK_NOTHROW(make_field(WomersleySpec{1.0, 399.0, 1.0, 1.0}));
  CHECK_THROWS_AS(make_field(WomersleySpec{1.0, 500.0, 1.0, 1.0}), ConfigError);
  const std::string d = describe_fixture(WomersleySpec{1.0, 4.0, 1.0, 1.0});
  CHECK(d.find("alpha") != std::string::npos);
  CHECK(d.find("= 2") != std::string::npos);
}

TEST_CASE("axis-limit helpers switch to parity limits below the threshold") {
  auto helix = make_field(RigidHelixSpec{2.0, 1.0});
  const double eps = helix->axis_eps();
  const FieldJet J0 = helix->jet(eps / 2, 0.0, 0.0);
  CHECK(swirl_over_r(J0, eps / 2, eps) == doctest::Approx(2.0).epsilon(1e-12));
  const FieldJet J1 = helix->jet(0.5, 0.0, 0.0);
  CHECK(swirl_over_r(J1, 0.5, eps) == doctest::Approx(2.0).epsilon(1e-12));
}

// ---- grid-backed fields -----------------------------------------------------

TEST_CASE("grid loader round-trips a smooth sampled field") {
  auto u = [](double r, double z, double t) {
    const double s = 1.0 + 0.1 * t * t;
    return CylVec{0.1 * r * std::cos(z) * s, 0.3 * r * s, (1.0 + 0.2 * std::sin(z)) * s};
  };
  const auto rs = linspace(0.0, 1.0, 9), zs = linspace(0.0, 2.0, 9), ts = linspace(0.0, 1.0, 5);
  std::istringstream in(grid_text(rs, zs, ts, u));
  auto data = std::make_shared<GridData>(GridData::load(in));
  REQUIRE(data->nr() == 9);
  REQUIRE(data->nz() == 9);
  REQUIRE(data->nt() == 5);
  auto g = make_field(GriddedSpec{data});

  // exact at lattice nodes
  for (size_t i : {size_t(0), size_t(4), size_t(8)})
    for (size_t j : {size_t(1), size_t(7)})
      for (size_t k : {size_t(0), size_t(3)}) {
        const CylVec got = g->eval(rs[i], zs[j], ts[k]);
        const CylVec want = u(rs[i], zs[j], ts[k]);
        CHECK(got.r == doctest::Approx(want.r).epsilon(1e-9));
        CHECK(got.th == doctest::Approx(want.th).epsilon(1e-9));
        CHECK(got.z == doctest::Approx(want.z).epsilon(1e-9));
      }

  // close off-node, with derivative jets tracking the analytic field loosely
  for (double r : {0.21, 0.68})
    for (double z : {0.37, 1.55}) {
      const double t = 0.63;
      const CylVec got = g->eval(r, z, t);
      const CylVec want = u(r, z, t);
      CHECK(std::fabs(got.r - want.r) < 1e-4);
      CHECK(std::fabs(got.th - want.th) < 1e-4);
      CHECK(std::fabs(got.z - want.z) < 1e-4);
      const FieldJet J = g->jet(r, z, t);
      const double s = 1.0 + 0.1 * t * t;
      CHECK(std::fabs(J.d_r.r - 0.1 * std::cos(z) * s) < 1e-3);
      CHECK(std::fabs(J.d_z.z - 0.2 * std::cos(z) * s) < 1e-3);
      CHECK(std::fabs(J.d_t.th - 0.3 * r * 0.2 * t) < 1e-3);
      CHECK(std::fabs(J.d_zz.z + 0.2 * std::sin(z) * s) < 5e-2);
    }

  CHECK_THROWS_AS(g->jet(0.5, 1.0, 0.5, 3), ThirdOrderUnavailable);
  CHECK_THROWS_AS(g->eval(0.5, 1.0, 2.0), OutOfDomain);   // t beyond the grid
  CHECK_THROWS_AS(g->eval(0.5, 3.0, 0.5), OutOfDomain);   // z beyond the grid
  CHECK_THROWS_AS(g->eval(1.5, 1.0, 0.5), OutOfDomain);   // r beyond the grid
}

TEST_CASE("gridded divergence exercises the axis-limit branch") {
  const double eps = 0.01;
  auto u = [&](double r, double, double) { return CylVec{eps * r, 0.0, 1.0}; };
  const auto rs = linspace(0.0, 1.0, 5), zs = linspace(0.0, 2.0, 5), ts = linspace(0.0, 1.0, 4);
  std::istringstream in(grid_text(rs, zs, ts, u));
  auto g = make_field(GriddedSpec{std::make_shared<GridData>(GridData::load(in))});
  CHECK(divergence(*g, 0.0, 1.0, 0.5) == doctest::Approx(2 * eps).epsilon(1e-8));
  CHECK(divergence(*g, 0.5, 1.0, 0.5) == doctest::Approx(2 * eps).epsilon(1e-8));
}

TEST_CASE("grid loader rejects malformed input") {
  const auto rs = linspace(0.0, 1.0, 4), zs = linspace(0.0, 1.0, 4), ts = linspace(0.0, 1.0, 4);
  auto zero = [](double, double, double) { return CylVec{0.0, 0.0, 0.0}; };

  {
    std::istringstream in("r z t vr vtheta vz\n0 0 0 0 0 0\n");
    CHECK_THROWS_AS(GridData::load(in), GridFormatError);
  }
  {
    std::string txt = grid_text(rs, zs, ts, zero);
    txt += "0.5 0.5 0.5 0 0 0\n";  // stray extra row
    std::istringstream in(txt);
    CHECK_THROWS_AS(GridData::load(in), GridFormatError);
  }
  {
    std::string txt = grid_text(rs, zs, ts, zero);
    const auto pos = txt.find('\n', txt.find('\n') + 1);
    txt.insert(pos, " 42");  // seven numbers on one row
    std::istringstream in(txt);
    CHECK_THROWS_AS(GridData::load(in), GridFormatError);
  }
  {
    // non-monotone axis: duplicate r node
    auto rs2 = rs;
    rs2[2] = rs2[1];
    std::istringstream in(grid_text(rs2, zs, ts, zero));
    CHECK_THROWS_AS(GridData::load(in), GridFormatError);
  }
  {
    // too few nodes along r
    std::istringstream in(grid_text(linspace(0.0, 1.0, 3), zs, ts, zero));
    CHECK_THROWS_AS(GridData::load(in), GridFormatError);
  }
  {
    // swirl that does not vanish on the axis
    auto bad = [](double, double, double) { return CylVec{0.0, 0.5, 1.0}; };
    std::istringstream in(grid_text(rs, zs, ts, bad));
    CHECK_THROWS_AS(GridData::load(in), AxisParityError);
  }
  CHECK_THROWS_AS(make_field(GriddedSpec{nullptr}), ConfigError);
}
