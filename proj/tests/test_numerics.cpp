#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "efl/bessel.hpp"
#include "efl/fd.hpp"
#include "efl/ode.hpp"
#include "efl/quadrature.hpp"
#include "efl/scalar_jet.hpp"
#include "efl/spline.hpp"

using namespace efl;

TEST_CASE("central differences with Richardson hit ~1e-10 on smooth functions") {
  auto f = [](double x) { return std::exp(x) * std::sin(2.0 * x); };
  auto df = [](double x) { return std::exp(x) * (std::sin(2.0 * x) + 2.0 * std::cos(2.0 * x)); };
  auto d2f = [](double x) {
    return std::exp(x) * (std::sin(2.0 * x) + 2.0 * std::cos(2.0 * x)) +
           std::exp(x) * (std::cos(2.0 * x) * 2.0 - 4.0 * std::sin(2.0 * x));
  };
  for (double x : {-1.3, 0.0, 0.7, 2.4}) {
    CHECK(fd_derivative(f, x, 1) == doctest::Approx(df(x)).epsilon(1e-9));
    CHECK(fd_derivative(f, x, 2) == doctest::Approx(d2f(x)).epsilon(1e-4));
  }
}

TEST_CASE("Fornberg weights reproduce the classical uniform stencils") {
  const std::vector<double> nodes = {-2.0, -1.0, 0.0, 1.0, 2.0};
  auto w = fd_weights(0.0, nodes, 3);
  // order 1: (1/12)(1, -8, 0, 8, -1)
  const double c1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  // order 2: (1/12)(-1, 16, -30, 16, -1)
  const double c2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  for (int i = 0; i < 5; ++i) {
    CHECK(w[1][i] == doctest::Approx(c1[i]).epsilon(1e-14));
    CHECK(w[2][i] == doctest::Approx(c2[i]).epsilon(1e-14));
  }
  // order 0 at an interior off-node point interpolates exactly (degree-4 poly).
  auto wi = fd_weights(0.3, nodes, 0);
  auto poly = [](double x) { return 1.0 + x * (2.0 + x * (-1.0 + x * (0.5 + 0.25 * x))); };
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += wi[0][i] * poly(nodes[i]);
  CHECK(acc == doctest::Approx(poly(0.3)).epsilon(1e-13));
}

TEST_CASE("Fornberg weights on clustered nodes differentiate polynomials exactly") {
  const std::vector<double> nodes = {0.0, 0.01, 0.04, 0.09, 0.16};
  auto w = fd_weights(0.0, nodes, 3);
  auto poly = [](double x) { return 3.0 - x + 2.0 * x * x + 0.5 * x * x * x; };
  const double exact[4] = {3.0, -1.0, 4.0, 3.0};
  for (int k = 0; k <= 3; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) acc += w[k][i] * poly(nodes[i]);
    CHECK(acc == doctest::Approx(exact[k]).epsilon(1e-9));
  }
}

TEST_CASE("adaptive Simpson integrates to requested tolerance") {
  const double pi = std::numbers::pi;
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-11));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-12) ==
        doctest::Approx(std::sqrt(pi)).epsilon(1e-11));

  CumulativeIntegral ci([](double x) { return 1.0 / (1.0 + x * x); }, {0.0, 0.5, 1.0, 2.0, 5.0},
                        1e-12);
  CHECK(ci.value(1.0) == doctest::Approx(std::atan(1.0)).epsilon(1e-11));
  CHECK(ci.value(3.7) == doctest::Approx(std::atan(3.7)).epsilon(1e-11));
  CHECK(ci.total() == doctest::Approx(std::atan(5.0)).epsilon(1e-11));
}

TEST_CASE("not-a-knot spline reproduces cubics exactly and differentiates smoothly") {
  std::vector<double> x, y;
  auto cubic = [](double v) { return 2.0 - v + 0.5 * v * v - 0.25 * v * v * v; };
  for (int i = 0; i <= 8; ++i) {
    x.push_back(0.3 * i);
    y.push_back(cubic(x.back()));
  }
  CubicSpline s(x, y);
  for (double q : {0.1, 0.77, 1.5, 2.39}) {
    CHECK(s.eval(q) == doctest::Approx(cubic(q)).epsilon(1e-12));
    CHECK(s.eval(q, 1) == doctest::Approx(-1.0 + q - 0.75 * q * q).epsilon(1e-11));
    CHECK(s.eval(q, 2) == doctest::Approx(1.0 - 1.5 * q).epsilon(1e-10));
  }
  CHECK_THROWS_AS(s.eval(-0.5), std::out_of_range);
  CHECK_THROWS_AS(s.eval(3.0), std::out_of_range);

  // Interpolation of sin on 21 nodes: sup error well under h^4.
  std::vector<double> xs, ys;
  for (int i = 0; i <= 20; ++i) {
    xs.push_back(i * 0.1);
    ys.push_back(std::sin(xs.back()));
  }
  CubicSpline ss(xs, ys);
  double emax = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double q = 2.0 * i / 199.0;
    emax = std::max(emax, std::fabs(ss.eval(q) - std::sin(q)));
  }
  CHECK(emax < 5e-6);
}

TEST_CASE("second-order jet arithmetic matches nested finite differences") {
  auto value = [](double r, double z, double t) {
    const Jet2 p = (Jet2::radius(r) * Jet2::axial(z) + Jet2::time(t)) /
                   (Jet2::constant(1.0) + Jet2::radius(r) * Jet2::time(t));
    return p;
  };
  auto scalar = [](double r, double z, double t) { return (r * z + t) / (1.0 + r * t); };

  const double r0 = 0.7, z0 = -0.4, t0 = 0.9;
  const Jet2 J = value(r0, z0, t0);
  CHECK(J.v == doctest::Approx(scalar(r0, z0, t0)).epsilon(1e-14));

  auto along = [&](int axis) {
    return [=](double h) {
      return scalar(r0 + (axis == 0 ? h : 0.0), z0 + (axis == 1 ? h : 0.0),
                    t0 + (axis == 2 ? h : 0.0));
    };
  };
  // Closed-form partials of f = (rz+t)/(1+rt) with D = 1+rt:
  const double D = 1.0 + r0 * t0;
  CHECK(J.dr == doctest::Approx((z0 - t0 * t0) / (D * D)).epsilon(1e-13));
  CHECK(J.dz == doctest::Approx(r0 / D).epsilon(1e-13));
  CHECK(J.dt == doctest::Approx((1.0 - r0 * r0 * z0) / (D * D)).epsilon(1e-13));
  CHECK(J.drr == doctest::Approx(-2.0 * t0 * (z0 - t0 * t0) / (D * D * D)).epsilon(1e-13));
  CHECK(J.dzz == doctest::Approx(0.0).epsilon(1e-12));  // f is affine in z at fixed (r, t)
  CHECK(J.dtt ==
        doctest::Approx(-2.0 * r0 * (1.0 - r0 * r0 * z0) / (D * D * D)).epsilon(1e-13));
  CHECK(J.drz == doctest::Approx(1.0 / (D * D)).epsilon(1e-13));
  CHECK(J.drt == doctest::Approx(-2.0 * t0 / (D * D) -
                                 2.0 * r0 * (z0 - t0 * t0) / (D * D * D))
                     .epsilon(1e-12));
  CHECK(J.dzt == doctest::Approx(-r0 * r0 / (D * D)).epsilon(1e-12));

  // Finite differences as an independent loose cross-check.
  CHECK(J.dr == doctest::Approx(fd_derivative(along(0), 0.0, 1)).epsilon(1e-7));
  CHECK(J.drr == doctest::Approx(fd_derivative(along(0), 0.0, 2)).epsilon(1e-3));
  CHECK(J.dtt == doctest::Approx(fd_derivative(along(2), 0.0, 2)).epsilon(1e-3));
}

TEST_CASE("dopri5 dense output tracks exp and the harmonic oscillator") {
  using S1 = StateVec<1>;
  auto rhs = [](double, const S1& y, S1& dy) { dy[0] = y[0]; };
  auto res = dopri5<1>(rhs, 0.0, S1{1.0}, 2.0, 1e-10);
  REQUIRE(res.outcome == OdeOutcome::reached_end);
  CHECK(res.y_end[0] == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
  for (int i = 1; i < 20; ++i) {
    const double t = 2.0 * i / 20.0;
    CHECK(res.dense.eval(t)[0] == doctest::Approx(std::exp(t)).epsilon(1e-8));
  }

  using S2 = StateVec<2>;
  auto osc = [](double, const S2& y, S2& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  auto ro = dopri5<2>(osc, 0.0, S2{1.0, 0.0}, 10.0, 1e-11);
  CHECK(ro.y_end[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-8));
  CHECK(ro.y_end[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-8));
}

TEST_CASE("dopri5 stop predicate localizes the crossing") {
  using S1 = StateVec<1>;
  auto rhs = [](double t, const S1&, S1& dy) { dy[0] = std::cos(t); };
  auto res = dopri5<1>(
      rhs, 0.0, S1{0.0}, 3.0, 1e-12, [](double, const S1& y) { return y[0] > 0.7; });
  REQUIRE(res.outcome == OdeOutcome::stopped);
  // sin(t) = 0.7 first at t = asin(0.7)
  CHECK(res.t_end == doctest::Approx(std::asin(0.7)).epsilon(1e-9));
  CHECK(res.y_end[0] == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("complex J0 series agrees with the standard library on real arguments") {
  for (double x : {0.0, 0.3, 1.0, 2.7, 5.5, 11.0}) {
    auto S = j0_radial_jets(std::complex<double>(1.0, 0.0), x);
    CHECK(S[0].real() == doctest::Approx(std::cyl_bessel_j(0.0, x)).epsilon(1e-12));
    CHECK(S[0].imag() == doctest::Approx(0.0).epsilon(1e-14));
    if (x > 0.0)
      CHECK(S[1].real() == doctest::Approx(-std::cyl_bessel_j(1.0, x)).epsilon(1e-11));
  }
}

TEST_CASE("complex J0 series satisfies the Bessel ODE for oscillatory-flow wavenumbers") {
  // k^2 = -i N / nu as in the oscillatory pipe profile.
  for (double alpha : {1.0, 4.0, 12.0, 20.0}) {
    const std::complex<double> k =
        std::complex<double>(-std::sqrt(0.5), std::sqrt(0.5)) * alpha;
    auto S0 = j0_radial_jets(k, 0.0);
    CHECK(std::abs(S0[0] - 1.0) < 1e-14);
    CHECK(std::abs(S0[1]) < 1e-14);
    for (double r : {0.05, 0.3, 0.8, 1.0}) {
      auto S = j0_radial_jets(k, r);
      const std::complex<double> resid = S[2] + S[1] / r + k * k * S[0];
      CHECK(std::abs(resid) < 1e-9 * std::abs(S[0]));
      // Third derivative consistent with differentiating the ODE:
      // S''' = -S''/r + S'/r^2 - k^2 S'.
      const std::complex<double> d3 = -S[2] / r + S[1] / (r * r) - k * k * S[1];
      CHECK(std::abs(S[3] - d3) < 1e-8 * (std::abs(S[3]) + std::abs(S[1]) + 1.0));
    }
  }
}
