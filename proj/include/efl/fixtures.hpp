#pragma once

/// @file fixtures.hpp
/// The built-in closed-form velocity fields plus the grid-backed one.
/// Every fixture publishes exact derivative jets; the registry drives the
/// CLI's list/describe commands.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "efl/field.hpp"
#include "efl/waveform.hpp"

namespace efl {

struct GridData;

/// u = (0, 0, g(t)): time-modulated plug flow in a straight tube.
struct StraightTubeSpec {
  Waveform g;
};

/// u = (0, 0, f(r)): steady unidirectional shear.
struct ShearFlowSpec {
  RadialProfile f;
};

/// v_theta = omega r, v_z = W: rigid rotation advected axially.
struct RigidHelixSpec {
  double omega = 1.0;
  double axial = 1.0;  // W
};

/// v_r = -alpha r / 2, v_z = alpha z, v_theta = omega0 e^{alpha t} r.
/// Exact unsteady Euler solution with swirl; domain restricted to z > 0
/// where the flow is unilateral.
struct StagnationSwirlSpec {
  double alpha = 1.0;
  double omega0 = 0.0;
};

/// v_z = p_s (radius^2 - r^2) / (4 nu ell): steady parabolic pipe flow.
struct PoiseuilleSpec {
  double p_s = 1.0;
  double nu = 1.0;
  double ell = 1.0;
  double radius = 1.0;
};

/// Oscillating-gradient pipe flow, real part of the Bessel-series solution;
/// driving gradient p_o cos(N t).
struct WomersleySpec {
  double p_o = 1.0;
  double N = 1.0;
  double nu = 1.0;
  double radius = 1.0;
};

struct GriddedSpec {
  std::shared_ptr<const GridData> grid;
};

using FixtureSpec = std::variant<StraightTubeSpec, ShearFlowSpec, RigidHelixSpec,
                                 StagnationSwirlSpec, PoiseuilleSpec, WomersleySpec, GriddedSpec>;

/// Instantiate a field; throws ConfigError on invalid parameters.
FieldPtr make_field(const FixtureSpec& spec);

/// Womersley number alpha = radius * sqrt(N / nu).
double womersley_number(const WomersleySpec& s);

struct FixtureInfo {
  std::string name;
  std::string formula;
  std::vector<std::string> params;
  bool euler_exact;
};

/// All seven built-in fixtures in registration order.
const std::vector<FixtureInfo>& fixture_registry();

/// Multi-line description of a configured fixture (parameters, domain,
/// derived numbers such as the Womersley alpha).
std::string describe_fixture(const FixtureSpec& spec);

}  // namespace efl
