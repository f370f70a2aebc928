#pragma once

/// @file scenario.hpp
/// Batch front-end: parse a JSON scenario config, assemble the field, seed
/// trajectories, run the diagnostic pipeline, and emit deterministic tables
/// plus a run report.  See README for the config schema.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efl/csvio.hpp"
#include "efl/diagnostics.hpp"
#include "efl/fixtures.hpp"
#include "efl/trajectory.hpp"

namespace efl {

struct SeedSpec {
  double r0 = 0.0, theta0 = 0.0, z0 = 0.0;
};

/// r_count seeds clustered toward the axis at z_count stations (explicit
/// seeds take precedence when both are given).
struct LatticeSpec {
  int r_count = 0;
  double z_start = 0.0;
  double theta0 = 0.0;
  int z_count = 1;
};

struct ScenarioTolerances {
  double ode_tol = 1e-10;
  double quad_tol = 1e-10;
  double fd_step = 1e-4;
};

enum class RunMode { diagnose, validate };

struct ScenarioOutputs {
  std::string directory;
  TableFormat format = TableFormat::csv;
};

struct ScenarioConfig {
  FixtureSpec field;
  std::string field_name;
  std::vector<SeedSpec> seeds;
  std::optional<LatticeSpec> lattice;
  Span t_span{};
  Span z_span{};
  ThresholdConfig thresholds;
  ScenarioTolerances tolerances;
  std::optional<InflowFamily> inflow;
  ScenarioOutputs outputs;
  RunMode mode = RunMode::diagnose;
  int threads = 1;
  std::string raw_text;  // config bytes, hashed into the report

  /// Field-independent invariants: span ordering, positive tolerances,
  /// threshold bundle, presence of seeds or a lattice.
  void validate() const;
};

/// Strict parse: unknown keys and malformed values are ConfigErrors.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

struct SeedOutcome {
  SeedSpec seed;
  std::string outcome;  // "completed" or "left_domain"
  double t_end = 0.0;
  double max_abs_res = 0.0;
  double max_L0 = 0.0;
  double max_Lx = 0.0;
  double max_Lt = 0.0;
};

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct RunReport {
  std::string version;
  std::string config_hash;
  std::string mode;
  std::string field_name;
  std::vector<SeedOutcome> seeds;
  double max_abs_res = 0.0;
  double max_L0 = 0.0;
  double max_Lx = 0.0;
  double max_Lt = 0.0;
  double R_ref = 0.0;
  double U_ref = 0.0;
  std::vector<Verdict> verdicts;
  double wall_time_seconds = 0.0;  // only nondeterministic report field
};

/// Execute the scenario and write its output files.  Throws ConfigError on
/// bad input, numerical errors (NotUnilateral, ...) when the pipeline cannot
/// run, and ValidationFailure after writing the report when a validate-mode
/// verdict fails.
RunReport run_scenario(const ScenarioConfig& config);

std::string version_string();

/// FNV-1a 64-bit hash of the config bytes, rendered as "fnv1a64:<16 hex>".
std::string config_hash(const std::string& bytes);

}  // namespace efl
