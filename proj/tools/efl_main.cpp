/// @file efl_main.cpp
/// Command-line front end: run a scenario config, list the built-in velocity
/// fields, or describe one with concrete parameters.

#include <iostream>
#include <map>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "efl/errors.hpp"
#include "efl/fixtures.hpp"
#include "efl/grid_field.hpp"
#include "efl/scenario.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& mode, int threads, const std::string& format,
            double ode_tol, const std::string& lattice_arg) {
  efl::ScenarioConfig cfg = efl::load_scenario_file(config_path);
  cfg.outputs.directory = out_dir;
  if (!mode.empty()) {
    if (mode == "diagnose")
      cfg.mode = efl::RunMode::diagnose;
    else if (mode == "validate")
      cfg.mode = efl::RunMode::validate;
    else
      throw efl::ConfigError("--mode must be diagnose or validate");
  }
  if (threads > 0) cfg.threads = threads;
  if (!format.empty()) cfg.outputs.format = efl::parse_table_format(format);
  if (ode_tol > 0.0) cfg.tolerances.ode_tol = ode_tol;
  if (!lattice_arg.empty()) {
    const size_t x = lattice_arg.find('x');
    int rc = 0, zc = 0;
    try {
      rc = std::stoi(lattice_arg.substr(0, x));
      zc = (x == std::string::npos) ? 1 : std::stoi(lattice_arg.substr(x + 1));
    } catch (const std::exception&) {
      throw efl::ConfigError("--seed-lattice expects RxZ, e.g. 6x2");
    }
    efl::LatticeSpec lat;
    if (cfg.lattice) lat = *cfg.lattice;
    lat.r_count = rc;
    lat.z_count = zc;
    if (!cfg.lattice) lat.z_start = cfg.z_span.start;
    cfg.lattice = lat;
    cfg.seeds.clear();
  }

  const efl::RunReport report = efl::run_scenario(cfg);
  std::cout << "run complete: " << report.seeds.size() << " seeds, max |res| = "
            << efl::format_double(report.max_abs_res)
            << ", max L0 = " << efl::format_double(report.max_L0)
            << ", max Lt = " << efl::format_double(report.max_Lt) << "\n";
  for (const efl::Verdict& v : report.verdicts)
    std::cout << (v.pass ? "[pass] " : "[FAIL] ") << v.name << ": " << v.detail << "\n";
  return 0;
}

int cmd_describe(const std::string& fixture, const std::map<std::string, double>& num,
                 const std::string& grid_path) {
  auto get = [&](const char* key, double fallback) {
    auto it = num.find(key);
    return it == num.end() ? fallback : it->second;
  };
  efl::FixtureSpec spec;
  if (fixture == "straight_tube") {
    spec = efl::StraightTubeSpec{efl::Waveform(efl::Waveform::Constant{get("value", 1.0)})};
  } else if (fixture == "shear_flow") {
    spec = efl::ShearFlowSpec{efl::RadialProfile(
        efl::RadialProfile::Parabolic{get("peak", 1.0), get("radius", 1.0)})};
  } else if (fixture == "rigid_helix") {
    spec = efl::RigidHelixSpec{get("omega", 1.0), get("axial", 1.0)};
  } else if (fixture == "stagnation_swirl") {
    spec = efl::StagnationSwirlSpec{get("alpha", 1.0), get("omega0", 0.0)};
  } else if (fixture == "poiseuille") {
    spec = efl::PoiseuilleSpec{get("p_s", 1.0), get("nu", 1.0), get("ell", 1.0),
                               get("radius", 1.0)};
  } else if (fixture == "womersley") {
    spec = efl::WomersleySpec{get("p_o", 1.0), get("N", 1.0), get("nu", 1.0),
                              get("radius", 1.0)};
  } else if (fixture == "gridded") {
    if (grid_path.empty())
      throw efl::ConfigError("describe gridded needs --path <grid file>");
    spec = efl::GriddedSpec{
        std::make_shared<const efl::GridData>(efl::GridData::load_file(grid_path))};
  } else {
    throw efl::ConfigError("unknown fixture \"" + fixture + "\"; see list_fixtures");
  }
  std::cout << efl::describe_fixture(spec);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian frame diagnostics for axisymmetric tube flows"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "execute a scenario config");
  std::string config_path, out_dir, mode, format, lattice_arg;
  int threads = 0;
  double ode_tol = 0.0;
  run->add_option("--config", config_path, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "output directory")->required();
  run->add_option("--mode", mode, "diagnose or validate");
  run->add_option("--threads", threads, "worker threads (default: available cores)");
  run->add_option("--format", format, "csv or jsonl");
  run->add_option("--ode-tol", ode_tol, "override tolerances.ode_tol");
  run->add_option("--seed-lattice", lattice_arg, "RxZ lattice replacing config seeds");

  // list_fixtures
  auto* list = app.add_subcommand("list_fixtures", "list built-in velocity fields");

  // describe
  auto* desc = app.add_subcommand("describe", "print a fixture's formulas and parameters");
  std::string fixture, grid_path;
  std::map<std::string, double> overrides;
  desc->add_option("fixture", fixture, "fixture name")->required();
  desc->add_option("--path", grid_path, "grid file for the gridded fixture");
  for (const char* key : {"value", "peak", "radius", "omega", "axial", "alpha", "omega0",
                          "p_s", "p_o", "N", "nu", "ell"}) {
    desc->add_option_function<double>(
        std::string("--") + key,
        [&overrides, key](double v) { overrides[key] = v; },
        std::string("parameter ") + key);
  }

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      if (threads <= 0 && run->count("--threads") == 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
      return cmd_run(config_path, out_dir, mode, threads, format, ode_tol, lattice_arg);
    }
    if (list->parsed()) {
      for (const efl::FixtureInfo& info : efl::fixture_registry())
        std::cout << info.name << "\n";
      return 0;
    }
    if (desc->parsed()) return cmd_describe(fixture, overrides, grid_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const efl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.family());
  }
  return 0;
}
