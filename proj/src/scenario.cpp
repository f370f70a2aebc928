#include "efl/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "efl/axis_curve.hpp"
#include "efl/errors.hpp"
#include "efl/frenet.hpp"
#include "efl/grid_field.hpp"
#include "efl/log.hpp"
#include "efl/quadrature.hpp"
#include "efl/streamtube.hpp"

namespace efl {
namespace {

using njson = nlohmann::json;

// ============================================================================
// Strict JSON helpers
// ============================================================================

const njson& as_object(const njson& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  return j;
}

void expect_keys(const njson& obj, const std::string& ctx,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
  }
}

double get_num(const njson& obj, const std::string& ctx, const char* key) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing \"" + key + "\"");
  const njson& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(ctx + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

double get_num_or(const njson& obj, const std::string& ctx, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const njson& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(ctx + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

std::string get_str(const njson& obj, const std::string& ctx, const char* key) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing \"" + key + "\"");
  const njson& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(ctx + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

Span get_span(const njson& obj, const std::string& ctx, const char* key) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing \"" + key + "\"");
  const njson& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(ctx + ": \"" + key + "\" must be [start, end]");
  return Span{v[0].get<double>(), v[1].get<double>()};
}

// ============================================================================
// Component parsers
// ============================================================================

Waveform parse_waveform(const njson& j, const std::string& ctx) {
  const njson& o = as_object(j, ctx);
  const std::string kind = get_str(o, ctx, "kind");
  if (kind == "const" || kind == "constant") {
    expect_keys(o, ctx, {"kind", "value"});
    return Waveform(Waveform::Constant{get_num(o, ctx, "value")});
  }
  if (kind == "ramp") {
    expect_keys(o, ctx, {"kind", "start", "rate"});
    return Waveform(Waveform::Ramp{get_num_or(o, ctx, "start", 0.0), get_num(o, ctx, "rate")});
  }
  if (kind == "sinusoid") {
    expect_keys(o, ctx, {"kind", "mean", "amplitude", "N", "phase"});
    return Waveform(Waveform::Sinusoid{get_num_or(o, ctx, "mean", 0.0),
                                       get_num_or(o, ctx, "amplitude", 1.0),
                                       get_num_or(o, ctx, "N", 1.0),
                                       get_num_or(o, ctx, "phase", 0.0)});
  }
  if (kind == "spike_train" || kind == "spike-train") {
    expect_keys(o, ctx, {"kind", "base", "amplitude", "width", "times"});
    Waveform::SpikeTrain s;
    s.base = get_num_or(o, ctx, "base", 0.0);
    s.amplitude = get_num_or(o, ctx, "amplitude", 1.0);
    s.width = get_num_or(o, ctx, "width", 1.0);
    if (!o.contains("times") || !o.at("times").is_array())
      throw ConfigError(ctx + ": spike train needs a \"times\" array");
    for (const njson& t : o.at("times")) {
      if (!t.is_number()) throw ConfigError(ctx + ": spike times must be numbers");
      s.times.push_back(t.get<double>());
    }
    return Waveform(s);  // ctor enforces strictly increasing times
  }
  throw ConfigError(ctx + ": unknown waveform kind \"" + kind + "\"");
}

RadialProfile parse_profile(const njson& j, const std::string& ctx) {
  const njson& o = as_object(j, ctx);
  const std::string kind = get_str(o, ctx, "kind");
  if (kind == "plug") {
    expect_keys(o, ctx, {"kind", "value"});
    return RadialProfile(RadialProfile::Plug{get_num(o, ctx, "value")});
  }
  if (kind == "parabolic") {
    expect_keys(o, ctx, {"kind", "peak", "radius"});
    return RadialProfile(
        RadialProfile::Parabolic{get_num(o, ctx, "peak"), get_num(o, ctx, "radius")});
  }
  if (kind == "poly") {
    expect_keys(o, ctx, {"kind", "coeffs"});
    if (!o.contains("coeffs") || !o.at("coeffs").is_array())
      throw ConfigError(ctx + ": poly profile needs a \"coeffs\" array");
    RadialProfile::Poly p;
    for (const njson& c : o.at("coeffs")) {
      if (!c.is_number()) throw ConfigError(ctx + ": poly coefficients must be numbers");
      p.coeffs.push_back(c.get<double>());
    }
    return RadialProfile(p);
  }
  throw ConfigError(ctx + ": unknown profile kind \"" + kind + "\"");
}

FixtureSpec parse_fixture(const njson& j, std::string& name_out) {
  const std::string ctx = "field";
  const njson& o = as_object(j, ctx);
  const std::string kind = get_str(o, ctx, "kind");
  name_out = kind;
  if (kind == "straight_tube") {
    expect_keys(o, ctx, {"kind", "g"});
    StraightTubeSpec s;
    s.g = o.contains("g") ? parse_waveform(o.at("g"), "field.g") : Waveform(Waveform::Constant{1.0});
    return s;
  }
  if (kind == "shear_flow") {
    expect_keys(o, ctx, {"kind", "f"});
    if (!o.contains("f")) throw ConfigError("field: shear_flow needs a profile \"f\"");
    return ShearFlowSpec{parse_profile(o.at("f"), "field.f")};
  }
  if (kind == "rigid_helix") {
    expect_keys(o, ctx, {"kind", "omega", "axial"});
    return RigidHelixSpec{get_num_or(o, ctx, "omega", 1.0), get_num_or(o, ctx, "axial", 1.0)};
  }
  if (kind == "stagnation_swirl") {
    expect_keys(o, ctx, {"kind", "alpha", "omega0"});
    return StagnationSwirlSpec{get_num_or(o, ctx, "alpha", 1.0), get_num_or(o, ctx, "omega0", 0.0)};
  }
  if (kind == "poiseuille") {
    expect_keys(o, ctx, {"kind", "p_s", "nu", "ell", "radius"});
    return PoiseuilleSpec{get_num_or(o, ctx, "p_s", 1.0), get_num_or(o, ctx, "nu", 1.0),
                          get_num_or(o, ctx, "ell", 1.0), get_num_or(o, ctx, "radius", 1.0)};
  }
  if (kind == "womersley") {
    expect_keys(o, ctx, {"kind", "p_o", "N", "nu", "radius"});
    return WomersleySpec{get_num_or(o, ctx, "p_o", 1.0), get_num_or(o, ctx, "N", 1.0),
                         get_num_or(o, ctx, "nu", 1.0), get_num_or(o, ctx, "radius", 1.0)};
  }
  if (kind == "gridded") {
    expect_keys(o, ctx, {"kind", "path"});
    const std::string path = get_str(o, ctx, "path");
    return GriddedSpec{std::make_shared<const GridData>(GridData::load_file(path))};
  }
  throw ConfigError("field: unknown fixture kind \"" + kind + "\"");
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    x[static_cast<size_t>(i)] = (n == 1) ? a : a + (b - a) * i / (n - 1);
  return x;
}

}  // namespace

// ============================================================================
// Config parsing
// ============================================================================

void ScenarioConfig::validate() const {
  if (!(t_span.end > t_span.start)) throw ConfigError("t_span must satisfy end > start");
  if (!(z_span.end > z_span.start)) throw ConfigError("z_span must satisfy end > start");
  if (!(tolerances.ode_tol > 0.0)) throw ConfigError("tolerances.ode_tol must be positive");
  if (!(tolerances.quad_tol > 0.0)) throw ConfigError("tolerances.quad_tol must be positive");
  if (!(tolerances.fd_step > 0.0)) throw ConfigError("tolerances.fd_step must be positive");
  thresholds.validate();
  if (seeds.empty() && !lattice) throw ConfigError("provide \"seeds\" or a \"lattice\"");
  if (lattice) {
    if (lattice->r_count < 1) throw ConfigError("lattice.r_count must be >= 1");
    if (lattice->z_count < 1) throw ConfigError("lattice z station count must be >= 1");
  }
  for (const SeedSpec& s : seeds)
    if (!(s.r0 >= 0.0)) throw ConfigError("seed r0 must be >= 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (outputs.directory.empty()) throw ConfigError("outputs.directory is required");
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  njson root;
  try {
    root = njson::parse(json_text);
  } catch (const njson::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  const std::string ctx = "scenario";
  as_object(root, ctx);
  expect_keys(root, ctx,
              {"field", "seeds", "lattice", "t_span", "z_span", "thresholds", "tolerances",
               "inflow", "outputs", "mode", "threads"});

  ScenarioConfig cfg;
  cfg.raw_text = json_text;
  if (!root.contains("field")) throw ConfigError("scenario: missing \"field\"");
  cfg.field = parse_fixture(root.at("field"), cfg.field_name);

  if (root.contains("seeds")) {
    const njson& arr = root.at("seeds");
    if (!arr.is_array()) throw ConfigError("seeds must be an array of [r0, theta0, z0]");
    for (const njson& s : arr) {
      if (!s.is_array() || s.size() != 3)
        throw ConfigError("each seed must be a 3-element array [r0, theta0, z0]");
      cfg.seeds.push_back(
          SeedSpec{s[0].get<double>(), s[1].get<double>(), s[2].get<double>()});
    }
  }
  if (root.contains("lattice")) {
    const njson& o = as_object(root.at("lattice"), "lattice");
    expect_keys(o, "lattice", {"r_count", "z_start", "theta0"});
    LatticeSpec lat;
    lat.r_count = static_cast<int>(get_num(o, "lattice", "r_count"));
    lat.z_start = get_num(o, "lattice", "z_start");
    lat.theta0 = get_num_or(o, "lattice", "theta0", 0.0);
    cfg.lattice = lat;
  }

  cfg.t_span = get_span(root, ctx, "t_span");
  cfg.z_span = get_span(root, ctx, "z_span");

  if (root.contains("thresholds")) {
    const njson& o = as_object(root.at("thresholds"), "thresholds");
    expect_keys(o, "thresholds",
                {"beta", "eps1", "eps2", "delta", "gamma", "residual_tol", "fd_step"});
    ThresholdConfig& th = cfg.thresholds;
    th.beta = get_num_or(o, "thresholds", "beta", th.beta);
    th.eps1 = get_num_or(o, "thresholds", "eps1", th.eps1);
    th.eps2 = get_num_or(o, "thresholds", "eps2", th.eps2);
    th.delta = get_num_or(o, "thresholds", "delta", th.delta);
    th.gamma = get_num_or(o, "thresholds", "gamma", th.gamma);
    th.residual_tol = get_num_or(o, "thresholds", "residual_tol", th.residual_tol);
    th.fd_step = get_num_or(o, "thresholds", "fd_step", th.fd_step);
  }
  if (root.contains("tolerances")) {
    const njson& o = as_object(root.at("tolerances"), "tolerances");
    expect_keys(o, "tolerances", {"ode_tol", "quad_tol", "fd_step"});
    cfg.tolerances.ode_tol = get_num_or(o, "tolerances", "ode_tol", cfg.tolerances.ode_tol);
    cfg.tolerances.quad_tol = get_num_or(o, "tolerances", "quad_tol", cfg.tolerances.quad_tol);
    cfg.tolerances.fd_step = get_num_or(o, "tolerances", "fd_step", cfg.tolerances.fd_step);
  }
  if (root.contains("inflow")) {
    const njson& o = as_object(root.at("inflow"), "inflow");
    expect_keys(o, "inflow", {"U_s", "U_o", "g"});
    InflowFamily fam;
    if (o.contains("U_s")) fam.U_s = parse_profile(o.at("U_s"), "inflow.U_s");
    if (o.contains("U_o")) fam.U_o = parse_profile(o.at("U_o"), "inflow.U_o");
    if (o.contains("g")) fam.g = parse_waveform(o.at("g"), "inflow.g");
    cfg.inflow = fam;
  }
  if (root.contains("outputs")) {
    const njson& o = as_object(root.at("outputs"), "outputs");
    expect_keys(o, "outputs", {"directory", "format"});
    if (o.contains("directory")) cfg.outputs.directory = get_str(o, "outputs", "directory");
    if (o.contains("format"))
      cfg.outputs.format = parse_table_format(get_str(o, "outputs", "format"));
  }
  if (root.contains("mode")) {
    const std::string m = get_str(root, ctx, "mode");
    if (m == "diagnose")
      cfg.mode = RunMode::diagnose;
    else if (m == "validate")
      cfg.mode = RunMode::validate;
    else
      throw ConfigError("mode must be \"diagnose\" or \"validate\", got \"" + m + "\"");
  }
  if (root.contains("threads")) cfg.threads = static_cast<int>(get_num(root, ctx, "threads"));
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string version_string() { return "0.1.0"; }

std::string config_hash(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;  // FNV offset basis
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;  // FNV prime
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  return "fnv1a64:" + std::string(buf, 16);
}

// ============================================================================
// Pipeline
// ============================================================================

namespace {

constexpr int kTimeSamples = 25;
constexpr int kFrenetStations = 25;
constexpr int kTubeZStations = 9;
constexpr int kIndicatorStations = 5;

struct Maxima {
  double abs_res = 0.0, L0 = 0.0, Lx = 0.0, Lt = 0.0;
  double min_L0 = std::numeric_limits<double>::infinity();
  void residual(double v) {
    if (std::isfinite(v)) abs_res = std::max(abs_res, std::abs(v));
  }
  void rates(const DisturbanceRates& r) {
    L0 = std::max(L0, r.L0);
    Lx = std::max(Lx, r.Lx);
    Lt = std::max(Lt, r.Lt);
    min_L0 = std::min(min_L0, r.L0);
  }
  void absorb(const Maxima& o) {
    abs_res = std::max(abs_res, o.abs_res);
    L0 = std::max(L0, o.L0);
    Lx = std::max(Lx, o.Lx);
    Lt = std::max(Lt, o.Lt);
    min_L0 = std::min(min_L0, o.min_L0);
  }
};

/// Seeds resolved against the field domain; lattice radii cluster toward the
/// axis the same way tube seeding does.
std::vector<SeedSpec> resolve_seeds(const ScenarioConfig& cfg, const Domain& dom) {
  std::vector<SeedSpec> seeds = cfg.seeds;
  if (seeds.empty() && cfg.lattice) {
    const LatticeSpec& lat = *cfg.lattice;
    if (!dom.bounded_radius())
      throw ConfigError("lattice seeding needs a radially bounded field; list seeds explicitly");
    const double radius = 0.9 * dom.r_max;
    const std::vector<double> nodes = clustered_seed_nodes(radius, lat.r_count + 1);
    std::vector<double> stations;
    if (lat.z_count == 1) {
      stations.push_back(lat.z_start);
    } else {
      // interior stations in the upstream half of the window
      const double mid = 0.5 * (cfg.z_span.start + cfg.z_span.end);
      for (int j = 1; j <= lat.z_count; ++j)
        stations.push_back(cfg.z_span.start +
                           (mid - cfg.z_span.start) * j / (lat.z_count + 1));
    }
    for (double z0 : stations)
      for (size_t i = 1; i < nodes.size(); ++i)  // skip the axis node
        seeds.push_back(SeedSpec{nodes[i], lat.theta0, z0});
  }
  for (const SeedSpec& s : seeds) {
    if (!dom.contains(s.r0, s.z0))
      throw ConfigError("seed (r0=" + format_double(s.r0) + ", z0=" + format_double(s.z0) +
                        ") lies outside the field domain");
    if (s.z0 < cfg.z_span.start || s.z0 >= cfg.z_span.end)
      throw ConfigError("seed z0=" + format_double(s.z0) + " outside z_span");
  }
  return seeds;
}

/// Coarse unilaterality sweep over the requested window.  Lattice points
/// outside the field's domain count as failures: the monotone-z machinery is
/// meaningless either way.
void preflight_unilateral(const FlowField& f, double r_cap, Span z_span, Span t_span) {
  const Region rect{f.domain().r_min, r_cap, z_span.start, z_span.end};
  for (double t : linspace(t_span.start, t_span.end, 5)) {
    const UnilateralReport rep = unilateral_check(f, rect, t);
    if (!rep.ok) {
      if (rep.has_witness) throw NotUnilateral(rep.witness_r, rep.witness_z, t);
      throw NotUnilateral(rect.r_lo, z_span.start, t);
    }
  }
}

/// Arc length increment of an axis-parametrized curve between two stations.
double arc_length_between(const AxisCurve& curve, double z_a, double z_b, double quad_tol) {
  if (z_b <= z_a) return 0.0;
  return integrate(
      [&](double z) {
        const CurveGerm g = curve.germ(z);
        return std::sqrt(1.0 + g.R1 * g.R1 + g.R * g.Th1 * (g.R * g.Th1));
      },
      z_a, z_b, quad_tol);
}

struct OrthoDefect {
  double worst = 0.0;
  void frame(const FrenetData& F) {
    if (F.degenerate) return;
    const Vec3 tb = cross(F.tau, F.n);
    const Vec3 sb{F.sigma * tb.x, F.sigma * tb.y, F.sigma * tb.z};
    const Vec3 db{F.b.x - sb.x, F.b.y - sb.y, F.b.z - sb.z};
    worst = std::max({worst, std::abs(dot(F.tau, F.tau) - 1.0), std::abs(dot(F.n, F.n) - 1.0),
                      std::abs(dot(F.b, F.b) - 1.0), std::abs(dot(F.tau, F.n)),
                      std::abs(dot(F.tau, F.b)), std::abs(dot(F.n, F.b)), norm(db)});
  }
};

std::string outcome_word(const Trajectory& tr) {
  return tr.left_domain ? "left_domain" : "completed";
}

njson seed_json(const SeedOutcome& s) {
  njson j;
  j["r0"] = s.seed.r0;
  j["theta0"] = s.seed.theta0;
  j["z0"] = s.seed.z0;
  j["outcome"] = s.outcome;
  j["t_end"] = s.t_end;
  j["max_abs_res"] = s.max_abs_res;
  j["max_L0"] = s.max_L0;
  j["max_Lx"] = s.max_Lx;
  j["max_Lt"] = s.max_Lt;
  return j;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config) {
  const auto clock_start = std::chrono::steady_clock::now();
  config.validate();
  const FieldPtr field = make_field(config.field);
  const Domain& dom = field->domain();
  const double ode_tol = config.tolerances.ode_tol;
  const double quad_tol = config.tolerances.quad_tol;

  const std::vector<SeedSpec> seeds = resolve_seeds(config, dom);

  // tube radius: headroom over the outermost seed, capped inside the wall
  double max_seed_r = 0.0;
  for (const SeedSpec& s : seeds) max_seed_r = std::max(max_seed_r, s.r0);
  double r_cap = (max_seed_r > 0.0) ? 1.5 * max_seed_r : 0.5 * dom.radius_scale;
  if (dom.bounded_radius()) r_cap = std::min(r_cap, 0.98 * dom.r_max);
  if (!(r_cap > 0.0)) throw ConfigError("cannot size the stream tube: no radial extent");

  preflight_unilateral(*field, r_cap, config.z_span, config.t_span);

  log::info("building stream-tube map (r_cap=" + format_double(r_cap) + ")");
  const std::vector<double> t_nodes =
      field->steady() ? std::vector<double>{config.t_span.start}
                      : linspace(config.t_span.start, config.t_span.end, 5);
  const IntegratedTubeMap map = build_streamtube_map(
      field, clustered_seed_nodes(r_cap, 11), config.z_span, t_nodes, ode_tol, config.threads);

  const double R_ref = map.r0_max();
  const double U_ref =
      config.inflow ? config.inflow->mean_speed(config.t_span.start, R_ref, quad_tol) : 1.0;
  if (!(U_ref > 0.0))
    throw ConfigError("inflow mean speed at the window start is zero; cannot scale rates");

  namespace fs = std::filesystem;
  fs::create_directories(config.outputs.directory);
  const TableFormat fmt = config.outputs.format;
  const std::string ext = "." + table_extension(fmt);
  auto open_table = [&](const std::string& stem) {
    std::ofstream out(fs::path(config.outputs.directory) / (stem + ext), std::ios::binary);
    if (!out) throw ConfigError("cannot write output file \"" + stem + ext + "\"");
    return out;
  };

  std::ofstream traj_os = open_table("trajectories");
  std::ofstream frenet_os = open_table("frenet");
  std::ofstream resid_os = open_table("residuals");
  std::ofstream dist_os = open_table("disturbance");
  std::ofstream tube_os = open_table("streamtube");

  TableWriter traj_tab(traj_os, fmt, {"seed_r0", "seed_theta0", "seed_z0", "t", "r", "theta", "z"});
  TableWriter frenet_tab(frenet_os, fmt,
                         {"s", "z", "kappa", "torsion", "ds_kappa", "degenerate", "sigma"});
  TableWriter resid_tab(resid_os, fmt,
                        {"s", "z", "t", "kappa", "torsion", "ds_kappa", "speed", "Dt_speed",
                         "res_r", "res_b", "degenerate"});
  TableWriter dist_tab(dist_os, fmt, {"r0_tilde", "z", "t", "L0", "Lx", "Lt"});
  TableWriter tube_tab(tube_os, fmt, {"r0_tilde", "z", "t", "R", "dR_dr0", "dR_dz", "rho"});

  RunReport report;
  report.version = version_string();
  report.config_hash = config_hash(config.raw_text);
  report.mode = config.mode == RunMode::diagnose ? "diagnose" : "validate";
  report.field_name = config.field_name;
  report.R_ref = R_ref;
  report.U_ref = U_ref;

  Maxima global;
  OrthoDefect ortho;

  // validate-mode residual walk reuses the per-seed curves
  std::vector<AxisCurve> curves;
  curves.reserve(seeds.size());

  for (const SeedSpec& seed : seeds) {
    log::debug("seed r0=" + format_double(seed.r0) + " z0=" + format_double(seed.z0));
    Trajectory tr =
        integrate_trajectory(*field, seed.r0, seed.theta0, seed.z0, config.t_span, ode_tol);
    SeedOutcome outcome;
    outcome.seed = seed;
    outcome.outcome = outcome_word(tr);
    outcome.t_end = tr.t_end;
    const double t_lo = config.t_span.start;
    const double t_hi = tr.t_end;
    const AxisCurve curve = axis_length_reparam(std::move(tr), field);

    Maxima local;
    if (t_hi > t_lo) {
      const std::vector<double> ts = linspace(t_lo, t_hi, kTimeSamples);
      const double z_seed = curve.traj->state(t_lo).z;
      double s_accum = 0.0;
      double z_prev = z_seed;
      for (double t : ts) {
        const TrajectorySample pos = curve.traj->state(t);
        const double r = std::max(pos.r, 0.0);
        traj_tab.row({seed.r0, seed.theta0, seed.z0, t, r, pos.theta, pos.z});

        s_accum += arc_length_between(curve, z_prev, pos.z, quad_tol);
        z_prev = pos.z;

        // moving-frame residual record
        try {
          const FrenetData frame = frame_explicit(curve, pos.z);
          const double speed = norm(field->eval(r, pos.z, t));
          const ResidualRecord rec =
              frame_residuals(*field, cyl_point_to_cart(r, pos.theta, pos.z), t, frame, speed,
                              config.tolerances.fd_step, U_ref);
          resid_tab.row({s_accum, pos.z, t, rec.kappa, rec.torsion, rec.ds_kappa, rec.speed,
                         rec.Dt_speed, rec.res_r, rec.res_b, frame.degenerate ? 1.0 : 0.0});
          local.residual(rec.res_r);
          local.residual(rec.res_b);
        } catch (const Error& e) {
          log::debug(std::string("residual sample skipped: ") + e.what());
        }

        // disturbance rates via the tube inversion
        try {
          const double r0t = invert_streamtube(map, r, pos.z, t);
          const DisturbanceRates rates = disturbance_rates(map, r0t, pos.z, t, R_ref, U_ref);
          dist_tab.row({r0t, pos.z, t, rates.L0, rates.Lx, rates.Lt});
          local.rates(rates);
        } catch (const Error& e) {
          log::debug(std::string("disturbance sample skipped: ") + e.what());
        }
      }

      // frame geometry along the curve
      const double z_hi = curve.traj->state(t_hi).z;
      const std::vector<double> zs = linspace(z_seed, z_hi, kFrenetStations);
      double fs_accum = 0.0;
      double fz_prev = z_seed;
      for (double z : zs) {
        fs_accum += arc_length_between(curve, fz_prev, z, quad_tol);
        fz_prev = z;
        const FrenetData F = frame_explicit(curve, z);
        ortho.frame(F);
        frenet_tab.row({fs_accum, z, F.kappa, F.torsion, F.ds_kappa, F.degenerate ? 1.0 : 0.0,
                        static_cast<double>(F.sigma)});
      }
    }

    outcome.max_abs_res = local.abs_res;
    outcome.max_L0 = local.L0;
    outcome.max_Lx = local.Lx;
    outcome.max_Lt = local.Lt;
    global.absorb(local);
    report.seeds.push_back(outcome);
    curves.push_back(curve);
  }

  // stream-tube geometry at the map's own nodes
  {
    const std::vector<double> zs =
        linspace(config.z_span.start, config.z_span.end, kTubeZStations);
    for (double tn : map.t_nodes())
      for (double z : zs)
        for (double r0 : map.r0_nodes()) {
          const TubeJet J = map.jet(r0, z, tn);
          tube_tab.row({r0, z, tn, J.R, J.R_r0, J.R_z, inflow_propagation(map, r0, z, tn)});
        }
  }

  // near-axis indicators when the axis is inside the tube
  {
    std::ofstream ind_os(fs::path(config.outputs.directory) / "indicators.jsonl",
                         std::ios::binary);
    const std::vector<double> zs =
        linspace(config.z_span.start, config.z_span.end, kIndicatorStations);
    const double t0 = config.t_span.start;
    for (double z : zs) {
      njson line;
      line["z"] = z;
      line["t"] = t0;
      try {
        const BreakdownIndicator b =
            near_axis_breakdown_indicator(field, z, t0, 1e-3 * dom.radius_scale, ode_tol, U_ref);
        line["theta_prime_axis"] = b.theta_prime_axis;
        line["curvature_ratio"] = b.curvature_ratio;
        line["d2_Dt_speed"] = b.d2_Dt_speed;
        line["match_ratio"] = b.match_ratio;
      } catch (const Error& e) {
        line["breakdown_error"] = std::string(e.what());
      }
      try {
        const BlowupIndicator bl = blowup_indicator(field, z, t0, 0.0, ode_tol, U_ref);
        line["theta_ppp_axis_proxy"] = bl.theta_ppp_axis_proxy;
        line["swirl_mix_d_zr"] = bl.swirl_mix_d_zr;
        line["swirl_mix_d_zrr"] = bl.swirl_mix_d_zrr;
        line["dominance"] = bl.dominance;
      } catch (const Error& e) {
        line["blowup_error"] = std::string(e.what());
      }
      ind_os << line.dump() << "\n";
    }
  }

  report.max_abs_res = global.abs_res;
  report.max_L0 = global.L0;
  report.max_Lx = global.Lx;
  report.max_Lt = global.Lt;

  // ==========================================================================
  // validate-mode verdicts
  // ==========================================================================
  if (config.mode == RunMode::validate) {
    const double t0 = config.t_span.start;
    const std::vector<double> z_probes =
        linspace(config.z_span.start + 0.1 * config.z_span.length(),
                 config.z_span.start + 0.9 * config.z_span.length(), 5);

    {  // axis parity: no swirl or radial flow on the axis itself
      Verdict v{"axis_parity", true, ""};
      if (dom.r_min == 0.0) {
        double worst = 0.0;
        for (double z : z_probes) {
          const CylVec u = field->eval(0.0, z, t0);
          worst = std::max({worst, std::abs(u.r), std::abs(u.th)});
        }
        v.pass = worst <= 1e-10;
        v.detail = "max |v_r|,|v_theta| on axis = " + format_double(worst);
      } else {
        v.detail = "skipped: domain excludes the axis";
      }
      report.verdicts.push_back(v);
    }

    {  // jet consistency: published derivatives against differenced evals
      Verdict v{"jet_consistency", true, ""};
      double worst = 0.0;
      const double hr = 1e-5 * dom.radius_scale;
      const size_t n_probe = std::min<size_t>(seeds.size(), 3);
      for (size_t i = 0; i < n_probe; ++i) {
        const double r = std::max(seeds[i].r0, 0.2 * dom.radius_scale);
        for (double z : z_probes) {
          if (!dom.contains(r + hr, z) || !dom.contains(r - hr, z)) continue;
          const FieldJet J = field->jet(r, z, t0, 2);
          const auto check3 = [&](const CylVec& fd_p, const CylVec& fd_m, const CylVec& jet) {
            const double den = 2.0 * hr;
            worst = std::max({worst, std::abs((fd_p.r - fd_m.r) / den - jet.r),
                              std::abs((fd_p.th - fd_m.th) / den - jet.th),
                              std::abs((fd_p.z - fd_m.z) / den - jet.z)});
          };
          check3(field->eval(r + hr, z, t0), field->eval(r - hr, z, t0), J.d_r);
          if (dom.contains(r, z + hr) && dom.contains(r, z - hr))
            check3(field->eval(r, z + hr, t0), field->eval(r, z - hr, t0), J.d_z);
          try {  // grids bound t as well; skip the probe at a time edge
            check3(field->eval(r, z, t0 + hr), field->eval(r, z, t0 - hr), J.d_t);
          } catch (const Error&) {
          }
        }
      }
      v.pass = worst <= 1e-5;
      v.detail = "max |fd - jet| = " + format_double(worst);
      report.verdicts.push_back(v);
    }

    {  // moving-frame identities on a steady field's own trajectories
      Verdict v{"euler_identity_residuals", true, ""};
      // Class flag first; a grid whose slices are time-constant also counts.
      bool steady_like = field->steady();
      if (!steady_like && !seeds.empty()) {
        double dt_max = 0.0, u_scale = 1.0;
        for (double t : linspace(config.t_span.start, config.t_span.end, 3))
          for (double z : z_probes) {
            if (!dom.contains(seeds[0].r0, z)) continue;
            const FieldJet J = field->jet(seeds[0].r0, z, t, 2);
            dt_max = std::max(dt_max, norm(J.d_t));
            u_scale = std::max(u_scale, norm(J.u));
          }
        steady_like = dt_max <= 1e-10 * u_scale;
      }
      if (!steady_like) {
        v.detail = "skipped: unsteady field (identities hold pointwise for steady fields)";
      } else if (curves.empty()) {
        v.detail = "skipped: no trajectories";
      } else {
        // outermost seed sees the strongest shear
        size_t pick = 0;
        for (size_t i = 1; i < seeds.size(); ++i)
          if (seeds[i].r0 > seeds[pick].r0) pick = i;
        const AxisCurve& curve = curves[pick];
        const double t_hi = report.seeds[pick].t_end;
        double worst = 0.0;
        int used = 0;
        const FrenetData flat = [] {
          FrenetData F;
          F.tau = {0.0, 0.0, 1.0};
          F.n = {1.0, 0.0, 0.0};
          F.b = {0.0, 1.0, 0.0};
          F.kappa = F.torsion = F.ds_kappa = 0.0;
          F.degenerate = false;
          return F;
        }();
        for (int i = 1; i + 1 < 13; ++i) {
          const double t = t0 + (t_hi - t0) * i / 12.0;
          const TrajectorySample pos = curve.traj->state(t);
          const double r = std::max(pos.r, 0.0);
          try {
            const FrenetData natural = frame_explicit(curve, pos.z);
            const Vec3 x = cyl_point_to_cart(r, pos.theta, pos.z);
            const double speed = norm(field->eval(r, pos.z, t));
            const FrenetData& frame = natural.degenerate ? flat : natural;
            const ResidualRecord rec = frame_residuals(
                *field, x, t, frame, speed, config.tolerances.fd_step, U_ref);
            const double u2 = speed * speed;
            const double scale = std::max(
                {1.0, rec.kappa * u2, std::abs(rec.ds_kappa) * u2});
            worst = std::max({worst, std::abs(rec.res_r) / scale, std::abs(rec.res_b) / scale});
            ++used;
          } catch (const Error& e) {
            log::debug(std::string("verdict sample skipped: ") + e.what());
          }
        }
        if (used == 0) {
          v.detail = "skipped: no usable residual points";
        } else {
          v.pass = worst <= config.thresholds.residual_tol;
          v.detail = "max |res|/scale = " + format_double(worst) + " over " +
                     std::to_string(used) + " points";
        }
      }
      report.verdicts.push_back(v);
    }

    {  // universal lower bound of the spatial disturbance rate
      Verdict v{"disturbance_floor", true, ""};
      if (std::isfinite(global.min_L0)) {
        v.pass = global.min_L0 >= 2.0 - 1e-9;
        v.detail = "min L0 = " + format_double(global.min_L0);
        if (config.field_name == "straight_tube") {
          v.pass = v.pass && global.Lt <= 1e-9;
          v.detail += ", max Lt = " + format_double(global.Lt);
        }
      } else {
        v.detail = "skipped: no disturbance samples";
      }
      report.verdicts.push_back(v);
    }

    {  // frame orthonormality from the emitted frenet stations
      Verdict v{"frame_orthonormality", true, ""};
      v.pass = ortho.worst <= 1e-4;
      v.detail = "max defect = " + format_double(ortho.worst);
      report.verdicts.push_back(v);
    }
  }

  const auto clock_end = std::chrono::steady_clock::now();
  report.wall_time_seconds =
      std::chrono::duration<double>(clock_end - clock_start).count();

  // report.json: the only file carrying wall time
  {
    njson j;
    j["version"] = report.version;
    j["config_hash"] = report.config_hash;
    j["mode"] = report.mode;
    j["field"] = report.field_name;
    j["l_scales"] = njson{{"R_ref", report.R_ref}, {"U_ref", report.U_ref}};
    j["global"] = njson{{"max_abs_res", report.max_abs_res},
                        {"max_L0", report.max_L0},
                        {"max_Lx", report.max_Lx},
                        {"max_Lt", report.max_Lt}};
    njson seeds_j = njson::array();
    for (const SeedOutcome& s : report.seeds) seeds_j.push_back(seed_json(s));
    j["seeds"] = seeds_j;
    njson verdicts_j = njson::array();
    for (const Verdict& v : report.verdicts)
      verdicts_j.push_back(njson{{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    j["verdicts"] = verdicts_j;
    j["wall_time_seconds"] = report.wall_time_seconds;
    std::ofstream out(fs::path(config.outputs.directory) / "report.json", std::ios::binary);
    if (!out) throw ConfigError("cannot write report.json");
    out << j.dump(2) << "\n";
  }

  for (const Verdict& v : report.verdicts)
    if (!v.pass)
      throw ValidationFailure("verdict \"" + v.name + "\" failed: " + v.detail);
  return report;
}

}  // namespace efl
