#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "control/control.hpp"
#include "core/core.hpp"
#include "core/rng.hpp"
#include "io/io.hpp"
#include "reduction/reduction.hpp"
#include "testbed/testbed.hpp"
#include "transfer/transfer.hpp"

namespace fs = std::filesystem;

namespace mordae {

namespace {

RunConfig load_config(const CliOptions& opt, bool required) {
  RunConfig cfg;
  if (!opt.config_path.empty())
    cfg = parse_config_file(opt.config_path);
  else if (required)
    throw Error(ErrC::bad_argument, "this subcommand requires --config");
  if (!opt.mode.empty()) cfg.mode = parse_mode(opt.mode);
  if (opt.has_seed) {
    if (opt.seed < 0) throw Error(ErrC::bad_argument, "--seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(opt.seed);
  }
  return cfg;
}

std::string resolve_out(const CliOptions& opt, const RunConfig& cfg) {
  const std::string out = opt.out_dir.empty() ? cfg.out : opt.out_dir;
  if (out.empty()) throw Error(ErrC::bad_argument, "an output directory is required (--out)");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrC::io_error, "cannot create directory: " + out);
  return out;
}

void require_dir(const std::string& value, const char* flag) {
  if (value.empty())
    throw Error(ErrC::bad_argument, std::string("this subcommand requires ") + flag);
}

std::string join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

void write_echo(const std::string& out, const json& echo) {
  write_json_file(join(out, "config_echo.json"), echo);
}

int int_field(const json& g, const char* key) {
  if (!g.contains(key) || !g[key].is_number_integer())
    throw Error(ErrC::parse_error, std::string("generator.") + key + " must be an integer");
  return g[key].get<int>();
}

double dbl_field(const json& g, const char* key) {
  if (!g.contains(key) || !g[key].is_number())
    throw Error(ErrC::parse_error, std::string("generator.") + key + " must be a number");
  return g[key].get<double>();
}

void set_default(json& g, const char* key, const json& v) {
  if (!g.contains(key)) g[key] = v;
}

// Materializes defaults so the echoed generator section is fully explicit.
json resolve_generator(const json& generator) {
  if (generator.is_null() || !generator.is_object() || !generator.contains("kind") ||
      !generator["kind"].is_string())
    throw Error(ErrC::bad_argument, "config needs a generator section with a \"kind\"");
  json g = generator;
  const std::string kind = g["kind"].get<std::string>();
  if (kind == "oseen") {
    set_default(g, "nx", 24);
    set_default(g, "ny", 12);
    set_default(g, "lx", 6.0);
    set_default(g, "ly", 3.0);
    set_default(g, "reynolds", 10.0);
    set_default(g, "base_flow", "parabolic");
    set_default(g, "speed", 1.0);
    set_default(g, "patches", json::array());
  } else if (kind == "planted") {
    set_default(g, "n1", 120);
    set_default(g, "n2", 30);
    set_default(g, "poles", json::array());
  } else {
    throw Error(ErrC::bad_argument, "unknown generator kind '" + kind + "' (oseen | planted)");
  }
  return g;
}

GridGeometry grid_from_json(const json& g) {
  std::optional<std::array<int, 4>> obstacle;
  if (g.contains("obstacle") && !g["obstacle"].is_null()) {
    const json& o = g["obstacle"];
    if (!o.is_array() || o.size() != 4)
      throw Error(ErrC::parse_error, "generator.obstacle must be [i0, i1, j0, j1]");
    std::array<int, 4> cells{};
    for (int q = 0; q < 4; ++q) {
      if (!o[q].is_number_integer())
        throw Error(ErrC::parse_error, "generator.obstacle entries must be integers");
      cells[static_cast<std::size_t>(q)] = o[q].get<int>();
    }
    obstacle = cells;
  }
  return build_grid(int_field(g, "nx"), int_field(g, "ny"), dbl_field(g, "lx"),
                    dbl_field(g, "ly"), obstacle);
}

std::vector<Rect> patches_from_json(const json& g) {
  std::vector<Rect> patches;
  if (!g.contains("patches")) return patches;
  const json& ps = g["patches"];
  if (!ps.is_array()) throw Error(ErrC::parse_error, "generator.patches must be an array");
  for (const json& r : ps) {
    if (!r.is_array() || r.size() != 4 || !r[0].is_number() || !r[1].is_number() ||
        !r[2].is_number() || !r[3].is_number())
      throw Error(ErrC::parse_error, "each patch must be [x0, x1, y0, y1]");
    patches.push_back(
        Rect{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()});
  }
  return patches;
}

Index2System system_from_generator(const json& g, std::uint64_t seed, GridGeometry* geom_out) {
  const std::string kind = g["kind"].get<std::string>();
  if (kind == "oseen") {
    GridGeometry geom = grid_from_json(g);
    BaseFlow flow;
    const std::string bf = g["base_flow"].is_string() ? g["base_flow"].get<std::string>() : "";
    if (bf == "uniform")
      flow.kind = BaseFlow::Kind::uniform;
    else if (bf == "parabolic")
      flow.kind = BaseFlow::Kind::parabolic;
    else
      throw Error(ErrC::parse_error, "generator.base_flow must be \"uniform\" or \"parabolic\"");
    flow.speed = dbl_field(g, "speed");
    Index2System sys = generate_oseen(geom, dbl_field(g, "reynolds"), flow);
    const std::vector<Rect> patches = patches_from_json(g);
    if (!patches.empty()) {
      const Mat C = generate_output_patches(geom, patches);
      sys.C1 = C;
      sys.C2 = Mat::Zero(C.rows(), sys.n2());
      sys.D = Mat::Zero(C.rows(), sys.m());
    }
    if (geom_out != nullptr) *geom_out = geom;
    return sys;
  }
  const std::vector<Cplx> poles = parse_complex_list(g.value("poles", json::array()), "poles");
  return generate_planted(int_field(g, "n1"), int_field(g, "n2"), poles, seed);
}

}  // namespace

void cli_generate(const CliOptions& opt) {
  RunConfig cfg = load_config(opt, true);
  const std::string out = resolve_out(opt, cfg);
  cfg.generator = resolve_generator(cfg.generator);
  Index2System sys = system_from_generator(cfg.generator, cfg.seed, nullptr);
  json prov;
  prov["generator"] = cfg.generator;
  prov["seed"] = cfg.seed;
  write_system_bundle(out, sys, prov);
  write_json_file(join(out, "validation.json"), validation_report_json(validate_index2(sys)));
  write_echo(out, echo_config(cfg, nullptr, {}));
}

void cli_reduce(const CliOptions& opt) {
  RunConfig cfg = load_config(opt, true);
  require_dir(opt.bundle_dir, "--bundle");
  const std::string out = resolve_out(opt, cfg);
  const Index2System sys = read_system_bundle(opt.bundle_dir);
  std::vector<Cplx> added;
  const InterpolationData data = resolve_interpolation(cfg, sys.m(), sys.p(), &added);
  const ReducedModel rom = reduce_index2(sys, data, cfg.mode, cfg.svd_threshold);
  const InterpolationReport rep = verify_interpolation(sys, rom, data);
  json prov;
  prov["kind"] = "reduce";
  prov["mode"] = mode_name(cfg.mode);
  prov["svd_threshold"] = cfg.svd_threshold;
  prov["seed"] = cfg.seed;
  write_rom_bundle(out, rom, data, prov);
  write_json_file(join(out, "interpolation_report.json"), interpolation_report_json(rep));
  write_echo(out, echo_config(cfg, &data, added));
}

void cli_sigma(const CliOptions& opt) {
  RunConfig cfg = load_config(opt, true);
  require_dir(opt.bundle_dir, "--bundle");
  const std::string out = resolve_out(opt, cfg);
  const json manifest = read_manifest(opt.bundle_dir);
  FrequencyResponse fr;
  Eigen::Index p = 0, m = 0;
  if (manifest["kind"] == "index2") {
    const Index2System sys = read_system_bundle(opt.bundle_dir);
    fr = sigma_sweep(sys, cfg.omega_min, cfg.omega_max, cfg.sweep_count, cfg.sweep_log);
    p = sys.p();
    m = sys.m();
  } else if (manifest["kind"] == "rom") {
    const ReducedModel rom = read_rom_bundle(opt.bundle_dir);
    fr = sigma_sweep(rom, cfg.omega_min, cfg.omega_max, cfg.sweep_count, cfg.sweep_log);
    p = rom.p();
    m = rom.m();
  } else {
    throw Error(ErrC::parse_error, "--bundle must point at a system or reduced-model bundle");
  }
  write_sigma_csv(join(out, "sigma.csv"), fr, p, m);
  write_echo(out, echo_config(cfg, nullptr, {}));
}

void cli_poles(const CliOptions& opt) {
  RunConfig cfg = load_config(opt, false);
  require_dir(opt.bundle_dir, "--bundle");
  const std::string out = resolve_out(opt, cfg);
  const json manifest = read_manifest(opt.bundle_dir);
  PoleReport rep;
  if (manifest["kind"] == "index2")
    rep = finite_poles(read_system_bundle(opt.bundle_dir));
  else if (manifest["kind"] == "rom")
    rep = finite_poles(read_rom_bundle(opt.bundle_dir));
  else
    throw Error(ErrC::parse_error, "--bundle must point at a system or reduced-model bundle");
  write_json_file(join(out, "poles.json"), pole_report_json(rep));
  write_echo(out, echo_config(cfg, nullptr, {}));
}

void cli_lqr(const CliOptions& opt) {
  RunConfig cfg = load_config(opt, true);
  require_dir(opt.rom_dir, "--rom");
  const std::string out = resolve_out(opt, cfg);
  const ReducedModel rom = read_rom_bundle(opt.rom_dir);
  const Mat R = cfg.weight.size() != 0
                    ? cfg.weight
                    : Mat(cfg.weight_scalar * Mat::Identity(rom.m(), rom.m()));
  const LqrResult res = solve_lqr(LqrProblem{rom, R});
  json prov;
  prov["kind"] = "lqr";
  if (cfg.weight.size() != 0)
    prov["weight"] = "matrix";
  else
    prov["weight"] = cfg.weight_scalar;
  prov["rom_order"] = rom.order();
  write_lqr_bundle(out, res, prov);
  if (!opt.bundle_dir.empty()) {
    const json smani = read_manifest(opt.bundle_dir);
    if (smani["kind"] != "index2" || !smani.contains("provenance") ||
        !smani["provenance"].contains("generator") ||
        smani["provenance"]["generator"].value("kind", "") != "oseen")
      throw Error(ErrC::bad_argument,
                  "gain fields require a grid-generated system bundle (--bundle)");
    const GridGeometry geom = grid_from_json(smani["provenance"]["generator"]);
    write_gains_csv(join(out, "gains.csv"), functional_gains(res.K_full, geom));
  }
  write_echo(out, echo_config(cfg, nullptr, {}));
}

void cli_simulate(const CliOptions& opt) {
  RunConfig cfg = load_config(opt, true);
  require_dir(opt.bundle_dir, "--bundle");
  const std::string out = resolve_out(opt, cfg);
  const Index2System sys = read_system_bundle(opt.bundle_dir);
  Mat K;
  if (!opt.gain_dir.empty()) {
    K = read_lqr_bundle(opt.gain_dir).K_full;
    if (K.cols() != sys.n1())
      throw Error(ErrC::dimension_mismatch, "gain bundle does not match the system dimensions");
  }
  Rng rng(cfg.x0_seed);
  Vec x0(sys.n1());
  for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = rng.gaussian();
  x0 /= x0.norm();
  const Trajectory traj = simulate_closed_loop(sys, K, x0, cfg.dt, cfg.horizon);
  write_trajectory_csv(join(out, "trajectory.csv"), traj);
  json summary;
  summary["max_constraint_residual"] = traj.max_constraint_residual;
  summary["initial_norm"] = traj.x1.front().norm();
  summary["final_norm"] = traj.x1.back().norm();
  summary["steps"] = traj.t.size() - 1;
  summary["closed_loop"] = !opt.gain_dir.empty();
  write_json_file(join(out, "simulate_summary.json"), summary);
  write_echo(out, echo_config(cfg, nullptr, {}));
}

void cli_verify(const CliOptions& opt) {
  RunConfig cfg = load_config(opt, false);
  require_dir(opt.bundle_dir, "--bundle");
  require_dir(opt.rom_dir, "--rom");
  const std::string out = resolve_out(opt, cfg);
  const Index2System sys = read_system_bundle(opt.bundle_dir);
  InterpolationData data;
  const ReducedModel rom = read_rom_bundle(opt.rom_dir, &data);
  std::vector<Cplx> added;
  if (!cfg.points.empty()) data = resolve_interpolation(cfg, sys.m(), sys.p(), &added);
  const InterpolationReport rep = verify_interpolation(sys, rom, data);
  write_json_file(join(out, "interpolation_report.json"), interpolation_report_json(rep));
  write_echo(out, echo_config(cfg, &data, added));
}

void cli_run(const std::string& subcommand, const CliOptions& opt) {
  if (subcommand == "generate") return cli_generate(opt);
  if (subcommand == "reduce") return cli_reduce(opt);
  if (subcommand == "sigma") return cli_sigma(opt);
  if (subcommand == "poles") return cli_poles(opt);
  if (subcommand == "lqr") return cli_lqr(opt);
  if (subcommand == "simulate") return cli_simulate(opt);
  if (subcommand == "verify") return cli_verify(opt);
  throw Error(ErrC::bad_argument, "unknown subcommand '" + subcommand + "'");
}

}  // namespace mordae
