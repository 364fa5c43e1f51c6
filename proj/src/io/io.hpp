#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "control/control.hpp"
#include "core/types.hpp"
#include "testbed/testbed.hpp"

namespace mordae {

using json = nlohmann::json;

// ---------- matrix text format ----------
// Header "rows cols nnz", then nnz lines "i j value" (1-based, >= 17 significant
// digits); duplicates are rejected, nnz = 0 is a valid all-zero matrix.
Mat read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Mat& M);

// %.17g — value-exact decimal round trip for doubles.
std::string fmt_double(double v);

// ---------- json files ----------
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// Complex values as [re, im] pairs (and per-point direction vectors as arrays of
// such pairs) — the JSON convention shared by configs, manifests, and reports.
json complex_list(const std::vector<Cplx>& zs);
std::vector<Cplx> parse_complex_list(const json& a, const char* what);
json cvec_list(const std::vector<CVec>& vs);
std::vector<CVec> parse_cvec_list(const json& a, const char* what);

// ---------- bundles (directory of matrices + manifest.json) ----------
void write_system_bundle(const std::string& dir, const Index2System& sys, const json& provenance);
Index2System read_system_bundle(const std::string& dir);

void write_rom_bundle(const std::string& dir, const ReducedModel& rom,
                      const InterpolationData& data, const json& provenance);
ReducedModel read_rom_bundle(const std::string& dir, InterpolationData* data = nullptr);

void write_lqr_bundle(const std::string& dir, const LqrResult& res, const json& provenance);
LqrResult read_lqr_bundle(const std::string& dir);

json read_manifest(const std::string& dir);

// ---------- run configuration ----------
struct RunConfig {
  std::vector<Cplx> points;
  std::string tangent_strategy = "unit-columns";  // unit-columns | random-seeded | user-supplied
  std::vector<CVec> right_dirs, left_dirs;        // user-supplied strategy only
  ReductionMode mode = ReductionMode::petrov_galerkin;
  double svd_threshold = 1e-10;
  std::uint64_t seed = 0;
  Mat weight;                  // empty: weight_scalar * identity
  double weight_scalar = 10.0;
  double omega_min = 1e-2, omega_max = 1e2;
  int sweep_count = 100;
  bool sweep_log = true;
  double dt = 0.05, horizon = 100.0;
  std::uint64_t x0_seed = 1;
  json generator;              // generator section, interpreted by cli_generate
  std::string out;             // default output directory (flag overrides)
};

RunConfig parse_config_json(const json& j);
RunConfig parse_config_file(const std::string& path);

// Tangent directions for a system shape per the configured strategy, with
// conjugate closure applied; points appended by the closure are reported.
InterpolationData resolve_interpolation(const RunConfig& cfg, Eigen::Index m, Eigen::Index p,
                                        std::vector<Cplx>* added = nullptr);

// Fully resolved, re-runnable config echo.  When resolved interpolation data is
// given, points/directions are recorded explicitly (strategy "user-supplied"), so
// re-running from the echo reproduces the run exactly.
json echo_config(const RunConfig& cfg, const InterpolationData* resolved,
                 const std::vector<Cplx>& added_conjugates);

std::string mode_name(ReductionMode mode);
ReductionMode parse_mode(const std::string& name);

// ---------- reports ----------
json interpolation_report_json(const InterpolationReport& rep);
json pole_report_json(const PoleReport& rep);
json validation_report_json(const ValidationReport& rep);

void write_sigma_csv(const std::string& path, const FrequencyResponse& fr,
                     Eigen::Index p, Eigen::Index m);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_gains_csv(const std::string& path, const GainFields& fields);

// ---------- CLI orchestration ----------
struct CliOptions {
  std::string config_path;
  std::string bundle_dir;  // system bundle (sigma/poles also accept a rom bundle)
  std::string rom_dir;     // reduced-model bundle
  std::string gain_dir;    // lqr bundle
  std::string out_dir;
  std::string mode;        // override, "" = from config
  long long seed = 0;      // override when has_seed
  bool has_seed = false;
};

void cli_generate(const CliOptions& opt);
void cli_reduce(const CliOptions& opt);
void cli_sigma(const CliOptions& opt);
void cli_poles(const CliOptions& opt);
void cli_lqr(const CliOptions& opt);
void cli_simulate(const CliOptions& opt);
void cli_verify(const CliOptions& opt);

// Dispatch by subcommand name; throws bad_argument for unknown names.
void cli_run(const std::string& subcommand, const CliOptions& opt);

}  // namespace mordae
