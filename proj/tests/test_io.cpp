#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <Eigen/Dense>

#include "core/core.hpp"
#include "core/rng.hpp"
#include "helpers.hpp"
#include "io/io.hpp"
#include "reduction/reduction.hpp"
#include "testbed/testbed.hpp"
#include "transfer/transfer.hpp"

using namespace mordae;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// recursive comparison with relative tolerance on numbers
bool json_close(const json& a, const json& b, double tol) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
  }
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key()) || !json_close(it.value(), b[it.key()], tol)) return false;
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!json_close(a[i], b[i], tol)) return false;
    return true;
  }
  return a == b;
}

Index2System coupled_system(std::uint64_t seed) {
  Index2System sys = dense_system(14, 4, 2, 3, seed);
  Rng rng(seed + 1);
  sys.B2 = gauss_mat(rng, 4, 2);
  sys.C2 = gauss_mat(rng, 3, 4);
  sys.D = gauss_mat(rng, 3, 2);
  return sys;
}

}  // namespace

TEST_CASE("matrix files round trip bit-for-bit") {
  TempDir td;
  Rng rng(800);
  Mat M = gauss_mat(rng, 7, 5);
  M(2, 3) = 0.0;
  M(6, 0) = 0.0;
  M(0, 0) = 1.0 / 3.0;
  M(1, 1) = 1e300;
  M(3, 2) = 5e-324;  // denormal survives the decimal round trip
  write_matrix(td.sub("m.coo"), M);
  const Mat R = read_matrix(td.sub("m.coo"));
  REQUIRE(R.rows() == 7);
  REQUIRE(R.cols() == 5);
  CHECK((R - M).norm() == 0.0);

  write_matrix(td.sub("z.coo"), Mat::Zero(3, 9));
  const Mat Z = read_matrix(td.sub("z.coo"));
  CHECK(Z.rows() == 3);
  CHECK(Z.cols() == 9);
  CHECK(Z.norm() == 0.0);

  write_matrix(td.sub("e.coo"), Mat(0, 4));
  CHECK(read_matrix(td.sub("e.coo")).cols() == 4);
}

TEST_CASE("matrix parser rejects malformed input") {
  TempDir td;
  const std::string p = td.sub("bad.coo");

  CHECK(thrown_code([&] { read_matrix(td.sub("missing.coo")); }) == ErrC::io_error);

  write_text(p, "2 x 1\n1 1 3.0\n");
  CHECK(thrown_code([&] { read_matrix(p); }) == ErrC::parse_error);

  write_text(p, "2 2 1\n3 1 1.0\n");
  CHECK(thrown_code([&] { read_matrix(p); }) == ErrC::parse_error);

  write_text(p, "2 2 2\n1 1 1.0\n1 1 2.0\n");
  CHECK(thrown_code([&] { read_matrix(p); }) == ErrC::duplicate_entry);

  write_text(p, "2 2 1\n1 1 1.0\nextra\n");
  CHECK(thrown_code([&] { read_matrix(p); }) == ErrC::parse_error);

  write_text(p, "2 2 1\n1 1 1.2.3\n");
  CHECK(thrown_code([&] { read_matrix(p); }) == ErrC::parse_error);

  write_text(p, "2 2 9\n1 1 1.0\n");
  CHECK(thrown_code([&] { read_matrix(p); }) == ErrC::parse_error);

  write_text(p, "{}");
  CHECK(thrown_code([&] { read_matrix(p); }) == ErrC::parse_error);
}

TEST_CASE("json helpers carry complex data exactly") {
  const std::vector<Cplx> zs = {Cplx(0.1, -0.7), Cplx(1.0 / 3.0, 0.0)};
  CHECK(parse_complex_list(complex_list(zs), "zs") == zs);

  std::vector<CVec> vs;
  CVec v(2);
  v << Cplx(0.3, 0.4), Cplx(-1e-17, 2e300);
  vs.push_back(v);
  const auto back = parse_cvec_list(cvec_list(vs), "vs");
  REQUIRE(back.size() == 1);
  CHECK((back[0] - v).norm() == 0.0);

  CHECK(thrown_code([&] { parse_complex_list(json{{"a", 1}}, "zs"); }) == ErrC::parse_error);
  CHECK(thrown_code([&] { parse_complex_list(json::array({json::array({1.0})}), "zs"); }) ==
        ErrC::parse_error);

  TempDir td;
  write_text(td.sub("bad.json"), "{nope");
  CHECK(thrown_code([&] { read_json_file(td.sub("bad.json")); }) == ErrC::parse_error);
  CHECK(thrown_code([&] { read_json_file(td.sub("absent.json")); }) == ErrC::io_error);
}

TEST_CASE("system bundles round trip with optional blocks") {
  TempDir td;
  const Index2System sys = coupled_system(801);
  write_system_bundle(td.sub("sys"), sys, json());

  const json m = read_manifest(td.sub("sys"));
  CHECK(m["format"] == "mordae-bundle-1");
  CHECK(m["kind"] == "index2");
  CHECK(m["dims"]["n1"] == 14);
  CHECK(m["dims"]["n2"] == 4);
  CHECK(m["dims"]["m"] == 2);
  CHECK(m["dims"]["p"] == 3);
  CHECK(m["provenance"]["kind"] == "external");

  const Index2System back = read_system_bundle(td.sub("sys"));
  CHECK((back.E11 - sys.E11).norm() == 0.0);
  CHECK((back.A11 - sys.A11).norm() == 0.0);
  CHECK((back.A21 - sys.A21).norm() == 0.0);
  CHECK((back.B1 - sys.B1).norm() == 0.0);
  CHECK((back.C1 - sys.C1).norm() == 0.0);
  CHECK((back.B2 - sys.B2).norm() == 0.0);
  CHECK((back.C2 - sys.C2).norm() == 0.0);
  CHECK((back.D - sys.D).norm() == 0.0);

  // zero coupling blocks are omitted on disk and materialize as zeros
  const Index2System plain = dense_system(9, 3, 1, 2, 802);
  write_system_bundle(td.sub("plain"), plain, json());
  CHECK(!fs::exists(td.path / "plain" / "B2.coo"));
  CHECK(!fs::exists(td.path / "plain" / "C2.coo"));
  CHECK(!fs::exists(td.path / "plain" / "D.coo"));
  const Index2System pb = read_system_bundle(td.sub("plain"));
  CHECK(pb.B2.rows() == 3);
  CHECK(pb.B2.cols() == 1);
  CHECK(pb.B2.norm() == 0.0);
  CHECK(pb.C2.rows() == 2);
  CHECK(pb.D.cols() == 1);

  // tampered manifests are rejected
  json bad = read_json_file(td.sub("sys") + std::string("/manifest.json"));
  bad["format"] = "mordae-bundle-0";
  write_json_file(td.sub("sys") + std::string("/manifest.json"), bad);
  CHECK(thrown_code([&] { read_system_bundle(td.sub("sys")); }) == ErrC::parse_error);
}

TEST_CASE("bundle blocks must match the manifest dimensions") {
  TempDir td;
  write_system_bundle(td.sub("s"), dense_system(8, 2, 1, 1, 803), json());
  write_matrix((td.path / "s" / "B1.coo").string(), Mat::Ones(7, 1));
  CHECK(thrown_code([&] { read_system_bundle(td.sub("s")); }) == ErrC::parse_error);

  write_system_bundle(td.sub("t"), dense_system(8, 2, 1, 1, 803), json());
  fs::remove(td.path / "t" / "A11.coo");
  CHECK(thrown_code([&] { read_system_bundle(td.sub("t")); }) == ErrC::io_error);
}

TEST_CASE("reduced-model bundles carry interpolation data and the projection basis") {
  TempDir td;
  const Index2System sys = dense_system(20, 5, 2, 2, 804);
  const InterpolationData data =
      random_interp_data({Cplx(0.0, 0.5), Cplx(0.0, 2.0), Cplx(1.0, 0.0)}, 2, 2, 81);
  const ReducedModel rom = reduce_index2(sys, data, ReductionMode::petrov_galerkin, 1e-10);
  write_rom_bundle(td.sub("rom"), rom, data, json{{"kind", "test"}});

  InterpolationData dback;
  const ReducedModel back = read_rom_bundle(td.sub("rom"), &dback);
  CHECK((back.Er - rom.Er).norm() == 0.0);
  CHECK((back.Ar - rom.Ar).norm() == 0.0);
  CHECK((back.Br - rom.Br).norm() == 0.0);
  CHECK((back.Cr - rom.Cr).norm() == 0.0);
  CHECK((back.Dr - rom.Dr).norm() == 0.0);
  CHECK((back.V - rom.V).norm() == 0.0);
  CHECK((back.W - rom.W).norm() == 0.0);
  CHECK(back.galerkin == rom.galerkin);
  REQUIRE(dback.points.size() == data.points.size());
  for (std::size_t k = 0; k < data.points.size(); ++k) {
    CHECK(dback.points[k] == data.points[k]);
    CHECK((dback.right_dirs[k] - data.right_dirs[k]).norm() == 0.0);
    CHECK((dback.left_dirs[k] - data.left_dirs[k]).norm() == 0.0);
  }
  CHECK(dback.conjugate_closed == data.conjugate_closed);

  // missing W: a projection-pair model cannot be reconstructed
  fs::remove(td.path / "rom" / "W.coo");
  CHECK(thrown_code([&] { read_rom_bundle(td.sub("rom")); }) == ErrC::io_error);

  // a one-sided model defaults the left basis to the right one
  const ReducedModel grom = reduce_index2(sys, data, ReductionMode::galerkin, 1e-10);
  write_rom_bundle(td.sub("grom"), grom, data, json());
  fs::remove(td.path / "grom" / "W.coo");
  const ReducedModel gback = read_rom_bundle(td.sub("grom"));
  CHECK(gback.galerkin);
  CHECK((gback.W - gback.V).norm() == 0.0);

  // wrong bundle kind in the right directory structure
  CHECK(thrown_code([&] { read_system_bundle(td.sub("grom")); }) == ErrC::parse_error);
}

TEST_CASE("gain bundles round trip including the lifted gain") {
  TempDir td;
  LqrResult res;
  Rng rng(805);
  res.P = gauss_mat(rng, 4, 4);
  res.P = Mat(0.5 * (res.P + res.P.transpose()));
  res.K_reduced = gauss_mat(rng, 2, 4);
  res.K_full = gauss_mat(rng, 2, 17);
  res.residual_norm = 3.25e-12;
  res.closed_loop_abscissa = -0.625;
  write_lqr_bundle(td.sub("g"), res, json());
  const LqrResult back = read_lqr_bundle(td.sub("g"));
  CHECK((back.P - res.P).norm() == 0.0);
  CHECK((back.K_reduced - res.K_reduced).norm() == 0.0);
  CHECK((back.K_full - res.K_full).norm() == 0.0);
  CHECK(back.residual_norm == res.residual_norm);
  CHECK(back.closed_loop_abscissa == res.closed_loop_abscissa);

  // without a lifted gain the block is absent and reads back empty-shaped
  LqrResult none = res;
  none.K_full = Mat();
  write_lqr_bundle(td.sub("n"), none, json());
  CHECK(!fs::exists(td.path / "n" / "K_full.coo"));
  CHECK(read_lqr_bundle(td.sub("n")).K_full.size() == 0);
}

TEST_CASE("config schema is flat and strict") {
  RunConfig def = parse_config_json(json::object());
  CHECK(def.points.empty());
  CHECK(def.tangent_strategy == "unit-columns");
  CHECK(def.mode == ReductionMode::petrov_galerkin);
  CHECK(def.svd_threshold == 1e-10);
  CHECK(def.weight_scalar == 10.0);
  CHECK(def.sweep_count == 100);
  CHECK(def.sweep_log);
  CHECK(def.dt == 0.05);
  CHECK(def.horizon == 100.0);
  CHECK(def.x0_seed == 1);

  json full;
  full["points"] = json::array({json::array({0.0, 1.0}), json::array({2.0, 0.0})});
  full["tangent_strategy"] = "random-seeded";
  full["mode"] = "galerkin";
  full["svd_threshold"] = 1e-8;
  full["seed"] = 42;
  full["weight"] = {{"matrix", json::array({json::array({2.0, 0.0}), json::array({0.0, 3.0})})}};
  full["sweep"] = {{"omega_min", 0.5}, {"omega_max", 50.0}, {"count", 7}, {"spacing", "linear"}};
  full["simulate"] = {{"dt", 0.01}, {"horizon", 2.0}, {"x0_seed", 9}};
  full["out"] = "runs/demo";
  const RunConfig cfg = parse_config_json(full);
  CHECK(cfg.points.size() == 2);
  CHECK(cfg.points[0] == Cplx(0.0, 1.0));
  CHECK(cfg.mode == ReductionMode::galerkin);
  CHECK(cfg.seed == 42);
  CHECK(cfg.weight.rows() == 2);
  CHECK(cfg.weight(1, 1) == 3.0);
  CHECK(cfg.omega_min == 0.5);
  CHECK(cfg.sweep_count == 7);
  CHECK(!cfg.sweep_log);
  CHECK(cfg.dt == 0.01);
  CHECK(cfg.out == "runs/demo");

  CHECK(thrown_code([] { parse_config_json(json{{"tangent", "x"}}); }) == ErrC::parse_error);
  CHECK(thrown_code([] { parse_config_json(json{{"svd_threshold", 0.0}}); }) == ErrC::parse_error);
  CHECK(thrown_code([] { parse_config_json(json{{"svd_threshold", 1.0}}); }) == ErrC::parse_error);
  CHECK(thrown_code([] { parse_config_json(json{{"tangent_strategy", "fancy"}}); }) ==
        ErrC::parse_error);
  CHECK(thrown_code([] { parse_config_json(json{{"seed", -3}}); }) == ErrC::parse_error);
  CHECK(thrown_code([] { parse_config_json(json{{"mode", "both"}}); }) == ErrC::bad_argument);
  CHECK(thrown_code([] { parse_config_json(json{{"weight", json::array({1.0})}}); }) ==
        ErrC::parse_error);
  CHECK(thrown_code([] { parse_config_json(json{{"sweep", {{"spacing", "cubic"}}}}); }) ==
        ErrC::parse_error);
  CHECK(thrown_code([] { parse_config_json(json::array()); }) == ErrC::parse_error);
}

TEST_CASE("tangent strategies resolve deterministically and close conjugates") {
  RunConfig cfg;
  cfg.points = {Cplx(0.0, 1.0), Cplx(2.0, 0.0)};

  std::vector<Cplx> added;
  const InterpolationData unit = resolve_interpolation(cfg, 2, 3, &added);
  REQUIRE(unit.points.size() == 3);  // conjugate of the first point appended
  CHECK(added == std::vector<Cplx>{Cplx(0.0, -1.0)});
  CHECK(unit.conjugate_closed);
  CHECK(unit.right_dirs[0](0) == Cplx(1.0, 0.0));
  CHECK(unit.right_dirs[1](1) == Cplx(1.0, 0.0));  // unit columns cycle
  CHECK(unit.left_dirs[1](1) == Cplx(1.0, 0.0));
  CHECK((unit.right_dirs[2] - unit.right_dirs[0].conjugate()).norm() == 0.0);

  cfg.tangent_strategy = "random-seeded";
  cfg.seed = 11;
  const InterpolationData r1 = resolve_interpolation(cfg, 2, 3, nullptr);
  const InterpolationData r2 = resolve_interpolation(cfg, 2, 3, nullptr);
  REQUIRE(r1.points.size() == 3);
  for (std::size_t k = 0; k < r1.points.size(); ++k)
    CHECK((r1.right_dirs[k] - r2.right_dirs[k]).norm() == 0.0);
  // real point drew real directions
  CHECK(r1.right_dirs[1].imag().norm() == 0.0);
  CHECK(r1.left_dirs[1].imag().norm() == 0.0);

  // listing both conjugates explicitly reuses conjugated directions
  RunConfig both = cfg;
  both.points = {Cplx(0.0, 1.0), Cplx(0.0, -1.0)};
  const InterpolationData rb = resolve_interpolation(both, 2, 2, &added);
  REQUIRE(rb.points.size() == 2);
  CHECK(added.empty());
  CHECK((rb.right_dirs[1] - rb.right_dirs[0].conjugate()).norm() == 0.0);

  RunConfig user;
  user.points = {Cplx(1.5, 0.0)};
  user.tangent_strategy = "user-supplied";
  CHECK(thrown_code([&] { resolve_interpolation(user, 2, 2, nullptr); }) == ErrC::bad_argument);
  user.right_dirs = {CVec::Ones(2)};
  user.left_dirs = {CVec::Ones(2)};
  const InterpolationData ud = resolve_interpolation(user, 2, 2, nullptr);
  CHECK(ud.points.size() == 1);
  user.right_dirs = {CVec::Ones(3)};
  CHECK(thrown_code([&] { resolve_interpolation(user, 2, 2, nullptr); }) == ErrC::bad_argument);
  user.right_dirs = {Cplx(0.0, 1.0) * CVec::Ones(2)};
  CHECK(thrown_code([&] { resolve_interpolation(user, 2, 2, nullptr); }) == ErrC::bad_argument);

  RunConfig empty;
  CHECK(thrown_code([&] { resolve_interpolation(empty, 2, 2, nullptr); }) == ErrC::bad_argument);
}

TEST_CASE("config echo is an exactly re-runnable fixed point") {
  RunConfig cfg;
  cfg.points = {Cplx(0.0, 0.7), Cplx(1.0, 0.0)};
  cfg.tangent_strategy = "random-seeded";
  cfg.seed = 17;
  cfg.mode = ReductionMode::petrov_galerkin;
  cfg.weight_scalar = 2.5;

  std::vector<Cplx> added;
  const InterpolationData resolved = resolve_interpolation(cfg, 2, 2, &added);
  const json echo = echo_config(cfg, &resolved, added);
  CHECK(echo["tangent_strategy"] == "user-supplied");
  CHECK(echo["conjugate_pairs_added"].size() == 1);

  const RunConfig cfg2 = parse_config_json(echo);
  std::vector<Cplx> added2;
  const InterpolationData again = resolve_interpolation(cfg2, 2, 2, &added2);
  CHECK(added2.empty());  // already closed
  REQUIRE(again.points.size() == resolved.points.size());
  for (std::size_t k = 0; k < again.points.size(); ++k) {
    CHECK(again.points[k] == resolved.points[k]);
    CHECK((again.right_dirs[k] - resolved.right_dirs[k]).norm() == 0.0);
    CHECK((again.left_dirs[k] - resolved.left_dirs[k]).norm() == 0.0);
  }
  const json echo2 = echo_config(cfg2, &again, added2);
  json echo_less = echo;
  echo_less["conjugate_pairs_added"] = json::array();
  CHECK(echo2 == echo_less);  // identical except the already-applied closure

  CHECK(parse_mode(mode_name(ReductionMode::galerkin)) == ReductionMode::galerkin);
  CHECK(parse_mode(mode_name(ReductionMode::petrov_galerkin)) == ReductionMode::petrov_galerkin);
}

TEST_CASE("csv writers emit LF-only files with one row per record") {
  TempDir td;
  const Index2System sys = dense_system(12, 3, 2, 2, 806);
  const FrequencyResponse fr = sigma_sweep(sys, 0.1, 10.0, 4, true);
  write_sigma_csv(td.sub("sigma.csv"), fr, sys.p(), sys.m());
  const std::string sig = read_text(td.sub("sigma.csv"));
  CHECK(sig.find('\r') == std::string::npos);
  CHECK(sig.rfind("omega,ok,sigma_max,g_re_1_1,g_im_1_1", 0) == 0);
  CHECK(std::count(sig.begin(), sig.end(), '\n') == 5);
  // numbers round trip through the printed representation
  const std::string first = sig.substr(sig.find('\n') + 1, sig.find('\n', sig.find('\n') + 1));
  CHECK(first.rfind(fmt_double(fr.omegas[0]) + ",1," + fmt_double(fr.norms[0]), 0) == 0);

  Trajectory tr;
  tr.t = {0.0, 0.5};
  tr.x1 = {Vec::Ones(3), Vec::Zero(3)};
  tr.u = {Vec::Zero(1), Vec::Ones(1)};
  tr.y = {Vec::Ones(2), Vec::Ones(2)};
  write_trajectory_csv(td.sub("traj.csv"), tr);
  const std::string t = read_text(td.sub("traj.csv"));
  CHECK(t.rfind("t,u_1,x1_norm,y_1,y_2", 0) == 0);
  CHECK(std::count(t.begin(), t.end(), '\n') == 3);
  CHECK(t.find('\r') == std::string::npos);

  const GridGeometry g = build_grid(3, 2, 3.0, 2.0);
  const GainFields f = functional_gains(Mat::Ones(1, g.n1), g);
  write_gains_csv(td.sub("gains.csv"), f);
  const std::string gs = read_text(td.sub("gains.csv"));
  CHECK(gs.rfind("component,i,j,x,y,h_1", 0) == 0);
  CHECK(std::count(gs.begin(), gs.end(), '\n') == static_cast<long>(1 + g.n1));
  CHECK(gs.find('\r') == std::string::npos);
}

TEST_CASE("pipeline subcommands produce complete run directories") {
  TempDir td;
  json conf;
  conf["generator"] = {{"kind", "planted"},
                       {"n1", 24},
                       {"n2", 6},
                       {"poles", json::array({json::array({-0.4, 1.0}), json::array({-0.4, -1.0})})}};
  conf["seed"] = 3;
  conf["points"] =
      json::array({json::array({0.0, 0.5}), json::array({0.0, 1.0}), json::array({0.0, 2.0})});
  conf["sweep"] = {{"omega_min", 0.1}, {"omega_max", 10.0}, {"count", 6}};
  conf["simulate"] = {{"dt", 0.05}, {"horizon", 1.0}};
  write_json_file(td.sub("config.json"), conf);

  CliOptions gen;
  gen.config_path = td.sub("config.json");
  gen.out_dir = td.sub("sys");
  cli_run("generate", gen);
  CHECK(fs::exists(td.path / "sys" / "manifest.json"));
  CHECK(fs::exists(td.path / "sys" / "E11.coo"));
  CHECK(fs::exists(td.path / "sys" / "validation.json"));
  CHECK(fs::exists(td.path / "sys" / "config_echo.json"));
  CHECK(read_json_file((td.path / "sys" / "validation.json").string())["ok"] == true);

  CliOptions red = gen;
  red.bundle_dir = td.sub("sys");
  red.out_dir = td.sub("rom");
  cli_run("reduce", red);
  const json rep = read_json_file((td.path / "rom" / "interpolation_report.json").string());
  CHECK(rep["max_right"].get<double>() <= 1e-8);
  CHECK(rep["max_left"].get<double>() <= 1e-8);
  CHECK(rep["entries"].size() == 6);  // 3 listed + 3 appended conjugates
  const json recho = read_json_file((td.path / "rom" / "config_echo.json").string());
  CHECK(recho["tangent_strategy"] == "user-supplied");
  CHECK(recho["conjugate_pairs_added"].size() == 3);

  CliOptions sig = gen;
  sig.bundle_dir = td.sub("sys");
  sig.out_dir = td.sub("sweep");
  cli_run("sigma", sig);
  const std::string csv = read_text((td.path / "sweep" / "sigma.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  // sigma accepts a rom bundle too
  CliOptions sigr = gen;
  sigr.bundle_dir = td.sub("rom");
  sigr.out_dir = td.sub("sweep_rom");
  cli_run("sigma", sigr);
  CHECK(fs::exists(td.path / "sweep_rom" / "sigma.csv"));

  CliOptions pol;
  pol.bundle_dir = td.sub("sys");
  pol.out_dir = td.sub("poles");
  cli_run("poles", pol);
  const json poles = read_json_file((td.path / "poles" / "poles.json").string());
  CHECK(poles["finite_poles"].size() == 18);
  CHECK(poles["unstable_count"] == 0);

  CliOptions lqr = gen;
  lqr.rom_dir = td.sub("rom");
  lqr.out_dir = td.sub("gain");
  cli_run("lqr", lqr);
  CHECK(fs::exists(td.path / "gain" / "K_reduced.coo"));
  CHECK(fs::exists(td.path / "gain" / "K_full.coo"));
  const json gmani = read_manifest(td.sub("gain"));
  CHECK(gmani["kind"] == "lqr");
  CHECK(gmani["closed_loop_abscissa"].get<double>() < 0.0);

  CliOptions sim = gen;
  sim.bundle_dir = td.sub("sys");
  sim.gain_dir = td.sub("gain");
  sim.out_dir = td.sub("run");
  cli_run("simulate", sim);
  CHECK(fs::exists(td.path / "run" / "trajectory.csv"));
  const json summary = read_json_file((td.path / "run" / "simulate_summary.json").string());
  CHECK(summary["closed_loop"] == true);
  CHECK(summary["steps"] == 20);
  CHECK(summary["max_constraint_residual"].get<double>() <= 1e-9);

  CliOptions ver;
  ver.bundle_dir = td.sub("sys");
  ver.rom_dir = td.sub("rom");
  ver.out_dir = td.sub("check");
  cli_run("verify", ver);
  const json vrep = read_json_file((td.path / "check" / "interpolation_report.json").string());
  CHECK(json_close(vrep, rep, 1e-10));

  CHECK(thrown_code([&] { cli_run("frobnicate", gen); }) == ErrC::bad_argument);
  CliOptions nobundle = gen;
  nobundle.bundle_dir.clear();
  CHECK(thrown_code([&] { cli_run("reduce", nobundle); }) == ErrC::bad_argument);
  CliOptions noconf;
  noconf.out_dir = td.sub("x");
  CHECK(thrown_code([&] { cli_run("generate", noconf); }) == ErrC::bad_argument);
  CliOptions noout;
  noout.config_path = td.sub("config.json");
  CHECK(thrown_code([&] { cli_run("generate", noout); }) == ErrC::bad_argument);

  // gain fields need a grid-generated bundle
  CliOptions lqr2 = lqr;
  lqr2.bundle_dir = td.sub("sys");
  lqr2.out_dir = td.sub("gain2");
  CHECK(thrown_code([&] { cli_run("lqr", lqr2); }) == ErrC::bad_argument);
}

TEST_CASE("flow pipeline writes gain fields for grid bundles") {
  TempDir td;
  json conf;
  conf["generator"] = {{"kind", "oseen"},
                       {"nx", 8},
                       {"ny", 6},
                       {"lx", 4.0},
                       {"ly", 3.0},
                       {"reynolds", 15.0},
                       {"base_flow", "parabolic"},
                       {"speed", 1.0},
                       {"obstacle", json::array({3, 5, 2, 4})},
                       {"patches", json::array({json::array({2.5, 3.5, 0.5, 2.5})})}};
  conf["points"] = json::array({json::array({0.0, 0.5}), json::array({0.0, 2.0})});
  conf["mode"] = "galerkin";
  conf["weight"] = 5.0;
  write_json_file(td.sub("config.json"), conf);

  CliOptions gen;
  gen.config_path = td.sub("config.json");
  gen.out_dir = td.sub("sys");
  cli_run("generate", gen);
  const json mani = read_manifest(td.sub("sys"));
  CHECK(mani["provenance"]["generator"]["kind"] == "oseen");
  CHECK(mani["provenance"]["generator"]["nx"] == 8);

  CliOptions red = gen;
  red.bundle_dir = td.sub("sys");
  red.out_dir = td.sub("rom");
  cli_run("reduce", red);
  CHECK(read_manifest(td.sub("rom"))["galerkin"] == true);

  CliOptions lqr = gen;
  lqr.rom_dir = td.sub("rom");
  lqr.bundle_dir = td.sub("sys");
  lqr.out_dir = td.sub("gain");
  cli_run("lqr", lqr);
  CHECK(fs::exists(td.path / "gain" / "gains.csv"));
  const std::string gcsv = read_text((td.path / "gain" / "gains.csv").string());
  const Index2System sys = read_system_bundle(td.sub("sys"));
  CHECK(std::count(gcsv.begin(), gcsv.end(), '\n') == static_cast<long>(1 + sys.n1()));
}

TEST_CASE("demo run reproduces the committed reference outputs") {
  const fs::path demo = fs::path(MORDAE_TEST_SOURCE_DIR) / "data" / "demo";
  REQUIRE(fs::exists(demo / "config.json"));

  TempDir td;
  CliOptions gen;
  gen.config_path = (demo / "config.json").string();
  gen.out_dir = td.sub("sys");
  cli_run("generate", gen);

  CliOptions red = gen;
  red.bundle_dir = td.sub("sys");
  red.out_dir = td.sub("rom");
  cli_run("reduce", red);

  CliOptions pol;
  pol.bundle_dir = td.sub("sys");
  pol.out_dir = td.sub("poles");
  cli_run("poles", pol);

  const json rep = read_json_file((td.path / "rom" / "interpolation_report.json").string());
  const json rep_gold = read_json_file((demo / "golden" / "interpolation_report.json").string());
  CHECK(json_close(rep, rep_gold, 1e-10));
  CHECK(rep["max_right"].get<double>() <= 1e-8);

  const json poles = read_json_file((td.path / "poles" / "poles.json").string());
  const json poles_gold = read_json_file((demo / "golden" / "poles.json").string());
  CHECK(json_close(poles, poles_gold, 1e-10));

  // independent check of the reduced model against the dense projector oracle:
  // both must interpolate the full response at every configured point
  const Index2System sys = read_system_bundle(td.sub("sys"));
  InterpolationData data;
  const ReducedModel rom = read_rom_bundle(td.sub("rom"), &data);
  const ReducedModel oracle =
      reduce_via_projectors(embed_index2(sys), projectors_index2(sys), data, 1e-10);
  const InterpolationReport orep = verify_interpolation(sys, oracle, data);
  CHECK(orep.max_right <= 1e-8);
  const InterpolationReport rrep = verify_interpolation(sys, rom, data);
  CHECK(rrep.max_right <= 1e-8);
}
