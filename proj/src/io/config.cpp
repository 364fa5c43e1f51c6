#include <algorithm>
#include <set>
#include <string>

#include "core/rng.hpp"
#include "io/io.hpp"
#include "reduction/reduction.hpp"

namespace mordae {

namespace {

[[noreturn]] void bad_key(const std::string& key, const char* why) {
  throw Error(ErrC::parse_error, "config key '" + key + "' " + why);
}

double number_field(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) bad_key(key, "must be a number");
  return j[key].get<double>();
}

std::uint64_t uint_field(const json& j, const std::string& key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() || j[key].get<long long>() < 0)
    bad_key(key, "must be a nonnegative integer");
  return j[key].get<std::uint64_t>();
}

Mat parse_matrix_field(const json& a, const std::string& key) {
  if (!a.is_array() || a.empty()) bad_key(key, "must be a nonempty 2D array");
  const std::size_t cols = a[0].is_array() ? a[0].size() : 0;
  if (cols == 0) bad_key(key, "must be a nonempty 2D array");
  Mat M(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_array() || a[i].size() != cols) bad_key(key, "rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!a[i][j].is_number()) bad_key(key, "entries must be numbers");
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j].get<double>();
    }
  }
  return M;
}

json matrix_field(const Mat& M) {
  json a = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    a.push_back(row);
  }
  return a;
}

CVec unit_cvec(Eigen::Index n, Eigen::Index k) {
  CVec e = CVec::Zero(n);
  e(k % n) = 1.0;
  return e;
}

CVec random_cvec(Rng& rng, Eigen::Index n, bool complex_entries) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = rng.gaussian();
    const double im = complex_entries ? rng.gaussian() : 0.0;
    v(i) = Cplx(re, im);
  }
  return v;
}

bool is_real_dir(const CVec& v) {
  double im = 0.0, norm = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    im = std::max(im, std::abs(v(i).imag()));
    norm = std::max(norm, std::abs(v(i)));
  }
  return im <= 1e-12 * std::max(1.0, norm);
}

}  // namespace

std::string mode_name(ReductionMode mode) {
  return mode == ReductionMode::galerkin ? "galerkin" : "petrov_galerkin";
}

ReductionMode parse_mode(const std::string& name) {
  if (name == "galerkin") return ReductionMode::galerkin;
  if (name == "petrov_galerkin") return ReductionMode::petrov_galerkin;
  throw Error(ErrC::bad_argument, "unknown mode '" + name + "' (petrov_galerkin | galerkin)");
}

RunConfig parse_config_json(const json& j) {
  if (!j.is_object()) throw Error(ErrC::parse_error, "config must be a JSON object");
  static const std::set<std::string> known = {
      "format",     "points",  "tangent_strategy", "right_dirs", "left_dirs",
      "mode",       "svd_threshold", "seed",       "weight",     "sweep",
      "simulate",   "generator",     "out",        "conjugate_pairs_added"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (known.find(it.key()) == known.end())
      throw Error(ErrC::parse_error, "unknown config key '" + it.key() + "'");

  RunConfig cfg;
  if (j.contains("points")) cfg.points = parse_complex_list(j["points"], "points");
  if (j.contains("tangent_strategy")) {
    if (!j["tangent_strategy"].is_string()) bad_key("tangent_strategy", "must be a string");
    cfg.tangent_strategy = j["tangent_strategy"].get<std::string>();
    if (cfg.tangent_strategy != "unit-columns" && cfg.tangent_strategy != "random-seeded" &&
        cfg.tangent_strategy != "user-supplied")
      bad_key("tangent_strategy", "must be unit-columns, random-seeded, or user-supplied");
  }
  if (j.contains("right_dirs")) cfg.right_dirs = parse_cvec_list(j["right_dirs"], "right_dirs");
  if (j.contains("left_dirs")) cfg.left_dirs = parse_cvec_list(j["left_dirs"], "left_dirs");
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) bad_key("mode", "must be a string");
    cfg.mode = parse_mode(j["mode"].get<std::string>());
  }
  cfg.svd_threshold = number_field(j, "svd_threshold", cfg.svd_threshold);
  if (!(cfg.svd_threshold > 0.0) || cfg.svd_threshold >= 1.0)
    bad_key("svd_threshold", "must lie in (0, 1)");
  cfg.seed = uint_field(j, "seed", cfg.seed);
  if (j.contains("weight")) {
    const json& w = j["weight"];
    if (w.is_number())
      cfg.weight_scalar = w.get<double>();
    else if (w.is_object() && w.contains("scalar") && w["scalar"].is_number())
      cfg.weight_scalar = w["scalar"].get<double>();
    else if (w.is_object() && w.contains("matrix"))
      cfg.weight = parse_matrix_field(w["matrix"], "weight.matrix");
    else
      bad_key("weight", "must be a number, {\"scalar\": x}, or {\"matrix\": [[...]]}");
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object()) bad_key("sweep", "must be an object");
    cfg.omega_min = number_field(s, "omega_min", cfg.omega_min);
    cfg.omega_max = number_field(s, "omega_max", cfg.omega_max);
    const double cnt = number_field(s, "count", cfg.sweep_count);
    cfg.sweep_count = static_cast<int>(cnt);
    if (s.contains("spacing")) {
      if (!s["spacing"].is_string()) bad_key("sweep.spacing", "must be \"log\" or \"linear\"");
      const std::string sp = s["spacing"].get<std::string>();
      if (sp == "log")
        cfg.sweep_log = true;
      else if (sp == "linear")
        cfg.sweep_log = false;
      else
        bad_key("sweep.spacing", "must be \"log\" or \"linear\"");
    }
  }
  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    if (!s.is_object()) bad_key("simulate", "must be an object");
    cfg.dt = number_field(s, "dt", cfg.dt);
    cfg.horizon = number_field(s, "horizon", cfg.horizon);
    cfg.x0_seed = uint_field(s, "x0_seed", cfg.x0_seed);
  }
  if (j.contains("generator")) {
    if (!j["generator"].is_object()) bad_key("generator", "must be an object");
    cfg.generator = j["generator"];
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) bad_key("out", "must be a string");
    cfg.out = j["out"].get<std::string>();
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  return parse_config_json(read_json_file(path));
}

InterpolationData resolve_interpolation(const RunConfig& cfg, Eigen::Index m, Eigen::Index p,
                                        std::vector<Cplx>* added) {
  if (cfg.points.empty()) throw Error(ErrC::bad_argument, "config supplies no interpolation points");
  if (m < 1 || p < 1)
    throw Error(ErrC::bad_argument, "system has no inputs or no outputs to interpolate");
  InterpolationData data;
  data.points = cfg.points;

  if (cfg.tangent_strategy == "user-supplied") {
    if (cfg.right_dirs.size() != cfg.points.size() || cfg.left_dirs.size() != cfg.points.size())
      throw Error(ErrC::bad_argument,
                  "user-supplied strategy needs one right and one left direction per point");
    for (std::size_t k = 0; k < cfg.points.size(); ++k) {
      if (cfg.right_dirs[k].size() != m || cfg.left_dirs[k].size() != p)
        throw Error(ErrC::bad_argument, "tangent direction lengths must match the system shape");
      if (cfg.points[k].imag() == 0.0 &&
          (!is_real_dir(cfg.right_dirs[k]) || !is_real_dir(cfg.left_dirs[k])))
        throw Error(ErrC::bad_argument, "real interpolation points need real tangent directions");
    }
    data.right_dirs = cfg.right_dirs;
    data.left_dirs = cfg.left_dirs;
  } else if (cfg.tangent_strategy == "unit-columns") {
    for (std::size_t k = 0; k < cfg.points.size(); ++k) {
      data.right_dirs.push_back(unit_cvec(m, static_cast<Eigen::Index>(k)));
      data.left_dirs.push_back(unit_cvec(p, static_cast<Eigen::Index>(k)));
    }
  } else {  // random-seeded
    Rng rng(cfg.seed);
    for (std::size_t k = 0; k < cfg.points.size(); ++k) {
      const Cplx z = cfg.points[k];
      // conjugate partner of an earlier point reuses its (conjugated) directions,
      // so realification stays exact; draw order is the listed point order
      std::size_t partner = k;
      for (std::size_t q = 0; q < k; ++q)
        if (cfg.points[q] == std::conj(z) && z.imag() != 0.0) {
          partner = q;
          break;
        }
      if (partner != k) {
        data.right_dirs.push_back(data.right_dirs[partner].conjugate());
        data.left_dirs.push_back(data.left_dirs[partner].conjugate());
      } else {
        const bool cplx = z.imag() != 0.0;
        data.right_dirs.push_back(random_cvec(rng, m, cplx));
        data.left_dirs.push_back(random_cvec(rng, p, cplx));
      }
    }
  }

  const std::size_t before = data.points.size();
  data = close_conjugate(data);
  if (added != nullptr) {
    added->clear();
    for (std::size_t k = before; k < data.points.size(); ++k) added->push_back(data.points[k]);
  }
  return data;
}

json echo_config(const RunConfig& cfg, const InterpolationData* resolved,
                 const std::vector<Cplx>& added_conjugates) {
  json j;
  j["format"] = "mordae-config-1";
  if (resolved != nullptr) {
    j["points"] = complex_list(resolved->points);
    j["tangent_strategy"] = "user-supplied";
    j["right_dirs"] = cvec_list(resolved->right_dirs);
    j["left_dirs"] = cvec_list(resolved->left_dirs);
  } else {
    j["points"] = complex_list(cfg.points);
    j["tangent_strategy"] = cfg.tangent_strategy;
    if (!cfg.right_dirs.empty()) j["right_dirs"] = cvec_list(cfg.right_dirs);
    if (!cfg.left_dirs.empty()) j["left_dirs"] = cvec_list(cfg.left_dirs);
  }
  j["conjugate_pairs_added"] = complex_list(added_conjugates);
  j["mode"] = mode_name(cfg.mode);
  j["svd_threshold"] = cfg.svd_threshold;
  j["seed"] = cfg.seed;
  if (cfg.weight.size() != 0)
    j["weight"] = {{"matrix", matrix_field(cfg.weight)}};
  else
    j["weight"] = {{"scalar", cfg.weight_scalar}};
  j["sweep"] = {{"omega_min", cfg.omega_min},
                {"omega_max", cfg.omega_max},
                {"count", cfg.sweep_count},
                {"spacing", cfg.sweep_log ? "log" : "linear"}};
  j["simulate"] = {{"dt", cfg.dt}, {"horizon", cfg.horizon}, {"x0_seed", cfg.x0_seed}};
  if (!cfg.generator.is_null()) j["generator"] = cfg.generator;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

}  // namespace mordae
