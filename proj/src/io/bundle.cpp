#include <filesystem>
#include <string>

#include "io/io.hpp"

namespace fs = std::filesystem;

namespace mordae {

namespace {

constexpr const char* kFormat = "mordae-bundle-1";

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrC::io_error, "cannot create directory: " + dir);
}

std::string block_path(const std::string& dir, const char* name) {
  return (fs::path(dir) / (std::string(name) + ".coo")).string();
}

bool is_symmetric(const Mat& M) {
  if (M.rows() != M.cols() || M.size() == 0) return false;
  return (M - M.transpose()).norm() <= 1e-12 * std::max(1.0, M.norm());
}

void write_block(const std::string& dir, const char* name, const Mat& M) {
  write_matrix(block_path(dir, name), M);
}

// Optional blocks are omitted when absent or all-zero; readers default them to zero.
void write_optional_block(const std::string& dir, const char* name, const Mat& M) {
  if (M.size() == 0 || M.norm() == 0.0) return;
  write_matrix(block_path(dir, name), M);
}

Mat read_block(const std::string& dir, const char* name, Eigen::Index rows, Eigen::Index cols,
               bool required) {
  const std::string path = block_path(dir, name);
  if (!fs::exists(path)) {
    if (required) throw Error(ErrC::io_error, "missing required block " + path);
    return Mat::Zero(rows, cols);
  }
  Mat M = read_matrix(path);
  if (M.rows() != rows || M.cols() != cols)
    throw Error(ErrC::parse_error, std::string("block ") + name +
                                       " does not match the manifest dimensions in " + dir);
  return M;
}

json dims_field(const json& manifest, const char* key) {
  if (!manifest.contains("dims") || !manifest["dims"].contains(key))
    throw Error(ErrC::parse_error, std::string("manifest missing dims.") + key);
  const json& v = manifest["dims"][key];
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw Error(ErrC::parse_error, std::string("manifest dims.") + key + " must be a nonnegative integer");
  return v;
}

}  // namespace

json complex_list(const std::vector<Cplx>& zs) {
  json a = json::array();
  for (const Cplx& z : zs) a.push_back({z.real(), z.imag()});
  return a;
}

std::vector<Cplx> parse_complex_list(const json& a, const char* what) {
  if (!a.is_array()) throw Error(ErrC::parse_error, std::string(what) + " must be an array");
  std::vector<Cplx> zs;
  for (const json& e : a) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw Error(ErrC::parse_error, std::string(what) + " entries must be [re, im] pairs");
    zs.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return zs;
}

json cvec_list(const std::vector<CVec>& vs) {
  json a = json::array();
  for (const CVec& v : vs) {
    json row = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back({v(i).real(), v(i).imag()});
    a.push_back(row);
  }
  return a;
}

std::vector<CVec> parse_cvec_list(const json& a, const char* what) {
  std::vector<CVec> vs;
  if (!a.is_array()) throw Error(ErrC::parse_error, std::string(what) + " must be an array");
  for (const json& row : a) {
    const std::vector<Cplx> zs = parse_complex_list(row, what);
    CVec v(static_cast<Eigen::Index>(zs.size()));
    for (std::size_t i = 0; i < zs.size(); ++i) v(static_cast<Eigen::Index>(i)) = zs[i];
    vs.push_back(std::move(v));
  }
  return vs;
}

json read_manifest(const std::string& dir) {
  const json m = read_json_file((fs::path(dir) / "manifest.json").string());
  if (!m.contains("format") || m["format"] != kFormat)
    throw Error(ErrC::parse_error, "unrecognized bundle format in " + dir);
  if (!m.contains("kind") || !m["kind"].is_string())
    throw Error(ErrC::parse_error, "manifest missing bundle kind in " + dir);
  return m;
}

void write_system_bundle(const std::string& dir, const Index2System& sys, const json& provenance) {
  ensure_dir(dir);
  json manifest;
  manifest["format"] = kFormat;
  manifest["kind"] = "index2";
  manifest["dims"] = {{"n1", sys.n1()}, {"n2", sys.n2()}, {"m", sys.m()}, {"p", sys.p()}};
  manifest["symmetry"] = {{"e11_symmetric", is_symmetric(sys.E11)},
                          {"a11_symmetric", is_symmetric(sys.A11)}};
  manifest["provenance"] = provenance.is_null() ? json{{"kind", "external"}} : provenance;
  write_json_file((fs::path(dir) / "manifest.json").string(), manifest);

  write_block(dir, "E11", sys.E11);
  write_block(dir, "A11", sys.A11);
  write_block(dir, "A21", sys.A21);
  write_block(dir, "B1", sys.B1);
  write_block(dir, "C1", sys.C1);
  write_optional_block(dir, "B2", sys.B2);
  write_optional_block(dir, "C2", sys.C2);
  write_optional_block(dir, "D", sys.D);
}

Index2System read_system_bundle(const std::string& dir) {
  const json m = read_manifest(dir);
  if (m["kind"] != "index2")
    throw Error(ErrC::parse_error, "expected a system bundle in " + dir);
  const Eigen::Index n1 = dims_field(m, "n1").get<Eigen::Index>();
  const Eigen::Index n2 = dims_field(m, "n2").get<Eigen::Index>();
  const Eigen::Index nm = dims_field(m, "m").get<Eigen::Index>();
  const Eigen::Index np = dims_field(m, "p").get<Eigen::Index>();
  Index2System sys;
  sys.E11 = read_block(dir, "E11", n1, n1, true);
  sys.A11 = read_block(dir, "A11", n1, n1, true);
  sys.A21 = read_block(dir, "A21", n2, n1, true);
  sys.B1 = read_block(dir, "B1", n1, nm, true);
  sys.C1 = read_block(dir, "C1", np, n1, true);
  sys.B2 = read_block(dir, "B2", n2, nm, false);
  sys.C2 = read_block(dir, "C2", np, n2, false);
  sys.D = read_block(dir, "D", np, nm, false);
  return sys;
}

void write_rom_bundle(const std::string& dir, const ReducedModel& rom,
                      const InterpolationData& data, const json& provenance) {
  ensure_dir(dir);
  json manifest;
  manifest["format"] = kFormat;
  manifest["kind"] = "rom";
  manifest["dims"] = {{"r", rom.order()},
                      {"m", rom.m()},
                      {"p", rom.p()},
                      {"basis_rows", rom.V.rows()}};
  manifest["galerkin"] = rom.galerkin;
  manifest["interpolation"] = {{"points", complex_list(data.points)},
                               {"right_dirs", cvec_list(data.right_dirs)},
                               {"left_dirs", cvec_list(data.left_dirs)},
                               {"conjugate_closed", data.conjugate_closed}};
  manifest["provenance"] = provenance.is_null() ? json{{"kind", "external"}} : provenance;
  write_json_file((fs::path(dir) / "manifest.json").string(), manifest);

  write_block(dir, "Er", rom.Er);
  write_block(dir, "Ar", rom.Ar);
  write_block(dir, "Br", rom.Br);
  write_block(dir, "Cr", rom.Cr);
  write_optional_block(dir, "Dr", rom.Dr);
  write_block(dir, "V", rom.V);
  write_block(dir, "W", rom.W);
}

ReducedModel read_rom_bundle(const std::string& dir, InterpolationData* data) {
  const json m = read_manifest(dir);
  if (m["kind"] != "rom")
    throw Error(ErrC::parse_error, "expected a reduced-model bundle in " + dir);
  const Eigen::Index r = dims_field(m, "r").get<Eigen::Index>();
  const Eigen::Index nm = dims_field(m, "m").get<Eigen::Index>();
  const Eigen::Index np = dims_field(m, "p").get<Eigen::Index>();
  const Eigen::Index brows = dims_field(m, "basis_rows").get<Eigen::Index>();
  ReducedModel rom;
  rom.Er = read_block(dir, "Er", r, r, true);
  rom.Ar = read_block(dir, "Ar", r, r, true);
  rom.Br = read_block(dir, "Br", r, nm, true);
  rom.Cr = read_block(dir, "Cr", np, r, true);
  rom.Dr = read_block(dir, "Dr", np, nm, false);
  rom.V = read_block(dir, "V", brows, r, true);
  if (!m.contains("galerkin") || !m["galerkin"].is_boolean())
    throw Error(ErrC::parse_error, "manifest missing galerkin flag in " + dir);
  rom.galerkin = m["galerkin"].get<bool>();
  if (fs::exists(block_path(dir, "W")))
    rom.W = read_block(dir, "W", brows, r, true);
  else if (rom.galerkin)
    rom.W = rom.V;
  else
    throw Error(ErrC::io_error, "missing required block " + block_path(dir, "W"));
  if (data != nullptr) {
    if (!m.contains("interpolation"))
      throw Error(ErrC::parse_error, "manifest missing interpolation data in " + dir);
    const json& it = m["interpolation"];
    data->points = parse_complex_list(it.value("points", json::array()), "interpolation points");
    data->right_dirs = parse_cvec_list(it.value("right_dirs", json::array()), "right directions");
    data->left_dirs = parse_cvec_list(it.value("left_dirs", json::array()), "left directions");
    data->conjugate_closed = it.value("conjugate_closed", false);
  }
  return rom;
}

void write_lqr_bundle(const std::string& dir, const LqrResult& res, const json& provenance) {
  ensure_dir(dir);
  json manifest;
  manifest["format"] = kFormat;
  manifest["kind"] = "lqr";
  manifest["dims"] = {{"m", res.K_reduced.rows()},
                      {"r", res.K_reduced.cols()},
                      {"n1", res.K_full.cols()}};
  manifest["residual_norm"] = res.residual_norm;
  manifest["closed_loop_abscissa"] = res.closed_loop_abscissa;
  manifest["provenance"] = provenance.is_null() ? json{{"kind", "external"}} : provenance;
  write_json_file((fs::path(dir) / "manifest.json").string(), manifest);

  write_block(dir, "P", res.P);
  write_block(dir, "K_reduced", res.K_reduced);
  write_optional_block(dir, "K_full", res.K_full);
}

LqrResult read_lqr_bundle(const std::string& dir) {
  const json m = read_manifest(dir);
  if (m["kind"] != "lqr")
    throw Error(ErrC::parse_error, "expected a gain bundle in " + dir);
  const Eigen::Index nm = dims_field(m, "m").get<Eigen::Index>();
  const Eigen::Index r = dims_field(m, "r").get<Eigen::Index>();
  const Eigen::Index n1 = dims_field(m, "n1").get<Eigen::Index>();
  LqrResult res;
  res.P = read_block(dir, "P", r, r, true);
  res.K_reduced = read_block(dir, "K_reduced", nm, r, true);
  res.K_full = read_block(dir, "K_full", nm, n1, false);
  if (!m.contains("residual_norm") || !m["residual_norm"].is_number())
    throw Error(ErrC::parse_error, "manifest missing residual_norm in " + dir);
  res.residual_norm = m["residual_norm"].get<double>();
  res.closed_loop_abscissa = m.value("closed_loop_abscissa", 0.0);
  return res;
}

}  // namespace mordae
