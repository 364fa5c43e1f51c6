#include <fstream>

#include "io/io.hpp"

namespace mordae {

json interpolation_report_json(const InterpolationReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"sigma", {e.sigma.real(), e.sigma.imag()}},
                       {"right_residual", e.right_residual},
                       {"left_residual", e.left_residual},
                       {"hermite_residual", e.hermite_residual},
                       {"hermite_checked", e.hermite_checked}});
  json j;
  j["entries"] = entries;
  j["lagrange_only"] = rep.lagrange_only;
  j["max_right"] = rep.max_right;
  j["max_left"] = rep.max_left;
  j["max_hermite"] = rep.max_hermite;
  return j;
}

json pole_report_json(const PoleReport& rep) {
  json j;
  j["finite_poles"] = complex_list(rep.finite_poles);
  j["unstable_count"] = rep.unstable_count;
  j["note"] = rep.note;
  return j;
}

json validation_report_json(const ValidationReport& rep) {
  json j;
  j["ok"] = rep.ok;
  j["code"] = static_cast<int>(rep.code);
  j["message"] = rep.message;
  j["dims"] = {{"n1", rep.n1}, {"n2", rep.n2}, {"m", rep.m}, {"p", rep.p}};
  j["e11_rcond"] = rep.e11_rcond;
  j["a21_sigma_ratio"] = rep.a21_sigma_ratio;
  j["schur_rcond"] = rep.schur_rcond;
  return j;
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrC::io_error, "cannot open for writing: " + path);
  return out;
}

void finish_csv(std::ofstream& out, const std::string& path) {
  if (!out) throw Error(ErrC::io_error, "write failed: " + path);
}

}  // namespace

void write_sigma_csv(const std::string& path, const FrequencyResponse& fr,
                     Eigen::Index p, Eigen::Index m) {
  std::ofstream out = open_csv(path);
  out << "omega,ok,sigma_max";
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      out << ",g_re_" << (i + 1) << '_' << (j + 1) << ",g_im_" << (i + 1) << '_' << (j + 1);
  out << '\n';
  for (std::size_t k = 0; k < fr.omegas.size(); ++k) {
    out << fmt_double(fr.omegas[k]) << ',' << static_cast<int>(fr.ok[k]) << ','
        << fmt_double(fr.norms[k]);
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < m; ++j) {
        const Cplx g = fr.values[k](i, j);
        out << ',' << fmt_double(g.real()) << ',' << fmt_double(g.imag());
      }
    out << '\n';
  }
  finish_csv(out, path);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_csv(path);
  const Eigen::Index m = traj.u.empty() ? 0 : traj.u.front().size();
  const Eigen::Index p = traj.y.empty() ? 0 : traj.y.front().size();
  out << 't';
  for (Eigen::Index i = 0; i < m; ++i) out << ",u_" << (i + 1);
  out << ",x1_norm";
  for (Eigen::Index i = 0; i < p; ++i) out << ",y_" << (i + 1);
  out << '\n';
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    out << fmt_double(traj.t[k]);
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << fmt_double(traj.u[k](i));
    out << ',' << fmt_double(traj.x1[k].norm());
    for (Eigen::Index i = 0; i < p; ++i) out << ',' << fmt_double(traj.y[k](i));
    out << '\n';
  }
  finish_csv(out, path);
}

void write_gains_csv(const std::string& path, const GainFields& fields) {
  std::ofstream out = open_csv(path);
  const Eigen::Index m = fields.hu.rows();
  out << "component,i,j,x,y";
  for (Eigen::Index a = 0; a < m; ++a) out << ",h_" << (a + 1);
  out << '\n';
  for (Eigen::Index k = 0; k < fields.hu.cols(); ++k) {
    out << "u," << fields.ui[k] << ',' << fields.uj[k] << ',' << fmt_double(fields.ux[k]) << ','
        << fmt_double(fields.uy[k]);
    for (Eigen::Index a = 0; a < m; ++a) out << ',' << fmt_double(fields.hu(a, k));
    out << '\n';
  }
  for (Eigen::Index k = 0; k < fields.hv.cols(); ++k) {
    out << "v," << fields.vi[k] << ',' << fields.vj[k] << ',' << fmt_double(fields.vx[k]) << ','
        << fmt_double(fields.vy[k]);
    for (Eigen::Index a = 0; a < m; ++a) out << ',' << fmt_double(fields.hv(a, k));
    out << '\n';
  }
  finish_csv(out, path);
}

}  // namespace mordae
