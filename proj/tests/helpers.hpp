#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/core.hpp"
#include "core/rng.hpp"

namespace testutil {

using namespace mordae;

inline double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_mat(const Mat& got, const Mat& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

inline double rel_cmat(const CMat& got, const CMat& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

inline Mat gauss_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.gaussian();
  return M;
}

inline CVec gauss_cvec(Rng& rng, Eigen::Index n, bool complex_entries = true) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = rng.gaussian();
    v(i) = Cplx(re, complex_entries ? rng.gaussian() : 0.0);
  }
  return v;
}

// Dense well-posed index-2 system with generic (not necessarily stable) dynamics:
// diagonally dominant symmetric E11, full-row-rank A21.
inline Index2System dense_system(Eigen::Index n1, Eigen::Index n2, Eigen::Index m,
                                 Eigen::Index p, std::uint64_t seed) {
  Rng rng(seed);
  const double sn = std::sqrt(static_cast<double>(n1));
  Index2System s;
  const Mat F = gauss_mat(rng, n1, n1);
  s.E11 = Mat::Identity(n1, n1) + 0.1 * (F + F.transpose()) / sn;
  s.A11 = -Mat::Identity(n1, n1) + 0.5 * gauss_mat(rng, n1, n1) / sn;
  s.A21 = gauss_mat(rng, n2, n1);
  s.B1 = gauss_mat(rng, n1, m);
  s.C1 = gauss_mat(rng, p, n1);
  return s;
}

// Conjugate-closed interpolation data: for each base point with im > 0 the
// conjugate point with conjugated directions is appended; real points get real
// directions.
inline InterpolationData random_interp_data(const std::vector<Cplx>& base_points,
                                            Eigen::Index m, Eigen::Index p,
                                            std::uint64_t seed) {
  Rng rng(seed);
  InterpolationData d;
  d.conjugate_closed = true;
  for (const Cplx& s : base_points) {
    const bool is_real = s.imag() == 0.0;
    CVec b = gauss_cvec(rng, m, !is_real);
    CVec c = gauss_cvec(rng, p, !is_real);
    d.points.push_back(s);
    d.right_dirs.push_back(b);
    d.left_dirs.push_back(c);
    if (!is_real) {
      d.points.push_back(std::conj(s));
      d.right_dirs.push_back(b.conjugate());
      d.left_dirs.push_back(c.conjugate());
    }
  }
  return d;
}

inline ErrC thrown_code(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code;
  }
  return ErrC::ok;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "mordae-test-XXXXXX").string();
    char* raw = mkdtemp(tmpl.data());
    if (raw == nullptr) throw std::runtime_error("mkdtemp failed");
    path = raw;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string str() const { return path.string(); }
  std::string sub(const char* name) const { return (path / name).string(); }
};

}  // namespace testutil
