#include <algorithm>

#include "core/core.hpp"
#include "core/linalg.hpp"
#include "core/threads.hpp"
#include "reduction/reduction.hpp"

namespace mordae {

namespace {

bool cvec_equal(const CVec& a, const CVec& b) {
  return a.size() == b.size() && a == b;
}

// Indices of the points actually solved: real points stand alone; of each exact
// conjugate pair only the representative with Im >= 0 is kept.
std::vector<std::size_t> representatives(const InterpolationData& d, bool need_left) {
  std::vector<std::size_t> reps;
  std::vector<bool> consumed(d.size(), false);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (consumed[i]) continue;
    const Cplx s = d.points[i];
    if (s.imag() == 0.0 || !d.conjugate_closed) {
      reps.push_back(i);
      continue;
    }
    // find the exact conjugate partner
    bool found = false;
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (consumed[j]) continue;
      if (d.points[j] != std::conj(s)) continue;
      if (!cvec_equal(d.right_dirs[j], d.right_dirs[i].conjugate())) continue;
      if (need_left && !cvec_equal(d.left_dirs[j], d.left_dirs[i].conjugate())) continue;
      consumed[j] = true;
      found = true;
      break;
    }
    if (!found)
      throw Error(ErrC::bad_argument,
                  "conjugate_closed data: no exact conjugate partner for a point");
    reps.push_back(i);
  }
  return reps;
}

void check_data(const Index2System& sys, const InterpolationData& d, bool need_left) {
  if (d.size() == 0) throw Error(ErrC::bad_argument, "no interpolation points");
  if (d.right_dirs.size() != d.size())
    throw Error(ErrC::dimension_mismatch, "one right direction per point required");
  if (need_left && d.left_dirs.size() != d.size())
    throw Error(ErrC::dimension_mismatch, "one left direction per point required");
  for (const auto& b : d.right_dirs)
    if (b.size() != sys.m())
      throw Error(ErrC::dimension_mismatch, "right tangent direction has wrong length");
  if (need_left)
    for (const auto& c : d.left_dirs)
      if (c.size() != sys.p())
        throw Error(ErrC::dimension_mismatch, "left tangent direction has wrong length");
}

// Appends the real span of a solution column: one column for (numerically) real
// vectors, [Re, Im] for genuinely complex ones.
void append_real_columns(std::vector<Vec>& cols, const CVec& v, bool real_point) {
  if (real_point) {
    // residue from solving a real system in complex arithmetic
    if (v.imag().norm() > 1e-12 * std::max(v.norm(), 1e-300))
      throw Error(ErrC::internal_error, "real interpolation point produced a complex solution");
    cols.push_back(v.real());
    return;
  }
  cols.push_back(v.real());
  cols.push_back(v.imag());
}

Mat to_matrix(const std::vector<Vec>& cols, Eigen::Index rows) {
  Mat M(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) M.col(static_cast<Eigen::Index>(j)) = cols[j];
  return M;
}

}  // namespace

std::pair<Mat, Mat> build_bases(const Index2System& sys, const InterpolationData& data,
                                ReductionMode mode, double eps_svd) {
  require_valid(sys);
  const bool petrov = mode == ReductionMode::petrov_galerkin;
  check_data(sys, data, petrov);

  const auto reps = representatives(data, petrov);
  const auto n1 = sys.n1();
  const auto n2 = sys.n2();

  // Saddle solves at distinct shifts are independent; results land in
  // index-addressed slots so assembly order is fixed regardless of threading.
  std::vector<CVec> vs(reps.size()), ws(reps.size());
  parallel_for(reps.size(), [&](std::size_t k) {
    const std::size_t i = reps[k];
    SaddleFactor f(sys, data.points[i]);
    vs[k] = f.solve(sys.B1.cast<Cplx>() * data.right_dirs[i], CVec::Zero(n2)).head(n1);
    if (petrov)
      ws[k] = f.solve_transposed(sys.C1.transpose().cast<Cplx>() * data.left_dirs[i],
                                 CVec::Zero(n2))
                  .head(n1);
  });

  std::vector<Vec> vcols, wcols;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const bool real_point = data.points[reps[k]].imag() == 0.0;
    append_real_columns(vcols, vs[k], real_point);
    if (petrov) append_real_columns(wcols, ws[k], real_point);
  }

  Mat V = orth_columns(to_matrix(vcols, n1), eps_svd);
  if (V.cols() == 0) throw Error(ErrC::empty_basis, "interpolation basis is empty after compression");
  if (!petrov) return {V, V};

  Mat W = orth_columns(to_matrix(wcols, n1), eps_svd);
  if (W.cols() == 0) throw Error(ErrC::empty_basis, "left basis is empty after compression");
  const auto r = std::min(V.cols(), W.cols());
  return {V.leftCols(r), W.leftCols(r)};
}

InterpolationData close_conjugate(const InterpolationData& data) {
  InterpolationData out = data;
  out.conjugate_closed = true;
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Cplx s = data.points[i];
    if (s.imag() == 0.0) continue;
    bool present = false;
    for (std::size_t j = 0; j < n && !present; ++j)
      if (j != i && data.points[j] == std::conj(s) &&
          cvec_equal(data.right_dirs[j], data.right_dirs[i].conjugate()) &&
          (data.left_dirs.empty() ||
           cvec_equal(data.left_dirs[j], data.left_dirs[i].conjugate())))
        present = true;
    if (present) continue;
    out.points.push_back(std::conj(s));
    out.right_dirs.push_back(data.right_dirs[i].conjugate());
    if (!data.left_dirs.empty()) out.left_dirs.push_back(data.left_dirs[i].conjugate());
  }
  return out;
}

}  // namespace mordae
