#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "core/types.hpp"

namespace mordae {

// Orthonormal basis of the column span, truncated at the relative singular-value
// threshold tol.  Returns an n x r matrix with orthonormal (hence unit-norm) columns.
inline Mat orth_columns(const Mat& M, double tol) {
  if (M.size() == 0) return Mat(M.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return Mat(M.rows(), 0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > tol * sv(0)) ++r;
  return svd.matrixU().leftCols(r);
}

inline Eigen::Index numerical_rank(const Mat& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > tol * sv(0)) ++r;
  return r;
}

// Reciprocal condition estimate that stays reliable on (nearly) singular input:
// Eigen's norm estimator can report O(1) values when a pivot is exactly zero, so
// combine it with the U-diagonal ratio and map non-finite results to zero.
template <typename MatrixType>
double rcond_guarded(const Eigen::PartialPivLU<MatrixType>& lu) {
  const auto piv = lu.matrixLU().diagonal().cwiseAbs().eval();
  const double pmax = piv.maxCoeff();
  if (!(pmax > 0.0) || !std::isfinite(pmax)) return 0.0;
  const double pivot_ratio = piv.minCoeff() / pmax;
  const double rc = lu.rcond();
  if (!std::isfinite(rc) || !std::isfinite(pivot_ratio)) return 0.0;
  return std::min(rc, pivot_ratio);
}

}  // namespace mordae
