#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>

#include "core/core.hpp"
#include "transfer/transfer.hpp"

namespace mordae {

namespace {

// Finite eigenvalues of the pencil (A, E) by dense QZ, with infinite eigenvalues
// filtered on the reported alpha/beta ratio.
std::pair<std::vector<Cplx>, int> qz_finite(const Mat& A, const Mat& E) {
  Eigen::GeneralizedEigenSolver<Mat> ges;
  ges.compute(A, E, /*computeEigenvectors=*/false);
  if (ges.info() != Eigen::Success)
    throw Error(ErrC::eig_failure, "generalized eigensolver did not converge");

  const auto& alphas = ges.alphas();
  const auto& betas = ges.betas();
  double beta_max = 0.0;
  for (Eigen::Index i = 0; i < betas.size(); ++i)
    beta_max = std::max(beta_max, std::abs(betas(i)));

  std::vector<Cplx> finite;
  int infinite = 0;
  for (Eigen::Index i = 0; i < betas.size(); ++i) {
    const double beta = betas(i);
    const bool reported_infinite =
        beta == 0.0 || (beta_max > 0.0 && std::abs(beta) < kEpsInf * beta_max);
    if (reported_infinite) {
      ++infinite;
      continue;
    }
    const Cplx lambda = alphas(i) / beta;
    if (std::abs(lambda) > 1.0 / kEpsInf) {
      ++infinite;
      continue;
    }
    finite.push_back(lambda);
  }
  return {finite, infinite};
}

PoleReport make_report(std::vector<Cplx> poles, int excluded) {
  for (Cplx& z : poles)  // canonicalize -0.0 so reports and pair checks are clean
    if (z.imag() == 0.0) z = Cplx(z.real(), 0.0);
  std::sort(poles.begin(), poles.end(), [](const Cplx& a, const Cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  PoleReport rep;
  rep.finite_poles = std::move(poles);
  rep.unstable_count = static_cast<int>(
      std::count_if(rep.finite_poles.begin(), rep.finite_poles.end(),
                    [](const Cplx& z) { return z.real() > 0.0; }));
  rep.note = "infinite eigenvalues excluded (" + std::to_string(excluded) + " filtered)";
  return rep;
}

// Orthonormal basis of ker(A21).
Mat kernel_basis(const Mat& A21, Eigen::Index n1) {
  if (A21.rows() == 0) return Mat::Identity(n1, n1);
  Eigen::JacobiSVD<Mat> svd(A21, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > kEpsRank * sv(0)) ++rank;
  return svd.matrixV().rightCols(n1 - rank);
}

}  // namespace

PoleReport finite_poles(const Index2System& sys) {
  require_valid(sys);
  // The hidden dynamics live on ker(A21): with Z an orthonormal kernel basis, the
  // finite spectrum is exactly eig(Z^T A11 Z, Z^T E11 Z) - no infinite eigenvalues
  // enter the solve at all.
  const Mat Z = kernel_basis(sys.A21, sys.n1());
  auto [finite, infinite] = qz_finite(Z.transpose() * sys.A11 * Z, Z.transpose() * sys.E11 * Z);
  return make_report(std::move(finite), infinite);
}

PoleReport finite_poles(const DescriptorSystem& sys) {
  auto [finite, infinite] = qz_finite(sys.A, sys.E);
  return make_report(std::move(finite), infinite);
}

PoleReport finite_poles(const ReducedModel& rom) {
  auto [finite, infinite] = qz_finite(rom.Ar, rom.Er);
  return make_report(std::move(finite), infinite);
}

double spectral_abscissa(const Mat& A, const Mat& E) {
  auto [finite, infinite] = qz_finite(A, E);
  (void)infinite;
  double a = -std::numeric_limits<double>::infinity();
  for (const Cplx& z : finite) a = std::max(a, z.real());
  return a;
}

}  // namespace mordae
