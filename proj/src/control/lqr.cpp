#include <cmath>
#include <limits>
#include <sstream>

#include "control/control.hpp"
#include "core/core.hpp"
#include "core/linalg.hpp"
#include "transfer/transfer.hpp"

namespace mordae {

namespace {

double one_norm(const Mat& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().colwise().sum().maxCoeff();
}

void require_spd_weight(const Mat& R, Eigen::Index m) {
  if (R.rows() != m || R.cols() != m)
    throw Error(ErrC::dimension_mismatch, "input weight must be m x m");
  if ((R - R.transpose()).norm() > 1e-12 * std::max(1.0, R.norm()))
    throw Error(ErrC::indefinite_weight, "input weight is not symmetric");
  Eigen::LLT<Mat> llt(R);
  if (llt.info() != Eigen::Success)
    throw Error(ErrC::indefinite_weight, "input weight is not positive definite");
}

std::string hamiltonian_diagnostics(const Mat& H) {
  Eigen::EigenSolver<Mat> es(H, /*computeEigenvectors=*/false);
  std::ostringstream os;
  if (es.info() != Eigen::Success) {
    os << "Hamiltonian eigensolve failed";
    return os.str();
  }
  const CVec lam = es.eigenvalues();
  double max_mag = 0.0, min_re = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lam.size(); ++i) max_mag = std::max(max_mag, std::abs(lam(i)));
  int near_axis = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    min_re = std::min(min_re, std::abs(lam(i).real()));
    if (std::abs(lam(i).real()) <= 1e-9 * std::max(1.0, max_mag)) ++near_axis;
  }
  os << "Hamiltonian spectrum: " << near_axis << " eigenvalue(s) within 1e-9 of the imaginary axis, "
     << "min |Re| = " << min_re << ", max |lambda| = " << max_mag;
  return os.str();
}

// Newton iteration with determinant scaling for sign(H).
Mat matrix_sign(const Mat& H, bool& converged) {
  const Eigen::Index n = H.rows();
  Mat Z = H;
  converged = false;
  for (int it = 0; it < 200; ++it) {
    Eigen::PartialPivLU<Mat> lu(Z);
    double log_det = 0.0;
    bool singular = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = std::abs(lu.matrixLU()(i, i));
      if (d < 1e-300) {
        singular = true;
        break;
      }
      log_det += std::log(d);
    }
    if (singular) return Z;  // eigenvalue pinned on the imaginary axis
    const double ck = std::exp(-log_det / static_cast<double>(n));
    const Mat Zi = lu.solve(Mat::Identity(n, n));
    const Mat Zn = 0.5 * (ck * Z + Zi / ck);
    const double delta = one_norm(Zn - Z);
    const double scale = one_norm(Z);
    Z = Zn;
    if (delta < 1e-14 * scale) {
      converged = true;
      break;
    }
  }
  return Z;
}

// A^T X + X A + Q = 0 (Q symmetric) via complex Schur of A and forward substitution;
// in Schur coordinates T^H + T(j,j) I is lower triangular.
Mat lyap_dense(const Mat& A, const Mat& Q) {
  const Eigen::Index n = A.rows();
  Eigen::ComplexSchur<CMat> schur(A.cast<Cplx>());
  if (schur.info() != Eigen::Success)
    throw Error(ErrC::eig_failure, "Schur decomposition failed in the Lyapunov solve");
  const CMat& T = schur.matrixT();
  const CMat& U = schur.matrixU();
  const CMat Qt = U.adjoint() * Q.cast<Cplx>() * U;
  CMat X = CMat::Zero(n, n);
  CMat M = T.adjoint();
  for (Eigen::Index j = 0; j < n; ++j) {
    CVec rhs = -Qt.col(j);
    if (j > 0) rhs -= X.leftCols(j) * T.block(0, j, j, 1);
    const Cplx shift = T(j, j);
    for (Eigen::Index i = 0; i < n; ++i) M(i, i) = std::conj(T(i, i)) + shift;
    X.col(j) = M.triangularView<Eigen::Lower>().solve(rhs);
  }
  return (U * X * U.adjoint()).real();
}

// Kleinman iteration on the standard-form equation As^T X + X As - X G X + Q = 0.
Mat care_newton(const Mat& As, const Mat& Bs, const Mat& Q, const Eigen::LLT<Mat>& rllt,
                const Mat& R, Mat X) {
  for (int it = 0; it < 30; ++it) {
    const Mat K = rllt.solve(Bs.transpose() * X);
    const Mat Acl = As - Bs * K;
    const Mat Qk = Q + K.transpose() * R * K;
    Mat Xn = lyap_dense(Acl, Qk);
    Xn = 0.5 * (Xn + Xn.transpose()).eval();
    const double delta = one_norm(Xn - X);
    const double scale = std::max(1.0, one_norm(X));
    X = Xn;
    if (delta <= 1e-15 * scale) break;
  }
  return X;
}

}  // namespace

Mat solve_care(const Mat& E, const Mat& A, const Mat& B, const Mat& C, const Mat& R) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || B.rows() != n ||
      (C.size() != 0 && C.cols() != n))
    throw Error(ErrC::dimension_mismatch, "Riccati blocks have inconsistent dimensions");
  require_spd_weight(R, B.cols());
  if (n == 0) return Mat::Zero(0, 0);

  Eigen::PartialPivLU<Mat> lue(E);
  if (rcond_guarded(lue) < 1e-14)
    throw Error(ErrC::singular_reduced_pencil, "mass matrix in the Riccati solve is numerically singular");

  const Mat As = lue.solve(A);
  const Mat Bs = lue.solve(B);
  const Mat Q = C.size() == 0 ? Mat::Zero(n, n) : Mat(C.transpose() * C);
  // An exactly zero state weight on a stable pencil has the exact stabilizing
  // solution P = 0, and the residual certificate admits no perturbed alternative.
  if (Q.norm() == 0.0 && spectral_abscissa(A, E) < 0.0) return Mat::Zero(n, n);
  Eigen::LLT<Mat> rllt(R);
  const Mat G = Bs * rllt.solve(Mat(Bs.transpose()));

  Mat H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = As;
  H.topRightCorner(n, n) = -G;
  H.bottomLeftCorner(n, n) = -Q;
  H.bottomRightCorner(n, n) = -As.transpose();

  bool converged = false;
  const Mat W = matrix_sign(H, converged);
  if (!converged)
    throw Error(ErrC::no_stabilizing_solution,
                "sign iteration did not converge; " + hamiltonian_diagnostics(H));

  // stable invariant subspace: solve [W12; W22 + I] X = -[W11 + I; W21]
  Mat M(2 * n, n), N(2 * n, n);
  M.topRows(n) = W.topRightCorner(n, n);
  M.bottomRows(n) = W.bottomRightCorner(n, n) + Mat::Identity(n, n);
  N.topRows(n) = W.topLeftCorner(n, n) + Mat::Identity(n, n);
  N.bottomRows(n) = W.bottomLeftCorner(n, n);
  Mat X = Eigen::ColPivHouseholderQR<Mat>(M).solve(-N);
  X = 0.5 * (X + X.transpose()).eval();

  X = care_newton(As, Bs, Q, rllt, R, X);

  // back to the generalized solution P = E^-T X E^-1
  Mat Y = lue.transpose().solve(X);
  Mat Pt = lue.transpose().solve(Y.transpose());
  Mat P = Pt.transpose();
  P = 0.5 * (P + P.transpose()).eval();
  return P;
}

LqrResult solve_lqr(const LqrProblem& prob) {
  const ReducedModel& rom = prob.rom;
  const Eigen::Index r = rom.order();
  require_spd_weight(prob.R, rom.m());

  LqrResult res;
  res.P = solve_care(rom.Er, rom.Ar, rom.Br, rom.Cr, prob.R);
  Eigen::LLT<Mat> rllt(prob.R);
  res.K_reduced = rllt.solve(rom.Br.transpose() * res.P * rom.Er);

  const Mat APE = rom.Ar.transpose() * res.P * rom.Er;
  const Mat Q = rom.Cr.size() == 0 ? Mat::Zero(r, r) : Mat(rom.Cr.transpose() * rom.Cr);
  const Mat EPB = rom.Er.transpose() * res.P * rom.Br;
  const Mat residual = APE + APE.transpose() - EPB * rllt.solve(Mat(EPB.transpose())) + Q;
  res.residual_norm = residual.norm();

  res.closed_loop_abscissa = spectral_abscissa(rom.Ar - rom.Br * res.K_reduced, rom.Er);
  if (!(res.closed_loop_abscissa < 0.0)) {
    Mat H(2 * r, 2 * r);
    Eigen::PartialPivLU<Mat> lue(rom.Er);
    const Mat As = lue.solve(rom.Ar);
    const Mat Bs = lue.solve(rom.Br);
    H.topLeftCorner(r, r) = As;
    H.topRightCorner(r, r) = -Bs * rllt.solve(Mat(Bs.transpose()));
    H.bottomLeftCorner(r, r) = -Q;
    H.bottomRightCorner(r, r) = -As.transpose();
    std::ostringstream os;
    os << "closed reduced pencil is not asymptotically stable (abscissa = "
       << res.closed_loop_abscissa << "); " << hamiltonian_diagnostics(H);
    throw Error(ErrC::no_stabilizing_solution, os.str());
  }
  if (res.residual_norm > 1e-8 * (APE.norm() + Q.norm()))
    throw Error(ErrC::no_stabilizing_solution,
                "Riccati residual exceeds the guaranteed bound (residual = " +
                    std::to_string(res.residual_norm) + ")");

  if (rom.V.cols() == r)
    res.K_full = res.K_reduced * rom.V.transpose();
  return res;
}

Mat lift_gain(const LqrResult& result, const ReducedModel& rom) {
  if (rom.V.cols() != result.K_reduced.cols())
    throw Error(ErrC::dimension_mismatch, "reduced gain does not match the basis column count");
  return result.K_reduced * rom.V.transpose();
}

}  // namespace mordae
