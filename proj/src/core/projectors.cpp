#include "core/core.hpp"
#include "core/linalg.hpp"

namespace mordae {

Mat leray_velocity_projector(const Index2System& sys) {
  const auto n1 = sys.n1();
  if (sys.n2() == 0) return Mat::Identity(n1, n1);
  Eigen::PartialPivLU<Mat> e11_lu(sys.E11);
  const Mat X = e11_lu.solve(sys.A21.transpose());  // E11^-1 A21^T
  Eigen::PartialPivLU<Mat> s_lu(sys.A21 * X);
  return Mat::Identity(n1, n1) - X * s_lu.solve(sys.A21);
}

SpectralProjectors projectors_index2(const Index2System& sys) {
  require_valid(sys);
  const auto n1 = sys.n1(), n2 = sys.n2();
  const auto n = n1 + n2;

  SpectralProjectors pr;
  if (n2 == 0) {
    pr.Pl = Mat::Identity(n, n);
    pr.Pr = Mat::Identity(n, n);
    pr.Vinf = Mat(n, 0);
    pr.Winf = Mat(n, 0);
    return pr;
  }

  Eigen::PartialPivLU<Mat> e11_lu(sys.E11);
  const Mat X = e11_lu.solve(sys.A21.transpose());  // E11^-1 A21^T
  // transpose-solves must be assigned directly (Eigen's Solve expression
  // cannot be nested), hence the named temporaries
  const Mat YtT = e11_lu.transpose().solve(sys.A21.transpose());
  const Mat Yt = YtT.transpose();  // A21 E11^-1
  Eigen::PartialPivLU<Mat> s_lu(sys.A21 * X);

  const Mat theta_r = Mat::Identity(n1, n1) - X * s_lu.solve(sys.A21);
  const Mat theta_l = Mat::Identity(n1, n1) - sys.A21.transpose() * s_lu.solve(Yt);

  pr.Pr = Mat::Zero(n, n);
  pr.Pr.topLeftCorner(n1, n1) = theta_r;
  pr.Pr.bottomLeftCorner(n2, n1) = -s_lu.solve(Yt * sys.A11 * theta_r);

  pr.Pl = Mat::Zero(n, n);
  pr.Pl.topLeftCorner(n1, n1) = theta_l;
  // -Theta_l A11 E11^-1 A21^T S^-1, with S^-1 applied from the right
  const Mat TAX = theta_l * sys.A11 * X;
  const Mat TAXs = s_lu.transpose().solve(TAX.transpose());
  pr.Pl.topRightCorner(n1, n2) = -TAXs.transpose();

  const Mat In = Mat::Identity(n, n);
  pr.Vinf = orth_columns(In - pr.Pr, kEpsSvd);
  pr.Winf = orth_columns((In - pr.Pl).transpose(), kEpsSvd);
  if (pr.Vinf.cols() != 2 * n2 || pr.Winf.cols() != 2 * n2)
    throw Error(ErrC::internal_error,
                "infinite deflating subspace has unexpected dimension");
  return pr;
}

}  // namespace mordae
