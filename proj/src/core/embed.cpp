#include "core/core.hpp"

namespace mordae {

namespace {

// Optional blocks (B2, C2, D) may be empty; materialize zeros of the right shape.
Mat or_zero(const Mat& m, Eigen::Index rows, Eigen::Index cols) {
  if (m.size() > 0) return m;
  return Mat::Zero(rows, cols);
}

}  // namespace

DescriptorSystem embed_index2(const Index2System& sys) {
  require_valid(sys);
  const auto n1 = sys.n1(), n2 = sys.n2(), m = sys.m(), p = sys.p();
  const auto n = n1 + n2;

  DescriptorSystem d;
  d.E = Mat::Zero(n, n);
  d.E.topLeftCorner(n1, n1) = sys.E11;

  d.A = Mat::Zero(n, n);
  d.A.topLeftCorner(n1, n1) = sys.A11;
  d.A.topRightCorner(n1, n2) = sys.A21.transpose();
  d.A.bottomLeftCorner(n2, n1) = sys.A21;

  d.B = Mat::Zero(n, m);
  d.B.topRows(n1) = sys.B1;
  d.B.bottomRows(n2) = or_zero(sys.B2, n2, m);

  d.C = Mat::Zero(p, n);
  d.C.leftCols(n1) = sys.C1;
  d.C.rightCols(n2) = or_zero(sys.C2, p, n2);

  d.D = or_zero(sys.D, p, m);
  return d;
}

Mat polynomial_part(const Index2System& sys) {
  require_valid(sys);
  const auto n2 = sys.n2(), m = sys.m(), p = sys.p();
  const Mat D = or_zero(sys.D, p, m);
  if (n2 == 0) return D;

  Eigen::PartialPivLU<Mat> e11_lu(sys.E11);
  const Mat S = sys.A21 * e11_lu.solve(sys.A21.transpose());
  Eigen::PartialPivLU<Mat> s_lu(S);

  const Mat C2 = or_zero(sys.C2, p, n2);
  const Mat B2 = or_zero(sys.B2, n2, m);

  // P(s) = D - C2 S^-1 A21 E11^-1 B1  plus B2 corrections (constant terms only).
  Mat P = D - C2 * s_lu.solve(sys.A21 * e11_lu.solve(sys.B1));

  if (B2.norm() > 0.0) {
    // s-linear coefficient -C2 S^-1 B2 must vanish; otherwise the polynomial part
    // has degree >= 1, which is out of scope for this system class.
    const Mat P1 = C2 * s_lu.solve(B2);
    const double scale = std::max({1.0, C2.norm(), B2.norm()});
    if (P1.norm() > 1e-12 * scale)
      throw Error(ErrC::polynomial_degree,
                  "polynomial part has degree >= 1 (C2 S^-1 B2 != 0); only constant "
                  "polynomial parts are supported");
    // Constant contribution of the particular solution x1p = -E11^-1 A21^T S^-1 B2:
    //   C1 x1p - C2 S^-1 A21 E11^-1 A11 x1p.
    const Mat x1p = -e11_lu.solve(sys.A21.transpose() * s_lu.solve(B2));
    P += sys.C1 * x1p - C2 * s_lu.solve(sys.A21 * e11_lu.solve(sys.A11 * x1p));
  }
  return P;
}

}  // namespace mordae
