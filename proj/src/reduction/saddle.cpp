#include "reduction/reduction.hpp"

#include "core/core.hpp"
#include "core/linalg.hpp"

namespace mordae {

SaddleFactor::SaddleFactor(const Index2System& sys, Cplx sigma)
    : sigma_(sigma), rowscale_(std::max(1.0, std::abs(sigma))), n1_(sys.n1()), n2_(sys.n2()) {
  const auto n = n1_ + n2_;
  // The raw saddle matrix has condition number O(|sigma|^2) even far from any
  // eigenvalue; scaling the velocity rows by 1/|sigma| removes one factor, so the
  // rcond guard keeps rejecting genuine singular shifts without tripping at the
  // large real shifts used for polynomial-part probing.  Row scaling leaves the
  // solution unchanged.
  K_ = CMat::Zero(n, n);
  K_.topLeftCorner(n1_, n1_) =
      (sigma * sys.E11.cast<Cplx>() - sys.A11.cast<Cplx>()) / rowscale_;
  if (n2_ > 0) {
    K_.topRightCorner(n1_, n2_) = sys.A21.transpose().cast<Cplx>() / rowscale_;
    K_.bottomLeftCorner(n2_, n1_) = sys.A21.cast<Cplx>();
  }
  lu_.compute(K_);
  if (!(rcond_guarded(lu_) > 1e-14))
    throw Error(ErrC::singular_shift,
                "singular-shift: saddle matrix is numerically singular at sigma");
}

CVec SaddleFactor::check(const CVec& x, const CVec& rhs, double rhs_norm,
                         bool transposed) const {
  // Normwise backward error of the original (unscaled) system; the solution norm
  // enters the denominator because solutions legitimately dwarf the data at large
  // shifts.  The forward path scales the top rhs block by 1/rowscale_, so the top
  // residual block is unscaled first; the transposed path already produces the
  // original residual.
  CVec resid = transposed ? CVec(K_.transpose() * x - rhs) : CVec(K_ * x - rhs);
  if (!transposed) resid.head(n1_) *= rowscale_;
  const double kn = rowscale_ * K_.topRows(n1_).norm() + K_.bottomRows(n2_).norm();
  const double rel = resid.norm() / std::max(rhs_norm + kn * x.norm(), 1e-300);
  if (!(rel <= 1e-10))
    throw Error(ErrC::singular_shift,
                "singular-shift: saddle solve residual " + std::to_string(rel) +
                    " exceeds 1e-10 (sigma too close to a pole)");
  return x;
}

CVec SaddleFactor::solve(const CVec& top, const CVec& bottom) const {
  CVec rhs(n1_ + n2_);
  rhs << top / rowscale_, bottom;
  const double orig_norm = std::sqrt(top.squaredNorm() + bottom.squaredNorm());
  return check(lu_.solve(rhs), rhs, orig_norm, false);
}

CVec SaddleFactor::solve_transposed(const CVec& top, const CVec& bottom) const {
  // K = D^-1 Khat with D = diag(I/rowscale, I): K^T w = c  <=>  Khat^T v = c with
  // w = D v, i.e. the velocity block of v is scaled down afterwards.
  CVec rhs(n1_ + n2_);
  rhs << top, bottom;
  CVec v = lu_.transpose().solve(rhs);
  check(v, rhs, rhs.norm(), true);
  v.head(n1_) /= rowscale_;
  return v;
}

CVec saddle_solve_right(const Index2System& sys, Cplx sigma, const CVec& b) {
  if (b.size() != sys.m())
    throw Error(ErrC::dimension_mismatch, "right tangent direction has wrong length");
  SaddleFactor f(sys, sigma);
  const CVec sol = f.solve(sys.B1.cast<Cplx>() * b, CVec::Zero(sys.n2()));
  return sol.head(sys.n1());
}

CVec saddle_solve_left(const Index2System& sys, Cplx sigma, const CVec& c) {
  if (c.size() != sys.p())
    throw Error(ErrC::dimension_mismatch, "left tangent direction has wrong length");
  SaddleFactor f(sys, sigma);
  const CVec sol = f.solve_transposed(sys.C1.transpose().cast<Cplx>() * c, CVec::Zero(sys.n2()));
  return sol.head(sys.n1());
}

}  // namespace mordae
