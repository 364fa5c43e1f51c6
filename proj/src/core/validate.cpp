#include "core/core.hpp"

#include <Eigen/SVD>

#include "core/linalg.hpp"

namespace mordae {

namespace {

void check_dimensions(const Index2System& s) {
  const auto n1 = s.E11.rows(), n2 = s.A21.rows(), m = s.B1.cols(), p = s.C1.rows();
  auto fail = [](const std::string& what) {
    throw Error(ErrC::dimension_mismatch, "dimension mismatch: " + what);
  };
  if (s.E11.cols() != n1) fail("E11 must be square");
  if (s.A11.rows() != n1 || s.A11.cols() != n1) fail("A11 must be n1 x n1");
  if (s.A21.cols() != n1) fail("A21 must be n2 x n1");
  if (n2 > n1) fail("n2 exceeds n1");
  if (s.B1.rows() != n1) fail("B1 must have n1 rows");
  if (s.B2.size() > 0 && (s.B2.rows() != n2 || s.B2.cols() != m)) fail("B2 must be n2 x m");
  if (s.C1.cols() != n1) fail("C1 must have n1 columns");
  if (s.C2.size() > 0 && (s.C2.rows() != p || s.C2.cols() != n2)) fail("C2 must be p x n2");
  if (s.D.size() > 0 && (s.D.rows() != p || s.D.cols() != m)) fail("D must be p x m");
}

}  // namespace

ValidationReport validate_index2(const Index2System& sys) {
  check_dimensions(sys);

  ValidationReport rep;
  rep.n1 = sys.n1();
  rep.n2 = sys.n2();
  rep.m = sys.m();
  rep.p = sys.p();

  Eigen::PartialPivLU<Mat> e11_lu(sys.E11);
  rep.e11_rcond = rcond_guarded(e11_lu);
  if (!(rep.e11_rcond > kEpsRank)) {
    rep.code = ErrC::singular_mass;
    rep.message = "singular-mass: E11 factorization is numerically singular";
    return rep;
  }

  if (sys.n2() > 0) {
    Eigen::JacobiSVD<Mat> svd(sys.A21);
    const auto& sv = svd.singularValues();
    rep.a21_sigma_ratio = sv(sv.size() - 1) / sv(0);
    if (!(sv(0) > 0.0) || rep.a21_sigma_ratio <= kEpsRank) {
      rep.code = ErrC::rank_deficient_constraint;
      rep.message = "rank-deficient-constraint: A21 does not have full row rank";
      return rep;
    }

    const Mat S = sys.A21 * e11_lu.solve(sys.A21.transpose());
    Eigen::PartialPivLU<Mat> s_lu(S);
    rep.schur_rcond = rcond_guarded(s_lu);
    if (!(rep.schur_rcond > kEpsRank)) {
      rep.code = ErrC::singular_schur;
      rep.message = "singular-schur: A21 E11^-1 A21^T is numerically singular";
      return rep;
    }
  } else {
    rep.a21_sigma_ratio = 1.0;
    rep.schur_rcond = 1.0;
  }

  rep.ok = true;
  return rep;
}

void require_valid(const Index2System& sys) {
  ValidationReport rep = validate_index2(sys);
  if (!rep.ok) throw Error(rep.code, rep.message);
}

}  // namespace mordae
