#pragma once

#include <utility>

#include "core/types.hpp"

namespace mordae {

// One factorization of the shifted saddle matrix
//   K(sigma) = [[sigma*E11 - A11, A21^T], [A21, 0]]
// serving right solves, transposed solves (for the left tangential systems), and
// derivative evaluations at the same shift.  Throws singular_shift when sigma is
// (numerically) a generalized eigenvalue.
class SaddleFactor {
 public:
  SaddleFactor(const Index2System& sys, Cplx sigma);

  // Solves K x = [top; bottom]; checks the relative residual (<= 1e-10).
  CVec solve(const CVec& top, const CVec& bottom) const;
  // Solves K^T x = [top; bottom] with the same factorization.
  CVec solve_transposed(const CVec& top, const CVec& bottom) const;

  Cplx sigma() const { return sigma_; }

 private:
  CVec check(const CVec& x, const CVec& rhs, double rhs_norm, bool transposed) const;

  CMat K_;  // velocity rows scaled by 1/rowscale_ so conditioning stays O(|sigma|)
  Eigen::PartialPivLU<CMat> lu_;
  Cplx sigma_;
  double rowscale_;
  Eigen::Index n1_, n2_;
};

// v-block of the solution of K(sigma) [v; z] = [B1 b; 0].
CVec saddle_solve_right(const Index2System& sys, Cplx sigma, const CVec& b);

// w-block of the solution of K(sigma)^T [w; z] = [C1^T c; 0].
CVec saddle_solve_left(const Index2System& sys, Cplx sigma, const CVec& c);

// Real interpolation bases.  Conjugate pairs are solved once and contribute
// [Re v, Im v]; columns are SVD-compressed to numerical rank (threshold eps_svd
// relative to the largest singular value) and the two bases are trimmed to equal
// column counts.  Galerkin mode ignores left directions and returns W = V.
std::pair<Mat, Mat> build_bases(const Index2System& sys, const InterpolationData& data,
                                ReductionMode mode, double eps_svd);

// Structured interpolatory reduction: projects the (E11, A11, B1, C1) blocks and
// sets the feed-through to the constant polynomial part.
ReducedModel reduce_index2(const Index2System& sys, const InterpolationData& data,
                           ReductionMode mode, double eps_svd);

// Oracle-path reduction on the embedded pencil using explicit spectral projectors:
// V = [Vf, Vinf], W = [Wf, Winf], Dr = D.  Dense; intended for n <= 500.
ReducedModel reduce_via_projectors(const DescriptorSystem& dsys,
                                   const SpectralProjectors& projs,
                                   const InterpolationData& data, double eps_svd);

// Residual report for the bitangential (Hermite) interpolation conditions.
InterpolationReport verify_interpolation(const Index2System& sys, const ReducedModel& rom,
                                         const InterpolationData& data);

// Completes a point/direction set under conjugation: every point with nonzero
// imaginary part gains its conjugate partner (with conjugated directions) unless
// already present.  Returns data with conjugate_closed set.
InterpolationData close_conjugate(const InterpolationData& data);

}  // namespace mordae
