#include "core/core.hpp"
#include "core/linalg.hpp"
#include "core/threads.hpp"
#include "reduction/reduction.hpp"

namespace mordae {

namespace {

void check_reduced_regularity(const ReducedModel& rom, const std::vector<Cplx>& points) {
  for (const Cplx& s : points) {
    const CMat pencil = s * rom.Er.cast<Cplx>() - rom.Ar.cast<Cplx>();
    Eigen::PartialPivLU<CMat> lu(pencil);
    if (!(rcond_guarded(lu) > 1e-14))
      throw Error(ErrC::singular_reduced_pencil,
                  "reduced pencil is singular at an interpolation point");
  }
}

}  // namespace

ReducedModel reduce_index2(const Index2System& sys, const InterpolationData& data,
                           ReductionMode mode, double eps_svd) {
  auto [V, W] = build_bases(sys, data, mode, eps_svd);

  ReducedModel rom;
  rom.Er = W.transpose() * sys.E11 * V;
  rom.Ar = W.transpose() * sys.A11 * V;
  rom.Br = W.transpose() * sys.B1;
  rom.Cr = sys.C1 * V;
  rom.Dr = polynomial_part(sys);
  rom.V = std::move(V);
  rom.W = std::move(W);
  rom.galerkin = mode == ReductionMode::galerkin;

  check_reduced_regularity(rom, data.points);
  return rom;
}

ReducedModel reduce_via_projectors(const DescriptorSystem& dsys,
                                   const SpectralProjectors& projs,
                                   const InterpolationData& data, double eps_svd) {
  const auto n = dsys.n();
  if (n > 500)
    throw Error(ErrC::bad_argument, "projector path is a dense oracle, limited to n <= 500");
  if (data.size() == 0) throw Error(ErrC::bad_argument, "no interpolation points");
  if (data.right_dirs.size() != data.size() || data.left_dirs.size() != data.size())
    throw Error(ErrC::dimension_mismatch, "one direction pair per point required");

  // Representative selection matches build_bases: conjugate pairs solved once.
  std::vector<std::size_t> reps;
  {
    std::vector<bool> consumed(data.size(), false);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (consumed[i]) continue;
      const Cplx s = data.points[i];
      if (s.imag() != 0.0 && data.conjugate_closed) {
        for (std::size_t j = i + 1; j < data.size(); ++j)
          if (!consumed[j] && data.points[j] == std::conj(s)) {
            consumed[j] = true;
            break;
          }
      }
      reps.push_back(i);
    }
  }

  const CMat E = dsys.E.cast<Cplx>(), A = dsys.A.cast<Cplx>();
  std::vector<CVec> vs(reps.size()), ws(reps.size());
  parallel_for(reps.size(), [&](std::size_t k) {
    const std::size_t i = reps[k];
    const Cplx s = data.points[i];
    Eigen::PartialPivLU<CMat> lu(s * E - A);
    if (!(rcond_guarded(lu) > 1e-14))
      throw Error(ErrC::singular_shift, "singular-shift: pencil singular at sigma");
    vs[k] = lu.solve(projs.Pl.cast<Cplx>() * dsys.B.cast<Cplx>() * data.right_dirs[i]);
    ws[k] = lu.transpose().solve(projs.Pr.transpose().cast<Cplx>() *
                                 dsys.C.transpose().cast<Cplx>() * data.left_dirs[i]);
  });

  std::vector<Vec> vcols, wcols;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const bool real_point = data.points[reps[k]].imag() == 0.0;
    if (real_point) {
      vcols.push_back(vs[k].real());
      wcols.push_back(ws[k].real());
    } else {
      vcols.push_back(vs[k].real());
      vcols.push_back(vs[k].imag());
      wcols.push_back(ws[k].real());
      wcols.push_back(ws[k].imag());
    }
  }

  auto stack = [n](const std::vector<Vec>& cols) {
    Mat M(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) M.col(static_cast<Eigen::Index>(j)) = cols[j];
    return M;
  };
  Mat Vf = orth_columns(stack(vcols), eps_svd);
  Mat Wf = orth_columns(stack(wcols), eps_svd);
  if (Vf.cols() == 0 || Wf.cols() == 0)
    throw Error(ErrC::empty_basis, "finite-direction basis is empty after compression");
  const auto rf = std::min(Vf.cols(), Wf.cols());

  Mat V(n, rf + projs.Vinf.cols());
  V << Vf.leftCols(rf), projs.Vinf;
  Mat W(n, rf + projs.Winf.cols());
  W << Wf.leftCols(rf), projs.Winf;
  if (numerical_rank(V, kEpsRank) != V.cols() || numerical_rank(W, kEpsRank) != W.cols())
    throw Error(ErrC::internal_error, "projector-path basis lost column rank");

  ReducedModel rom;
  rom.Er = W.transpose() * dsys.E * V;
  rom.Ar = W.transpose() * dsys.A * V;
  rom.Br = W.transpose() * dsys.B;
  rom.Cr = dsys.C * V;
  rom.Dr = dsys.D;
  rom.V = std::move(V);
  rom.W = std::move(W);
  rom.galerkin = false;

  check_reduced_regularity(rom, data.points);
  return rom;
}

}  // namespace mordae
