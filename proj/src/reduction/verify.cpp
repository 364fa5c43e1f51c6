#include <algorithm>

#include "core/core.hpp"
#include "reduction/reduction.hpp"
#include "transfer/transfer.hpp"

namespace mordae {

namespace {

double rel(double err, double denom) { return err / std::max(denom, 1e-300); }

}  // namespace

InterpolationReport verify_interpolation(const Index2System& sys, const ReducedModel& rom,
                                         const InterpolationData& data) {
  if (data.right_dirs.size() != data.size() || data.left_dirs.size() != data.size())
    throw Error(ErrC::dimension_mismatch, "one direction pair per point required");

  InterpolationReport rep;
  rep.lagrange_only = rom.galerkin;
  rep.entries.resize(data.size());

  for (std::size_t i = 0; i < data.size(); ++i) {
    const Cplx s = data.points[i];
    const CVec& b = data.right_dirs[i];
    const CVec& c = data.left_dirs[i];

    const CMat G = eval_transfer(sys, s);
    const CMat Gr = eval_transfer(rom, s);

    auto& e = rep.entries[i];
    e.sigma = s;
    e.right_residual = rel(((G - Gr) * b).norm(), (G * b).norm());
    e.left_residual = rel((c.transpose() * (G - Gr)).norm(), (c.transpose() * G).norm());
    if (!rom.galerkin) {
      const Cplx dG = transfer_derivative_form(sys, s, c, b);
      const Cplx dGr = transfer_derivative_form(rom, s, c, b);
      e.hermite_residual = rel(std::abs(dG - dGr), std::abs(dG));
      e.hermite_checked = true;
    }

    rep.max_right = std::max(rep.max_right, e.right_residual);
    rep.max_left = std::max(rep.max_left, e.left_residual);
    if (e.hermite_checked) rep.max_hermite = std::max(rep.max_hermite, e.hermite_residual);
  }
  return rep;
}

}  // namespace mordae
