#include "transfer/transfer.hpp"

#include <cmath>
#include <limits>

#include "core/core.hpp"
#include "core/linalg.hpp"
#include "core/threads.hpp"
#include "reduction/reduction.hpp"

namespace mordae {

namespace {

Mat or_zero(const Mat& m, Eigen::Index rows, Eigen::Index cols) {
  if (m.size() > 0) return m;
  return Mat::Zero(rows, cols);
}

CMat dense_eval(const CMat& E, const CMat& A, const CMat& B, const CMat& C, const CMat& D,
                Cplx s) {
  Eigen::PartialPivLU<CMat> lu(s * E - A);
  if (!(rcond_guarded(lu) > 1e-14))
    throw Error(ErrC::singular_shift, "singular-shift: pencil singular at s");
  return C * lu.solve(B) + D;
}

template <typename System>
FrequencyResponse sweep_impl(const System& sys, double omega_min, double omega_max, int count,
                             bool log_spacing) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min))
    throw Error(ErrC::bad_argument, "sweep requires 0 < omega_min < omega_max");
  if (count < 2) throw Error(ErrC::bad_argument, "sweep requires at least two points");

  FrequencyResponse fr;
  fr.omegas = sweep_grid(omega_min, omega_max, count, log_spacing);
  fr.values.resize(fr.omegas.size());
  fr.norms.assign(fr.omegas.size(), std::numeric_limits<double>::quiet_NaN());
  fr.ok.assign(fr.omegas.size(), 0);

  parallel_for(fr.omegas.size(), [&](std::size_t k) {
    // A sampled omega sitting on a pole is reported for that point; the sweep continues.
    try {
      const CMat G = eval_transfer(sys, Cplx(0.0, fr.omegas[k]));
      fr.values[k] = G;
      fr.norms[k] = G.jacobiSvd().singularValues()(0);
      fr.ok[k] = 1;
    } catch (const Error&) {
      fr.values[k] = CMat();
    }
  });
  return fr;
}

}  // namespace

std::vector<double> sweep_grid(double omega_min, double omega_max, int count, bool log_spacing) {
  std::vector<double> w(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / (count - 1);
    w[static_cast<std::size_t>(k)] =
        log_spacing ? std::exp(std::log(omega_min) + t * (std::log(omega_max) - std::log(omega_min)))
                    : omega_min + t * (omega_max - omega_min);
  }
  // Inclusive endpoints, exactly: the interpolation above reproduces them only to
  // rounding.
  w.front() = omega_min;
  w.back() = omega_max;
  return w;
}

CMat eval_transfer(const Index2System& sys, Cplx s) {
  const auto n1 = sys.n1(), n2 = sys.n2(), m = sys.m(), p = sys.p();
  SaddleFactor f(sys, s);
  const Mat B2 = or_zero(sys.B2, n2, m);
  const Mat C2 = or_zero(sys.C2, p, n2);
  const Mat D = or_zero(sys.D, p, m);

  CMat G(p, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    // embedded second block row reads A21 x1 = -B2 e_j; the saddle z-block is -x2
    const CVec sol = f.solve(sys.B1.col(j).cast<Cplx>(), (-B2.col(j)).cast<Cplx>());
    G.col(j) = sys.C1.cast<Cplx>() * sol.head(n1) - C2.cast<Cplx>() * sol.tail(n2) +
               D.col(j).cast<Cplx>();
  }
  return G;
}

CMat eval_transfer(const DescriptorSystem& sys, Cplx s) {
  return dense_eval(sys.E.cast<Cplx>(), sys.A.cast<Cplx>(), sys.B.cast<Cplx>(),
                    sys.C.cast<Cplx>(), sys.D.cast<Cplx>(), s);
}

CMat eval_transfer(const ReducedModel& rom, Cplx s) {
  return dense_eval(rom.Er.cast<Cplx>(), rom.Ar.cast<Cplx>(), rom.Br.cast<Cplx>(),
                    rom.Cr.cast<Cplx>(), rom.Dr.cast<Cplx>(), s);
}

Cplx transfer_derivative_form(const Index2System& sys, Cplx s, const CVec& c, const CVec& b) {
  const auto n1 = sys.n1(), n2 = sys.n2(), m = sys.m(), p = sys.p();
  SaddleFactor f(sys, s);
  const Mat B2 = or_zero(sys.B2, n2, m);
  const Mat C2 = or_zero(sys.C2, p, n2);

  const CVec y1 = f.solve(sys.B1.cast<Cplx>() * b, -B2.cast<Cplx>() * b);
  // E * [x1; x2] = [E11 x1; 0]; second solve against the same factorization
  const CVec y2 = f.solve(sys.E11.cast<Cplx>() * y1.head(n1), CVec::Zero(n2));
  // saddle z-blocks carry -x2
  const CVec Gy = sys.C1.cast<Cplx>() * y2.head(n1) - C2.cast<Cplx>() * y2.tail(n2);
  return -(c.transpose() * Gy)(0);
}

Cplx transfer_derivative_form(const ReducedModel& rom, Cplx s, const CVec& c, const CVec& b) {
  const CMat pencil = s * rom.Er.cast<Cplx>() - rom.Ar.cast<Cplx>();
  Eigen::PartialPivLU<CMat> lu(pencil);
  if (!(rcond_guarded(lu) > 1e-14))
    throw Error(ErrC::singular_shift, "singular-shift: reduced pencil singular at s");
  const CVec y1 = lu.solve(rom.Br.cast<Cplx>() * b);
  const CVec y2 = lu.solve(rom.Er.cast<Cplx>() * y1);
  return -(c.transpose() * rom.Cr.cast<Cplx>() * y2)(0);
}

FrequencyResponse sigma_sweep(const Index2System& sys, double omega_min, double omega_max,
                              int count, bool log_spacing) {
  return sweep_impl(sys, omega_min, omega_max, count, log_spacing);
}

FrequencyResponse sigma_sweep(const DescriptorSystem& sys, double omega_min, double omega_max,
                              int count, bool log_spacing) {
  return sweep_impl(sys, omega_min, omega_max, count, log_spacing);
}

FrequencyResponse sigma_sweep(const ReducedModel& rom, double omega_min, double omega_max,
                              int count, bool log_spacing) {
  return sweep_impl(rom, omega_min, omega_max, count, log_spacing);
}

}  // namespace mordae
