#include <cmath>

#include "control/control.hpp"
#include "core/core.hpp"
#include "core/linalg.hpp"

namespace mordae {

Trajectory simulate_closed_loop(const Index2System& sys, const Mat& K_full, const Vec& x0,
                                double dt, double T) {
  require_valid(sys);
  const Eigen::Index n1 = sys.n1(), n2 = sys.n2(), m = sys.m();
  if (!(dt > 0.0) || !(T > 0.0)) throw Error(ErrC::bad_argument, "need dt > 0 and T > 0");
  if (x0.size() != n1) throw Error(ErrC::dimension_mismatch, "initial state must have length n1");
  Mat K = K_full;
  if (K.size() == 0) K = Mat::Zero(m, n1);  // open loop
  if (K.rows() != m || K.cols() != n1)
    throw Error(ErrC::dimension_mismatch, "feedback gain must be m x n1");
  if (sys.B2.size() != 0 && sys.B2.norm() != 0.0)
    throw Error(ErrC::bad_argument,
                "time stepping requires zero input coupling in the constraint equation");
  const int nsteps = static_cast<int>(std::lround(T / dt));
  if (nsteps < 1) throw Error(ErrC::bad_argument, "horizon shorter than one step");

  // consistent initialization: discrete Leray projection onto ker(A21)
  Vec x = x0;
  Eigen::PartialPivLU<Mat> e_lu, s_lu;
  if (n2 > 0) {
    e_lu.compute(sys.E11);
    const Mat et = e_lu.solve(sys.A21.transpose());  // E11^-1 A21^T
    s_lu.compute(sys.A21 * et);
    x -= et * s_lu.solve(sys.A21 * x);
  }
  if (x.norm() <= 1e-14 * std::max(1.0, x0.norm()))
    throw Error(ErrC::inconsistent_state,
                "initial state has no component in the constraint's kernel");

  const Mat Ahat = sys.A11 - sys.B1 * K;
  Mat step(n1 + n2, n1 + n2);
  step.topLeftCorner(n1, n1) = sys.E11 / dt - Ahat;
  step.topRightCorner(n1, n2) = sys.A21.transpose();
  step.bottomLeftCorner(n2, n1) = sys.A21;
  step.bottomRightCorner(n2, n2).setZero();
  Eigen::PartialPivLU<Mat> lu(step);
  if (rcond_guarded(lu) < 1e-14)
    throw Error(ErrC::singular_shift, "implicit Euler step matrix is numerically singular");

  const bool has_c2 = sys.C2.size() != 0;
  const bool has_d = sys.D.size() != 0;
  auto output = [&](const Vec& x1, const Vec& x2, const Vec& u) {
    Vec y = sys.C1 * x1;
    if (has_c2) y += sys.C2 * x2;
    if (has_d) y += sys.D * u;
    return y;
  };

  Trajectory traj;
  traj.t.reserve(nsteps + 1);
  traj.x1.reserve(nsteps + 1);
  traj.u.reserve(nsteps + 1);
  traj.y.reserve(nsteps + 1);

  // algebraic variable consistent with the closed-loop dynamics at t = 0
  Vec u0 = -(K * x);
  Vec x2(n2);
  if (n2 > 0) x2 = -s_lu.solve(sys.A21 * e_lu.solve(Ahat * x));
  traj.t.push_back(0.0);
  traj.x1.push_back(x);
  traj.u.push_back(u0);
  traj.y.push_back(output(x, x2, u0));

  Vec rhs(n1 + n2);
  rhs.setZero();
  for (int k = 1; k <= nsteps; ++k) {
    rhs.head(n1) = sys.E11 * x / dt;
    const Vec sol = lu.solve(rhs);
    x = sol.head(n1);
    x2 = -sol.tail(n2);
    const Vec u = -(K * x);
    traj.t.push_back(k * dt);
    traj.x1.push_back(x);
    traj.u.push_back(u);
    traj.y.push_back(output(x, x2, u));
    if (n2 > 0) {
      const double xn = x.norm();
      if (xn > 0.0)
        traj.max_constraint_residual =
            std::max(traj.max_constraint_residual, (sys.A21 * x).norm() / xn);
    }
  }
  return traj;
}

}  // namespace mordae
