#pragma once

#include "core/types.hpp"
#include "testbed/testbed.hpp"

namespace mordae {

// Generalized Riccati solve A'.P.E + E'.P.A - E'.P.B R^-1 B'.P.E + C'.C = 0
// for the stabilizing P (symmetric PSD).  Dense sign-function initialization
// refined by a Newton iteration; suitable for reduced orders up to a few hundred.
Mat solve_care(const Mat& E, const Mat& A, const Mat& B, const Mat& C, const Mat& R);

// Riccati design on the reduced model with state weight Cr'.Cr and input weight R.
// K_reduced = R^-1 Br'.P.Er, K_full = K_reduced V'; fails when the closed reduced
// pencil is not asymptotically stable.
LqrResult solve_lqr(const LqrProblem& prob);

// Lift a reduced gain back to full velocity coordinates: K = K_reduced V'.
Mat lift_gain(const LqrResult& result, const ReducedModel& rom);

// Gain functions sampled at the velocity-dof locations of a staggered grid,
// one row per actuator.  Values are mass-consistent: u = -K x1 = -sum_j h_j x1_j vol,
// so h = K / cell volume for the lumped mass used by the flow testbed.
struct GainFields {
  Mat hu, hv;                          // m x n_u and m x n_v gain samples
  std::vector<int> ui, uj, vi, vj;     // grid face indices per dof
  std::vector<double> ux, uy, vx, vy;  // physical dof locations
};

GainFields functional_gains(const Mat& K_full, const GridGeometry& geom);

// Implicit-Euler closed loop for the index-2 system with A11 <- A11 - B1 K_full
// (pass an m x n1 zero matrix for the open loop).  x0 is first made consistent
// with the constraint via the discrete Leray projector; the step saddle matrix is
// factored once.  Records t, x1, u = -K x1, y and the worst constraint residual.
Trajectory simulate_closed_loop(const Index2System& sys, const Mat& K_full, const Vec& x0,
                                double dt, double T);

}  // namespace mordae
