#pragma once

#include "core/types.hpp"

namespace mordae {

// G(s) = C (sE - A)^-1 B + D in the appropriate block form.  The index-2 overload
// evaluates through one saddle factorization (m right-hand sides) and matches the
// embedded-pencil evaluation to 1e-10.
CMat eval_transfer(const Index2System& sys, Cplx s);
CMat eval_transfer(const DescriptorSystem& sys, Cplx s);
CMat eval_transfer(const ReducedModel& rom, Cplx s);

// Derivative action c^T G'(s) b with G'(s) = -C (sE-A)^-1 E (sE-A)^-1 B,
// evaluated via two solves against one factorization.
Cplx transfer_derivative_form(const Index2System& sys, Cplx s, const CVec& c, const CVec& b);
Cplx transfer_derivative_form(const ReducedModel& rom, Cplx s, const CVec& c, const CVec& b);

FrequencyResponse sigma_sweep(const Index2System& sys, double omega_min, double omega_max,
                              int count, bool log_spacing);
FrequencyResponse sigma_sweep(const DescriptorSystem& sys, double omega_min, double omega_max,
                              int count, bool log_spacing);
FrequencyResponse sigma_sweep(const ReducedModel& rom, double omega_min, double omega_max,
                              int count, bool log_spacing);

// Finite generalized eigenvalues.  The structured overload projects onto ker(A21)
// (nullspace method: eigenvalues of (Z^T A11 Z, Z^T E11 Z)), which involves no
// infinite eigenvalues at all; the descriptor/reduced overloads run dense QZ and
// filter infinite eigenvalues by the alpha/beta ratio.
PoleReport finite_poles(const Index2System& sys);
PoleReport finite_poles(const DescriptorSystem& sys);
PoleReport finite_poles(const ReducedModel& rom);

// Largest real part over the finite spectrum (spectral abscissa helpers).
double spectral_abscissa(const Mat& A, const Mat& E);

// The sweep grid used by sigma_sweep (log or linear spacing, inclusive endpoints).
std::vector<double> sweep_grid(double omega_min, double omega_max, int count, bool log_spacing);

}  // namespace mordae
