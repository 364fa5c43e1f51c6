#pragma once

#include "core/types.hpp"

namespace mordae {

// Structural checks: E11 nonsingular, A21 full row rank, Schur complement
// S = A21 E11^-1 A21^T nonsingular.  Returns a report; never throws on
// structural failure (the report carries the error code).  Dimension
// inconsistencies throw, since no meaningful report exists.
ValidationReport validate_index2(const Index2System& sys);

// Throwing variant used by operations that require a valid system.
void require_valid(const Index2System& sys);

// Block assembly E = [[E11,0],[0,0]], A = [[A11,A21^T],[A21,0]], B = [B1;B2],
// C = [C1, C2].
DescriptorSystem embed_index2(const Index2System& sys);

// Discrete-projection (Leray-type) spectral projectors of the embedded pencil,
// specialized to index 2.  Velocity-block projectors:
//   Theta_r = I - E11^-1 A21^T S^-1 A21,   Theta_l = I - A21^T S^-1 A21 E11^-1.
// Vinf/Winf are orthonormal bases of the infinite deflating subspaces:
// Vinf spans range(I - Pr), Winf spans range((I - Pl)^T); the transposed
// convention on the left side is what makes the projector-path reduction
// reproduce the structured one.
SpectralProjectors projectors_index2(const Index2System& sys);

// Velocity-block Leray projector Theta_r (used for consistent initialization).
Mat leray_velocity_projector(const Index2System& sys);

// Constant polynomial part of the transfer function:
//   P = D - C2 S^-1 A21 E11^-1 B1                     (B2 = 0)
// plus the B2 correction terms when B2 != 0.  A degree-1 polynomial part
// (coefficient -C2 S^-1 B2 nonzero) is rejected: only constant parts are in scope.
Mat polynomial_part(const Index2System& sys);

// Scale-invariant numerical rank threshold used across the library.
inline constexpr double kEpsRank = 1e-10;
// SVD basis-compression threshold, relative to the largest singular value.
inline constexpr double kEpsSvd = 1e-10;
// Infinite-eigenvalue magnitude filter for pencil eigensolves.
inline constexpr double kEpsInf = 1e-8;

}  // namespace mordae
