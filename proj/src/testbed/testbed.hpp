#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "core/types.hpp"

namespace mordae {

// Staggered (MAC) grid on [0,lx] x [0,ly]: u on vertical cell faces, v on
// horizontal cell faces, pressure at cell centers.  Boundary faces carry Dirichlet
// data and are not unknowns; faces adjacent to masked (obstacle) cells are removed.
// Velocity unknowns are numbered u-block first, then v-block; one pressure cell
// (the last unmasked one) is pinned to fix the constant mode.
struct GridGeometry {
  int nx = 0, ny = 0;
  double lx = 0, ly = 0, hx = 0, hy = 0;
  std::vector<std::uint8_t> mask;  // cell (i,j) at i*ny + j; 1 = obstacle
  std::vector<int> uidx;           // face (i,j), i in 0..nx,   j in 0..ny-1; -1 = not a dof
  std::vector<int> vidx;           // face (i,j), i in 0..nx-1, j in 0..ny
  std::vector<int> pidx;           // cell (i,j); the pinned cell keeps its index but emits no row
  int n_u = 0;                     // u unknowns; v unknowns follow
  int n1 = 0, n2 = 0;              // velocity unknowns, pressure unknowns (after pinning)
  std::array<int, 4> obstacle{-1, -1, -1, -1};  // cell rectangle [i0,i1) x [j0,j1)

  bool masked(int i, int j) const { return mask[static_cast<std::size_t>(i) * ny + j] != 0; }
  int ui(int i, int j) const { return uidx[static_cast<std::size_t>(i) * ny + j]; }
  int vi(int i, int j) const { return vidx[static_cast<std::size_t>(i) * (ny + 1) + j]; }
  int pi(int i, int j) const { return pidx[static_cast<std::size_t>(i) * ny + j]; }
  // dof locations
  double ux(int i) const { return i * hx; }
  double uy(int j) const { return (j + 0.5) * hy; }
  double vx(int i) const { return (i + 0.5) * hx; }
  double vy(int j) const { return j * hy; }
};

// Obstacle rectangle is given in cell indices [i0,i1) x [j0,j1) and must be
// interior (not touching the domain boundary).
GridGeometry build_grid(int nx, int ny, double lx, double ly,
                        std::optional<std::array<int, 4>> obstacle = std::nullopt);

struct BaseFlow {
  enum class Kind { uniform, parabolic };
  Kind kind = Kind::parabolic;
  double speed = 1.0;  // zero base flow = speed 0
};

// Linearized incompressible flow around the given base profile: lumped mass,
// five-point diffusion with mirror ghosts at tangential walls, centered
// convection, divergence constraint, and tangential boundary actuation on the
// obstacle surface (counterclockwise sign convention, m = 1).  Outputs are left
// empty (p = 0); attach rows via generate_output_patches.
Index2System generate_oseen(const GridGeometry& geom, double reynolds, const BaseFlow& flow);

struct Rect {
  double x0, x1, y0, y1;
};

// Two rows per patch (u average, then v average); entries are dof cell areas
// normalized by the covered area, so a constant field averages to itself exactly.
Mat generate_output_patches(const GridGeometry& geom, const std::vector<Rect>& patches);

// Synthetic index-2 system whose finite spectrum contains the given poles exactly
// (planted in the hidden dynamics, then hidden by a random orthogonal similarity).
// Fixed shapes m = 1, p = 2; B2, C2, D are zero.  Self-checks the plant against
// the finite-pole oracle.
Index2System generate_planted(int n1, int n2, const std::vector<Cplx>& planted_poles,
                              std::uint64_t seed);

}  // namespace mordae
