#include "core/core.hpp"
#include "testbed/testbed.hpp"

namespace mordae {

GridGeometry build_grid(int nx, int ny, double lx, double ly,
                        std::optional<std::array<int, 4>> obstacle) {
  if (nx < 2 || ny < 2 || !(lx > 0.0) || !(ly > 0.0))
    throw Error(ErrC::bad_argument, "grid needs nx, ny >= 2 and positive extents");

  GridGeometry g;
  g.nx = nx;
  g.ny = ny;
  g.lx = lx;
  g.ly = ly;
  g.hx = lx / nx;
  g.hy = ly / ny;
  g.mask.assign(static_cast<std::size_t>(nx) * ny, 0);

  if (obstacle) {
    const auto [i0, i1, j0, j1] = *obstacle;
    // interior rectangle only: faces adjacent to the obstacle must not coincide
    // with domain-boundary faces
    if (i0 < 1 || j0 < 1 || i1 <= i0 || j1 <= j0 || i1 > nx - 1 || j1 > ny - 1)
      throw Error(ErrC::degenerate_geometry,
                  "obstacle rectangle must be nonempty and strictly interior to the grid");
    g.obstacle = *obstacle;
    for (int i = i0; i < i1; ++i)
      for (int j = j0; j < j1; ++j) g.mask[static_cast<std::size_t>(i) * ny + j] = 1;
  }

  g.uidx.assign(static_cast<std::size_t>(nx + 1) * ny, -1);
  g.vidx.assign(static_cast<std::size_t>(nx) * (ny + 1), -1);
  g.pidx.assign(static_cast<std::size_t>(nx) * ny, -1);

  int k = 0;
  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (!g.masked(i - 1, j) && !g.masked(i, j))
        g.uidx[static_cast<std::size_t>(i) * ny + j] = k++;
  g.n_u = k;
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j)
      if (!g.masked(i, j - 1) && !g.masked(i, j))
        g.vidx[static_cast<std::size_t>(i) * (ny + 1) + j] = k++;
  g.n1 = k;

  int kp = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (!g.masked(i, j)) g.pidx[static_cast<std::size_t>(i) * ny + j] = kp++;
  if (kp < 2 || g.n1 == 0)
    throw Error(ErrC::degenerate_geometry, "grid has no usable fluid cells");
  g.n2 = kp - 1;  // last unmasked cell is pinned
  return g;
}

}  // namespace mordae
