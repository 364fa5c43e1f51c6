#include <cmath>

#include "core/core.hpp"
#include "testbed/testbed.hpp"

namespace mordae {

namespace {

double ubar(const BaseFlow& f, double y, double ly) {
  if (f.speed == 0.0) return 0.0;
  if (f.kind == BaseFlow::Kind::uniform) return f.speed;
  return f.speed * 4.0 * y * (ly - y) / (ly * ly);
}

double dubar(const BaseFlow& f, double y, double ly) {
  if (f.speed == 0.0 || f.kind != BaseFlow::Kind::parabolic) return 0.0;
  return f.speed * 4.0 * (ly - 2.0 * y) / (ly * ly);
}

}  // namespace

Index2System generate_oseen(const GridGeometry& g, double reynolds, const BaseFlow& flow) {
  if (!(reynolds > 0.0)) throw Error(ErrC::bad_argument, "reynolds must be positive");
  const double visc = 1.0 / reynolds;
  // zero-diffusion limit: the velocity operator degenerates with no viscous coupling
  if (visc < 1e-8)
    throw Error(ErrC::degenerate_geometry,
                "viscosity 1/reynolds below conditioning threshold (1e-8)");

  const int nx = g.nx, ny = g.ny;
  const double hx = g.hx, hy = g.hy, vol = hx * hy;
  const int n1 = g.n1, n2 = g.n2;

  Index2System sys;
  sys.E11 = Mat::Identity(n1, n1) * vol;
  sys.A11 = Mat::Zero(n1, n1);
  sys.B1 = Mat::Zero(n1, 1);

  const double cx = visc * vol / (hx * hx);
  const double cy = visc * vol / (hy * hy);

  // u momentum rows: u(i,j) sits at (i*hx, (j+1/2)*hy)
  for (int i = 1; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int r = g.ui(i, j);
      if (r < 0) continue;
      const double yu = g.uy(j);

      // x-direction second difference; neighbors at distance hx are u nodes, so a
      // missing neighbor (domain wall or obstacle side, where u is the normal
      // component) is a homogeneous Dirichlet value at the node and simply drops.
      sys.A11(r, r) += -2.0 * cx;
      for (int di = -1; di <= 1; di += 2) {
        const int ii = i + di;
        if (ii >= 1 && ii <= nx - 1 && g.ui(ii, j) >= 0) sys.A11(r, g.ui(ii, j)) += cx;
      }

      // y-direction: walls and obstacle top/bottom surfaces lie half a cell away;
      // mirror ghost folds onto the diagonal, and an actuated surface contributes
      // 2*c*g with g the tangential boundary value.
      sys.A11(r, r) += -2.0 * cy;
      for (int dj = -1; dj <= 1; dj += 2) {
        const int jj = j + dj;
        if (jj < 0 || jj > ny - 1) {
          sys.A11(r, r) += -cy;  // domain wall, value 0
        } else if (g.ui(i, jj) >= 0) {
          sys.A11(r, g.ui(i, jj)) += cy;
        } else {
          sys.A11(r, r) += -cy;
          // counterclockwise tangential actuation: obstacle top surface carries -x,
          // bottom surface +x
          const double sgn = (dj == -1) ? -1.0 : +1.0;
          sys.B1(r, 0) += 2.0 * cy * sgn;
        }
      }

      // convection: -ubar du/dx (centered) - v' dubar/dy at the u node
      const double ub = ubar(flow, yu, g.ly);
      if (ub != 0.0) {
        const double c1 = vol * ub / (2.0 * hx);
        if (i - 1 >= 1 && g.ui(i - 1, j) >= 0) sys.A11(r, g.ui(i - 1, j)) += c1;
        if (i + 1 <= nx - 1 && g.ui(i + 1, j) >= 0) sys.A11(r, g.ui(i + 1, j)) += -c1;
      }
      const double du = dubar(flow, yu, g.ly);
      if (du != 0.0) {
        const double c2 = -vol * du * 0.25;  // 4-point average of surrounding v dofs
        const int vij[4][2] = {{i - 1, j}, {i, j}, {i - 1, j + 1}, {i, j + 1}};
        for (const auto& iv : vij)
          if (iv[0] >= 0 && iv[0] <= nx - 1 && iv[1] >= 1 && iv[1] <= ny - 1 &&
              g.vi(iv[0], iv[1]) >= 0)
            sys.A11(r, g.vi(iv[0], iv[1])) += c2;
      }
    }
  }

  // v momentum rows: v(i,j) sits at ((i+1/2)*hx, j*hy)
  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < ny; ++j) {
      const int r = g.vi(i, j);
      if (r < 0) continue;
      const double yv = g.vy(j);

      sys.A11(r, r) += -2.0 * cy;
      for (int dj = -1; dj <= 1; dj += 2) {
        const int jj = j + dj;
        if (jj >= 1 && jj <= ny - 1 && g.vi(i, jj) >= 0) sys.A11(r, g.vi(i, jj)) += cy;
        // else: domain wall or obstacle top/bottom at the node (normal component)
      }

      sys.A11(r, r) += -2.0 * cx;
      for (int di = -1; di <= 1; di += 2) {
        const int ii = i + di;
        if (ii < 0 || ii > nx - 1) {
          sys.A11(r, r) += -cx;  // side wall half a cell away, value 0
        } else if (g.vi(ii, j) >= 0) {
          sys.A11(r, g.vi(ii, j)) += cx;
        } else {
          sys.A11(r, r) += -cx;
          // obstacle right surface (di == -1) carries +y, left surface -y
          const double sgn = (di == -1) ? +1.0 : -1.0;
          sys.B1(r, 0) += 2.0 * cx * sgn;
        }
      }

      const double ub = ubar(flow, yv, g.ly);
      if (ub != 0.0) {
        const double c1 = vol * ub / (2.0 * hx);
        if (i - 1 >= 0 && g.vi(i - 1, j) >= 0) sys.A11(r, g.vi(i - 1, j)) += c1;
        if (i + 1 <= nx - 1 && g.vi(i + 1, j) >= 0) sys.A11(r, g.vi(i + 1, j)) += -c1;
      }
    }
  }

  // divergence rows (volume-scaled), one per unmasked cell except the pinned one
  sys.A21 = Mat::Zero(n2, n1);
  {
    int rr = 0;
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const int kp = g.pi(i, j);
        if (kp < 0 || kp == g.n2) continue;  // masked or pinned (pinned index = n2)
        if (g.ui(i + 1, j) >= 0) sys.A21(rr, g.ui(i + 1, j)) += hy;
        if (g.ui(i, j) >= 0) sys.A21(rr, g.ui(i, j)) -= hy;
        if (g.vi(i, j + 1) >= 0) sys.A21(rr, g.vi(i, j + 1)) += hx;
        if (g.vi(i, j) >= 0) sys.A21(rr, g.vi(i, j)) -= hx;
        ++rr;
      }
    }
  }

  sys.B2 = Mat::Zero(n2, 1);
  sys.C1 = Mat::Zero(0, n1);
  sys.C2 = Mat::Zero(0, n2);
  sys.D = Mat::Zero(0, 1);

  try {
    require_valid(sys);
  } catch (const Error& e) {
    throw Error(ErrC::degenerate_geometry,
                std::string("generated system failed validation: ") + e.what());
  }
  return sys;
}

Mat generate_output_patches(const GridGeometry& g, const std::vector<Rect>& patches) {
  if (patches.empty()) throw Error(ErrC::bad_argument, "at least one patch required");
  Mat C1 = Mat::Zero(2 * static_cast<Eigen::Index>(patches.size()), g.n1);
  const double cell = g.hx * g.hy;

  for (std::size_t k = 0; k < patches.size(); ++k) {
    const Rect& rc = patches[k];
    if (!(rc.x1 > rc.x0) || !(rc.y1 > rc.y0) || rc.x0 < 0 || rc.y0 < 0 || rc.x1 > g.lx ||
        rc.y1 > g.ly)
      throw Error(ErrC::bad_argument, "patch rectangle is empty or outside the domain");

    const auto ru = 2 * static_cast<Eigen::Index>(k);
    double area_u = 0.0, area_v = 0.0;
    for (int i = 1; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        if (g.ui(i, j) >= 0 && rc.x0 <= g.ux(i) && g.ux(i) <= rc.x1 && rc.y0 <= g.uy(j) &&
            g.uy(j) <= rc.y1) {
          C1(ru, g.ui(i, j)) += cell;
          area_u += cell;
        }
    for (int i = 0; i < g.nx; ++i)
      for (int j = 1; j < g.ny; ++j)
        if (g.vi(i, j) >= 0 && rc.x0 <= g.vx(i) && g.vx(i) <= rc.x1 && rc.y0 <= g.vy(j) &&
            g.vy(j) <= rc.y1) {
          C1(ru + 1, g.vi(i, j)) += cell;
          area_v += cell;
        }
    if (area_u == 0.0 || area_v == 0.0)
      throw Error(ErrC::empty_patch, "patch covers no velocity unknowns");
    C1.row(ru) /= area_u;
    C1.row(ru + 1) /= area_v;
  }
  return C1;
}

}  // namespace mordae
