#include "control/control.hpp"

#include "core/core.hpp"

namespace mordae {

GainFields functional_gains(const Mat& K_full, const GridGeometry& geom) {
  if (K_full.cols() != geom.n1)
    throw Error(ErrC::dimension_mismatch,
                "gain columns do not match the grid's velocity unknown count");
  const Eigen::Index m = K_full.rows();
  const int n_v = geom.n1 - geom.n_u;
  const double vol = geom.hx * geom.hy;
  if (!(vol > 0.0)) throw Error(ErrC::degenerate_geometry, "grid has zero cell volume");

  GainFields f;
  f.hu.resize(m, geom.n_u);
  f.hv.resize(m, n_v);
  f.ui.resize(geom.n_u);
  f.uj.resize(geom.n_u);
  f.ux.resize(geom.n_u);
  f.uy.resize(geom.n_u);
  f.vi.resize(n_v);
  f.vj.resize(n_v);
  f.vx.resize(n_v);
  f.vy.resize(n_v);

  int seen_u = 0, seen_v = 0;
  for (int i = 0; i <= geom.nx; ++i)
    for (int j = 0; j < geom.ny; ++j) {
      const int k = geom.ui(i, j);
      if (k < 0) continue;
      f.ui[k] = i;
      f.uj[k] = j;
      f.ux[k] = geom.ux(i);
      f.uy[k] = geom.uy(j);
      f.hu.col(k) = K_full.col(k) / vol;
      ++seen_u;
    }
  for (int i = 0; i < geom.nx; ++i)
    for (int j = 0; j <= geom.ny; ++j) {
      const int k = geom.vi(i, j);
      if (k < 0) continue;
      const int kv = k - geom.n_u;
      f.vi[kv] = i;
      f.vj[kv] = j;
      f.vx[kv] = geom.vx(i);
      f.vy[kv] = geom.vy(j);
      f.hv.col(kv) = K_full.col(k) / vol;
      ++seen_v;
    }
  if (seen_u != geom.n_u || seen_v != n_v)
    throw Error(ErrC::internal_error, "grid index maps do not cover the velocity unknowns");
  return f;
}

}  // namespace mordae
