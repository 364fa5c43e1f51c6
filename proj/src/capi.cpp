#include <array>
#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mordae/mordae.h"

#include "control/control.hpp"
#include "core/core.hpp"
#include "core/rng.hpp"
#include "io/io.hpp"
#include "reduction/reduction.hpp"
#include "testbed/testbed.hpp"
#include "transfer/transfer.hpp"

struct mordae_geom {
  mordae::GridGeometry g;
};
struct mordae_sys {
  mordae::Index2System s;
};
struct mordae_rom {
  mordae::ReducedModel r;
  mordae::InterpolationData d;
};
struct mordae_lqr {
  mordae::LqrResult l;
};

namespace {

using mordae::Cplx;
using mordae::CVec;
using mordae::ErrC;
using mordae::Error;
using mordae::Mat;
using mordae::Vec;

thread_local int g_code = 0;
thread_local std::string g_message;

void clear_error() {
  g_code = 0;
  g_message.clear();
}

int set_error(ErrC code, const std::string& msg) {
  g_code = static_cast<int>(code);
  g_message = msg;
  return g_code;
}

// Runs the body, translating exceptions into the thread-local error state.
template <class F>
int guarded(F&& body) {
  try {
    clear_error();
    body();
    return MORDAE_OK;
  } catch (const Error& e) {
    return set_error(e.code, e.what());
  } catch (const std::exception& e) {
    return set_error(ErrC::internal_error, e.what());
  }
}

template <class T, class F>
T* guarded_new(F&& make) {
  try {
    clear_error();
    return new T{make()};
  } catch (const Error& e) {
    set_error(e.code, e.what());
    return nullptr;
  } catch (const std::exception& e) {
    set_error(ErrC::internal_error, e.what());
    return nullptr;
  }
}

Mat row_major(const double* data, Eigen::Index rows, Eigen::Index cols) {
  Mat M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = data[i * cols + j];
  return M;
}

Mat optional_block(const double* data, Eigen::Index rows, Eigen::Index cols) {
  return data == nullptr ? Mat::Zero(rows, cols) : row_major(data, rows, cols);
}

void require(bool cond, ErrC code, const char* msg) {
  if (!cond) throw Error(code, msg);
}

std::vector<Cplx> pairs_to_complex(const double* re_im, int count) {
  std::vector<Cplx> zs;
  zs.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) zs.emplace_back(re_im[2 * k], re_im[2 * k + 1]);
  return zs;
}

int export_poles(const mordae::PoleReport& rep, double* re_im, int capacity) {
  require(re_im != nullptr, ErrC::bad_argument, "null output buffer");
  require(static_cast<int>(rep.finite_poles.size()) <= capacity, ErrC::bad_argument,
          "output buffer too small");
  for (std::size_t k = 0; k < rep.finite_poles.size(); ++k) {
    re_im[2 * k] = rep.finite_poles[k].real();
    re_im[2 * k + 1] = rep.finite_poles[k].imag();
  }
  return MORDAE_OK;
}

void export_cmat(const mordae::CMat& G, double* out) {
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
      out[2 * (i * G.cols() + j)] = G(i, j).real();
      out[2 * (i * G.cols() + j) + 1] = G(i, j).imag();
    }
}

}  // namespace

extern "C" {

const char* mordae_version(void) { return "mordae 1.0.0"; }

int mordae_last_error_code(void) { return g_code; }

const char* mordae_last_error_message(void) { return g_message.c_str(); }

/* ---------- grid and generators ---------- */

mordae_geom* mordae_grid_create(int nx, int ny, double lx, double ly, const int* obstacle) {
  return guarded_new<mordae_geom>([&] {
    std::optional<std::array<int, 4>> obs;
    if (obstacle != nullptr) obs = std::array<int, 4>{obstacle[0], obstacle[1], obstacle[2], obstacle[3]};
    return mordae_geom{mordae::build_grid(nx, ny, lx, ly, obs)};
  });
}

void mordae_geom_destroy(mordae_geom* geom) { delete geom; }

mordae_sys* mordae_oseen_create(const mordae_geom* geom, double reynolds, int parabolic,
                                double speed) {
  return guarded_new<mordae_sys>([&] {
    require(geom != nullptr, ErrC::bad_argument, "null geometry handle");
    mordae::BaseFlow flow;
    flow.kind = parabolic != 0 ? mordae::BaseFlow::Kind::parabolic : mordae::BaseFlow::Kind::uniform;
    flow.speed = speed;
    return mordae_sys{mordae::generate_oseen(geom->g, reynolds, flow)};
  });
}

int mordae_oseen_attach_patches(mordae_sys* sys, const mordae_geom* geom, const double* rects,
                                int npatches) {
  return guarded([&] {
    require(sys != nullptr && geom != nullptr, ErrC::bad_argument, "null handle");
    require(rects != nullptr && npatches > 0, ErrC::bad_argument, "no patches given");
    std::vector<mordae::Rect> patches;
    for (int k = 0; k < npatches; ++k)
      patches.push_back(
          mordae::Rect{rects[4 * k], rects[4 * k + 1], rects[4 * k + 2], rects[4 * k + 3]});
    const Mat C = mordae::generate_output_patches(geom->g, patches);
    require(C.cols() == sys->s.n1(), ErrC::dimension_mismatch,
            "geometry does not match the system");
    sys->s.C1 = C;
    sys->s.C2 = Mat::Zero(C.rows(), sys->s.n2());
    sys->s.D = Mat::Zero(C.rows(), sys->s.m());
  });
}

mordae_sys* mordae_planted_create(int n1, int n2, const double* poles_re_im, int npoles,
                                  unsigned long long seed) {
  return guarded_new<mordae_sys>([&] {
    require(npoles == 0 || poles_re_im != nullptr, ErrC::bad_argument, "null pole list");
    return mordae_sys{mordae::generate_planted(n1, n2, pairs_to_complex(poles_re_im, npoles), seed)};
  });
}

mordae_sys* mordae_sys_create(int n1, int n2, int m, int p, const double* E11, const double* A11,
                              const double* A21, const double* B1, const double* B2,
                              const double* C1, const double* C2, const double* D) {
  return guarded_new<mordae_sys>([&] {
    require(n1 > 0 && n2 >= 0 && m > 0 && p >= 0, ErrC::bad_argument, "invalid dimensions");
    require(E11 != nullptr && A11 != nullptr && B1 != nullptr, ErrC::bad_argument,
            "required block is null");
    require(n2 == 0 || A21 != nullptr, ErrC::bad_argument, "required block is null");
    require(p == 0 || C1 != nullptr, ErrC::bad_argument, "required block is null");
    mordae::Index2System s;
    s.E11 = row_major(E11, n1, n1);
    s.A11 = row_major(A11, n1, n1);
    s.A21 = optional_block(A21, n2, n1);
    s.B1 = row_major(B1, n1, m);
    s.B2 = optional_block(B2, n2, m);
    s.C1 = optional_block(C1, p, n1);
    s.C2 = optional_block(C2, p, n2);
    s.D = optional_block(D, p, m);
    mordae::require_valid(s);
    return mordae_sys{std::move(s)};
  });
}

/* ---------- system handles ---------- */

mordae_sys* mordae_sys_read(const char* bundle_dir) {
  return guarded_new<mordae_sys>([&] {
    require(bundle_dir != nullptr, ErrC::bad_argument, "null path");
    return mordae_sys{mordae::read_system_bundle(bundle_dir)};
  });
}

int mordae_sys_write(const mordae_sys* sys, const char* bundle_dir) {
  return guarded([&] {
    require(sys != nullptr && bundle_dir != nullptr, ErrC::bad_argument, "null argument");
    mordae::write_system_bundle(bundle_dir, sys->s, nullptr);
  });
}

void mordae_sys_destroy(mordae_sys* sys) { delete sys; }

int mordae_sys_dims(const mordae_sys* sys, int* n1, int* n2, int* m, int* p) {
  return guarded([&] {
    require(sys != nullptr, ErrC::bad_argument, "null handle");
    if (n1 != nullptr) *n1 = static_cast<int>(sys->s.n1());
    if (n2 != nullptr) *n2 = static_cast<int>(sys->s.n2());
    if (m != nullptr) *m = static_cast<int>(sys->s.m());
    if (p != nullptr) *p = static_cast<int>(sys->s.p());
  });
}

int mordae_sys_validate(const mordae_sys* sys, double* e11_rcond, double* a21_sigma_ratio,
                        double* schur_rcond) {
  if (sys == nullptr) {
    set_error(ErrC::bad_argument, "null handle");
    return MORDAE_ERR_BAD_ARGUMENT;
  }
  try {
    clear_error();
    const mordae::ValidationReport rep = mordae::validate_index2(sys->s);
    if (e11_rcond != nullptr) *e11_rcond = rep.e11_rcond;
    if (a21_sigma_ratio != nullptr) *a21_sigma_ratio = rep.a21_sigma_ratio;
    if (schur_rcond != nullptr) *schur_rcond = rep.schur_rcond;
    if (!rep.ok) set_error(rep.code, rep.message);
    return static_cast<int>(rep.code);
  } catch (const Error& e) {
    return set_error(e.code, e.what());
  } catch (const std::exception& e) {
    return set_error(ErrC::internal_error, e.what());
  }
}

/* ---------- reduction ---------- */

mordae_rom* mordae_reduce(const mordae_sys* sys, const double* points_re_im, int npoints,
                          const double* bdirs_re_im, const double* cdirs_re_im, int galerkin,
                          double svd_threshold) {
  return guarded_new<mordae_rom>([&] {
    require(sys != nullptr, ErrC::bad_argument, "null handle");
    require(points_re_im != nullptr && npoints > 0, ErrC::bad_argument, "no interpolation points");
    const Eigen::Index m = sys->s.m(), p = sys->s.p();
    mordae::InterpolationData data;
    data.points = pairs_to_complex(points_re_im, npoints);
    for (int k = 0; k < npoints; ++k) {
      CVec b = CVec::Zero(m), c = CVec::Zero(p);
      if (bdirs_re_im != nullptr)
        for (Eigen::Index i = 0; i < m; ++i)
          b(i) = Cplx(bdirs_re_im[2 * (k * m + i)], bdirs_re_im[2 * (k * m + i) + 1]);
      else
        b(k % m) = 1.0;
      if (cdirs_re_im != nullptr)
        for (Eigen::Index i = 0; i < p; ++i)
          c(i) = Cplx(cdirs_re_im[2 * (k * p + i)], cdirs_re_im[2 * (k * p + i) + 1]);
      else
        c(k % p) = 1.0;
      data.right_dirs.push_back(std::move(b));
      data.left_dirs.push_back(std::move(c));
    }
    data = mordae::close_conjugate(data);
    const auto mode =
        galerkin != 0 ? mordae::ReductionMode::galerkin : mordae::ReductionMode::petrov_galerkin;
    return mordae_rom{mordae::reduce_index2(sys->s, data, mode, svd_threshold), data};
  });
}

mordae_rom* mordae_rom_read(const char* bundle_dir) {
  return guarded_new<mordae_rom>([&] {
    require(bundle_dir != nullptr, ErrC::bad_argument, "null path");
    mordae::InterpolationData data;
    mordae::ReducedModel r = mordae::read_rom_bundle(bundle_dir, &data);
    return mordae_rom{std::move(r), std::move(data)};
  });
}

int mordae_rom_write(const mordae_rom* rom, const char* bundle_dir) {
  return guarded([&] {
    require(rom != nullptr && bundle_dir != nullptr, ErrC::bad_argument, "null argument");
    mordae::write_rom_bundle(bundle_dir, rom->r, rom->d, nullptr);
  });
}

void mordae_rom_destroy(mordae_rom* rom) { delete rom; }

int mordae_rom_order(const mordae_rom* rom) {
  if (rom == nullptr) {
    set_error(ErrC::bad_argument, "null handle");
    return -1;
  }
  clear_error();
  return static_cast<int>(rom->r.order());
}

int mordae_verify(const mordae_sys* sys, const mordae_rom* rom, double* max_right,
                  double* max_left, double* max_hermite, int* lagrange_only) {
  return guarded([&] {
    require(sys != nullptr && rom != nullptr, ErrC::bad_argument, "null handle");
    const mordae::InterpolationReport rep = mordae::verify_interpolation(sys->s, rom->r, rom->d);
    if (max_right != nullptr) *max_right = rep.max_right;
    if (max_left != nullptr) *max_left = rep.max_left;
    if (max_hermite != nullptr) *max_hermite = rep.max_hermite;
    if (lagrange_only != nullptr) *lagrange_only = rep.lagrange_only ? 1 : 0;
  });
}

/* ---------- transfer function and poles ---------- */

int mordae_sys_eval(const mordae_sys* sys, double re, double im, double* g_re_im) {
  return guarded([&] {
    require(sys != nullptr && g_re_im != nullptr, ErrC::bad_argument, "null argument");
    export_cmat(mordae::eval_transfer(sys->s, Cplx(re, im)), g_re_im);
  });
}

int mordae_rom_eval(const mordae_rom* rom, double re, double im, double* g_re_im) {
  return guarded([&] {
    require(rom != nullptr && g_re_im != nullptr, ErrC::bad_argument, "null argument");
    export_cmat(mordae::eval_transfer(rom->r, Cplx(re, im)), g_re_im);
  });
}

int mordae_sys_pole_count(const mordae_sys* sys, int* count, int* unstable) {
  return guarded([&] {
    require(sys != nullptr, ErrC::bad_argument, "null handle");
    const mordae::PoleReport rep = mordae::finite_poles(sys->s);
    if (count != nullptr) *count = static_cast<int>(rep.finite_poles.size());
    if (unstable != nullptr) *unstable = rep.unstable_count;
  });
}

int mordae_sys_poles(const mordae_sys* sys, double* re_im, int capacity) {
  return guarded([&] {
    require(sys != nullptr, ErrC::bad_argument, "null handle");
    export_poles(mordae::finite_poles(sys->s), re_im, capacity);
  });
}

int mordae_rom_pole_count(const mordae_rom* rom, int* count, int* unstable) {
  return guarded([&] {
    require(rom != nullptr, ErrC::bad_argument, "null handle");
    const mordae::PoleReport rep = mordae::finite_poles(rom->r);
    if (count != nullptr) *count = static_cast<int>(rep.finite_poles.size());
    if (unstable != nullptr) *unstable = rep.unstable_count;
  });
}

int mordae_rom_poles(const mordae_rom* rom, double* re_im, int capacity) {
  return guarded([&] {
    require(rom != nullptr, ErrC::bad_argument, "null handle");
    export_poles(mordae::finite_poles(rom->r), re_im, capacity);
  });
}

/* ---------- control ---------- */

mordae_lqr* mordae_lqr_solve(const mordae_rom* rom, const double* weight) {
  return guarded_new<mordae_lqr>([&] {
    require(rom != nullptr, ErrC::bad_argument, "null handle");
    const Eigen::Index m = rom->r.m();
    const Mat R = weight != nullptr ? row_major(weight, m, m) : Mat(10.0 * Mat::Identity(m, m));
    return mordae_lqr{mordae::solve_lqr(mordae::LqrProblem{rom->r, R})};
  });
}

mordae_lqr* mordae_lqr_read(const char* bundle_dir) {
  return guarded_new<mordae_lqr>([&] {
    require(bundle_dir != nullptr, ErrC::bad_argument, "null path");
    return mordae_lqr{mordae::read_lqr_bundle(bundle_dir)};
  });
}

int mordae_lqr_write(const mordae_lqr* lqr, const char* bundle_dir) {
  return guarded([&] {
    require(lqr != nullptr && bundle_dir != nullptr, ErrC::bad_argument, "null argument");
    mordae::write_lqr_bundle(bundle_dir, lqr->l, nullptr);
  });
}

void mordae_lqr_destroy(mordae_lqr* lqr) { delete lqr; }

int mordae_lqr_dims(const mordae_lqr* lqr, int* m, int* r, int* n1) {
  return guarded([&] {
    require(lqr != nullptr, ErrC::bad_argument, "null handle");
    if (m != nullptr) *m = static_cast<int>(lqr->l.K_reduced.rows());
    if (r != nullptr) *r = static_cast<int>(lqr->l.K_reduced.cols());
    if (n1 != nullptr) *n1 = static_cast<int>(lqr->l.K_full.cols());
  });
}

int mordae_lqr_info(const mordae_lqr* lqr, double* residual_norm, double* closed_loop_abscissa) {
  return guarded([&] {
    require(lqr != nullptr, ErrC::bad_argument, "null handle");
    if (residual_norm != nullptr) *residual_norm = lqr->l.residual_norm;
    if (closed_loop_abscissa != nullptr) *closed_loop_abscissa = lqr->l.closed_loop_abscissa;
  });
}

int mordae_lqr_gain_full(const mordae_lqr* lqr, double* k_full, int capacity) {
  return guarded([&] {
    require(lqr != nullptr && k_full != nullptr, ErrC::bad_argument, "null argument");
    const Mat& K = lqr->l.K_full;
    require(static_cast<int>(K.size()) <= capacity, ErrC::bad_argument, "output buffer too small");
    for (Eigen::Index i = 0; i < K.rows(); ++i)
      for (Eigen::Index j = 0; j < K.cols(); ++j) k_full[i * K.cols() + j] = K(i, j);
  });
}

int mordae_simulate(const mordae_sys* sys, const double* k_full, const double* x0,
                    unsigned long long x0_seed, double dt, double horizon,
                    const char* trajectory_csv, double* max_constraint_residual,
                    double* final_over_initial) {
  return guarded([&] {
    require(sys != nullptr, ErrC::bad_argument, "null handle");
    const Eigen::Index n1 = sys->s.n1(), m = sys->s.m();
    Mat K;
    if (k_full != nullptr) K = row_major(k_full, m, n1);
    Vec x(n1);
    if (x0 != nullptr) {
      for (Eigen::Index i = 0; i < n1; ++i) x(i) = x0[i];
    } else {
      mordae::Rng rng(x0_seed);
      for (Eigen::Index i = 0; i < n1; ++i) x(i) = rng.gaussian();
      x /= x.norm();
    }
    const mordae::Trajectory traj = mordae::simulate_closed_loop(sys->s, K, x, dt, horizon);
    if (trajectory_csv != nullptr) mordae::write_trajectory_csv(trajectory_csv, traj);
    if (max_constraint_residual != nullptr) *max_constraint_residual = traj.max_constraint_residual;
    if (final_over_initial != nullptr) {
      const double init = traj.x1.front().norm();
      *final_over_initial = init > 0.0 ? traj.x1.back().norm() / init : 0.0;
    }
  });
}

/* ---------- pipeline orchestration ---------- */

int mordae_cli_run(const char* subcommand, const mordae_cli_options* options) {
  return guarded([&] {
    require(subcommand != nullptr, ErrC::bad_argument, "null subcommand");
    mordae::CliOptions opt;
    if (options != nullptr) {
      auto str = [](const char* s) { return s == nullptr ? std::string() : std::string(s); };
      opt.config_path = str(options->config_path);
      opt.bundle_dir = str(options->bundle_dir);
      opt.rom_dir = str(options->rom_dir);
      opt.gain_dir = str(options->gain_dir);
      opt.out_dir = str(options->out_dir);
      opt.mode = str(options->mode);
      opt.seed = options->seed;
      opt.has_seed = options->has_seed != 0;
    }
    mordae::cli_run(subcommand, opt);
  });
}

}  // extern "C"
