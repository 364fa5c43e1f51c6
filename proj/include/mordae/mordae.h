/* mordae — interpolatory model reduction and LQR design for index-2 DAE systems.
 *
 * C interface to the shared library: opaque handles, integer error codes, and
 * thread-local error details.  Functions returning a pointer yield NULL on
 * failure; functions returning int yield 0 (MORDAE_OK) on success and an error
 * code otherwise.  In both cases mordae_last_error_code() /
 * mordae_last_error_message() describe the most recent failure on the calling
 * thread.  Dense matrix buffers are row-major; complex scalars are passed as
 * (re, im) double pairs.
 */
#ifndef MORDAE_H
#define MORDAE_H

#ifdef __cplusplus
extern "C" {
#endif

enum {
  MORDAE_OK = 0,
  MORDAE_ERR_DIMENSION_MISMATCH = 1,
  MORDAE_ERR_SINGULAR_MASS = 2,
  MORDAE_ERR_RANK_DEFICIENT_CONSTRAINT = 3,
  MORDAE_ERR_SINGULAR_SCHUR = 4,
  MORDAE_ERR_SINGULAR_SHIFT = 5,
  MORDAE_ERR_POLYNOMIAL_DEGREE = 6,
  MORDAE_ERR_EMPTY_BASIS = 7,
  MORDAE_ERR_SINGULAR_REDUCED_PENCIL = 8,
  MORDAE_ERR_EIG_FAILURE = 9,
  MORDAE_ERR_NO_STABILIZING_SOLUTION = 10,
  MORDAE_ERR_INDEFINITE_WEIGHT = 11,
  MORDAE_ERR_INCONSISTENT_STATE = 12,
  MORDAE_ERR_DEGENERATE_GEOMETRY = 13,
  MORDAE_ERR_INFEASIBLE_PLANT = 14,
  MORDAE_ERR_IO = 15,
  MORDAE_ERR_PARSE = 16,
  MORDAE_ERR_BAD_ARGUMENT = 17,
  MORDAE_ERR_EMPTY_PATCH = 18,
  MORDAE_ERR_DUPLICATE_ENTRY = 19,
  MORDAE_ERR_INTERNAL = 20
};

const char* mordae_version(void);

/* Status of the most recent failed call on this thread. */
int mordae_last_error_code(void);
const char* mordae_last_error_message(void);

typedef struct mordae_geom mordae_geom;
typedef struct mordae_sys mordae_sys;
typedef struct mordae_rom mordae_rom;
typedef struct mordae_lqr mordae_lqr;

/* ---------- staggered grid and generators ---------- */

/* obstacle: cell rectangle {i0, i1, j0, j1} (half-open, strictly interior) or NULL. */
mordae_geom* mordae_grid_create(int nx, int ny, double lx, double ly, const int* obstacle);
void mordae_geom_destroy(mordae_geom* geom);

/* Linearized channel flow around a uniform (parabolic = 0) or parabolic profile. */
mordae_sys* mordae_oseen_create(const mordae_geom* geom, double reynolds, int parabolic,
                                double speed);

/* Replaces the outputs with patch averages; rects holds npatches quadruples
 * (x0, x1, y0, y1). */
int mordae_oseen_attach_patches(mordae_sys* sys, const mordae_geom* geom, const double* rects,
                                int npatches);

/* Synthetic system whose finite spectrum contains the given poles exactly;
 * poles_re_im holds npoles (re, im) pairs and must be conjugate-closed. */
mordae_sys* mordae_planted_create(int n1, int n2, const double* poles_re_im, int npoles,
                                  unsigned long long seed);

/* Dense construction; optional blocks (B2, C2, D) may be NULL (zero). */
mordae_sys* mordae_sys_create(int n1, int n2, int m, int p, const double* E11, const double* A11,
                              const double* A21, const double* B1, const double* B2,
                              const double* C1, const double* C2, const double* D);

/* ---------- system handles ---------- */

mordae_sys* mordae_sys_read(const char* bundle_dir);
int mordae_sys_write(const mordae_sys* sys, const char* bundle_dir);
void mordae_sys_destroy(mordae_sys* sys);
int mordae_sys_dims(const mordae_sys* sys, int* n1, int* n2, int* m, int* p);

/* Structural validation; conditioning outputs may be NULL.  Returns the
 * validation error code (MORDAE_OK when the system is well posed). */
int mordae_sys_validate(const mordae_sys* sys, double* e11_rcond, double* a21_sigma_ratio,
                        double* schur_rcond);

/* ---------- reduction ---------- */

/* points_re_im: npoints (re, im) pairs; missing conjugate partners are added
 * automatically.  bdirs_re_im (npoints x m pairs) and cdirs_re_im (npoints x p
 * pairs) may be NULL for cycling unit directions.  galerkin != 0 selects W = V. */
mordae_rom* mordae_reduce(const mordae_sys* sys, const double* points_re_im, int npoints,
                          const double* bdirs_re_im, const double* cdirs_re_im, int galerkin,
                          double svd_threshold);

mordae_rom* mordae_rom_read(const char* bundle_dir);
int mordae_rom_write(const mordae_rom* rom, const char* bundle_dir);
void mordae_rom_destroy(mordae_rom* rom);
int mordae_rom_order(const mordae_rom* rom);

/* Interpolation residuals of the reduced model at its own points/directions. */
int mordae_verify(const mordae_sys* sys, const mordae_rom* rom, double* max_right,
                  double* max_left, double* max_hermite, int* lagrange_only);

/* ---------- transfer function and poles ---------- */

/* g_re_im receives p*m (re, im) pairs, row-major over (output, input). */
int mordae_sys_eval(const mordae_sys* sys, double re, double im, double* g_re_im);
int mordae_rom_eval(const mordae_rom* rom, double re, double im, double* g_re_im);

int mordae_sys_pole_count(const mordae_sys* sys, int* count, int* unstable);
int mordae_sys_poles(const mordae_sys* sys, double* re_im, int capacity);
int mordae_rom_pole_count(const mordae_rom* rom, int* count, int* unstable);
int mordae_rom_poles(const mordae_rom* rom, double* re_im, int capacity);

/* ---------- control ---------- */

/* weight: m x m row-major or NULL for 10 * identity. */
mordae_lqr* mordae_lqr_solve(const mordae_rom* rom, const double* weight);
mordae_lqr* mordae_lqr_read(const char* bundle_dir);
int mordae_lqr_write(const mordae_lqr* lqr, const char* bundle_dir);
void mordae_lqr_destroy(mordae_lqr* lqr);
int mordae_lqr_dims(const mordae_lqr* lqr, int* m, int* r, int* n1);
int mordae_lqr_info(const mordae_lqr* lqr, double* residual_norm, double* closed_loop_abscissa);
/* k_full receives m*n1 row-major entries. */
int mordae_lqr_gain_full(const mordae_lqr* lqr, double* k_full, int capacity);

/* Implicit-Euler closed loop.  k_full (m x n1 row-major) NULL = open loop; x0
 * (length n1) NULL = seeded unit random vector; trajectory_csv NULL = no file.
 * Outputs may be NULL. */
int mordae_simulate(const mordae_sys* sys, const double* k_full, const double* x0,
                    unsigned long long x0_seed, double dt, double horizon,
                    const char* trajectory_csv, double* max_constraint_residual,
                    double* final_over_initial);

/* ---------- pipeline orchestration (CLI backend) ---------- */

typedef struct mordae_cli_options {
  const char* config_path; /* NULL when absent */
  const char* bundle_dir;
  const char* rom_dir;
  const char* gain_dir;
  const char* out_dir;
  const char* mode;        /* "petrov_galerkin" | "galerkin" | NULL */
  long long seed;          /* used when has_seed != 0 */
  int has_seed;
} mordae_cli_options;

/* subcommand: generate | reduce | sigma | poles | lqr | simulate | verify */
int mordae_cli_run(const char* subcommand, const mordae_cli_options* options);

#ifdef __cplusplus
}
#endif

#endif /* MORDAE_H */
