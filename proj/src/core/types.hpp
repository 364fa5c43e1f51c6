#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mordae {

using Mat  = Eigen::MatrixXd;
using Vec  = Eigen::VectorXd;
using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Error codes shared with the C API (values mirror mordae.h).
enum class ErrC : int {
  ok = 0,
  dimension_mismatch = 1,
  singular_mass = 2,
  rank_deficient_constraint = 3,
  singular_schur = 4,
  singular_shift = 5,
  polynomial_degree = 6,
  empty_basis = 7,
  singular_reduced_pencil = 8,
  eig_failure = 9,
  no_stabilizing_solution = 10,
  indefinite_weight = 11,
  inconsistent_state = 12,
  degenerate_geometry = 13,
  infeasible_plant = 14,
  io_error = 15,
  parse_error = 16,
  bad_argument = 17,
  empty_patch = 18,
  duplicate_entry = 19,
  internal_error = 20,
};

struct Error : std::runtime_error {
  ErrC code;
  Error(ErrC c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

// Structured index-2 quintuple: E11 x1' = A11 x1 + A21^T x2 + B1 u,
// 0 = A21 x1 + B2 u, y = C1 x1 + C2 x2 + D u.
struct Index2System {
  Mat E11, A11, A21, B1, B2, C1, C2, D;

  Eigen::Index n1() const { return E11.rows(); }
  Eigen::Index n2() const { return A21.rows(); }
  Eigen::Index m() const { return B1.cols(); }
  Eigen::Index p() const { return C1.rows(); }
};

// General descriptor form E x' = A x + B u, y = C x + D u with E possibly singular.
struct DescriptorSystem {
  Mat E, A, B, C, D;

  Eigen::Index n() const { return E.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index p() const { return C.rows(); }
};

// Interpolation points with tangent directions.  When conjugate_closed is set,
// points and directions occur in exact conjugate pairs.
struct InterpolationData {
  std::vector<Cplx> points;
  std::vector<CVec> right_dirs;  // each of length m
  std::vector<CVec> left_dirs;   // each of length p
  bool conjugate_closed = false;

  std::size_t size() const { return points.size(); }
};

enum class ReductionMode { petrov_galerkin, galerkin };

struct ReducedModel {
  Mat Er, Ar, Br, Cr, Dr;
  Mat V, W;  // bases used to build the model (rows: n1, or n1+n2 on the projector path)
  bool galerkin = false;

  Eigen::Index order() const { return Er.rows(); }
  Eigen::Index m() const { return Br.cols(); }
  Eigen::Index p() const { return Cr.rows(); }
};

// Spectral projectors of the embedded pencil onto the deflating subspaces of the
// finite eigenvalues, plus orthonormal bases of the infinite deflating subspaces.
struct SpectralProjectors {
  Mat Pl, Pr;
  Mat Vinf, Winf;
};

struct ValidationReport {
  bool ok = false;
  ErrC code = ErrC::ok;
  std::string message;
  Eigen::Index n1 = 0, n2 = 0, m = 0, p = 0;
  double e11_rcond = 0.0;        // reciprocal condition estimate of E11
  double a21_sigma_ratio = 0.0;  // sigma_min/sigma_max of A21
  double schur_rcond = 0.0;      // reciprocal condition estimate of S = A21 E11^-1 A21^T
};

struct InterpolationReport {
  struct Entry {
    Cplx sigma;
    double right_residual = 0.0;    // |G(s)b - Gr(s)b| / |G(s)b|
    double left_residual = 0.0;     // |c^T G(s) - c^T Gr(s)| / |c^T G(s)|
    double hermite_residual = 0.0;  // |c^T G'(s) b - c^T Gr'(s) b| / |c^T G'(s) b|
    bool hermite_checked = false;
  };
  std::vector<Entry> entries;
  bool lagrange_only = false;  // set for Galerkin models: derivative matching not guaranteed
  double max_right = 0.0, max_left = 0.0, max_hermite = 0.0;
};

struct FrequencyResponse {
  std::vector<double> omegas;
  std::vector<CMat> values;  // G(i*omega), p x m
  std::vector<double> norms;  // largest singular value; NaN when the point failed
  std::vector<uint8_t> ok;
};

struct PoleReport {
  std::vector<Cplx> finite_poles;  // sorted by descending real part, then imag
  int unstable_count = 0;
  std::string note;
};

struct LqrProblem {
  ReducedModel rom;
  Mat R;  // m x m, symmetric positive definite
};

struct LqrResult {
  Mat P;          // Riccati solution, r x r symmetric PSD
  Mat K_reduced;  // m x r
  Mat K_full;     // m x n1, K_reduced * V^T
  double residual_norm = 0.0;
  double closed_loop_abscissa = 0.0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> x1;
  std::vector<Vec> u;
  std::vector<Vec> y;
  double max_constraint_residual = 0.0;
};

}  // namespace mordae
