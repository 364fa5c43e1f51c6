#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "core/core.hpp"
#include "core/rng.hpp"
#include "testbed/testbed.hpp"
#include "transfer/transfer.hpp"

namespace mordae {

namespace {

Mat gauss_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.gaussian();
  return M;
}

// Representatives of a conjugate-closed pole list: real poles, and one of each
// conjugate pair (positive imaginary part).
std::vector<Cplx> plant_representatives(const std::vector<Cplx>& poles) {
  std::vector<Cplx> reps;
  std::vector<bool> consumed(poles.size(), false);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (consumed[i]) continue;
    const Cplx z = poles[i];
    if (z.imag() == 0.0) {
      reps.push_back(z);
      continue;
    }
    bool paired = false;
    for (std::size_t j = i + 1; j < poles.size(); ++j)
      if (!consumed[j] && poles[j] == std::conj(z)) {
        consumed[j] = true;
        paired = true;
        break;
      }
    if (!paired)
      throw Error(ErrC::infeasible_plant, "planted poles must be conjugate-closed");
    reps.push_back(Cplx(z.real(), std::abs(z.imag())));
  }
  return reps;
}

}  // namespace

Index2System generate_planted(int n1, int n2, const std::vector<Cplx>& planted_poles,
                              std::uint64_t seed) {
  if (n1 < 1 || n2 < 0 || n2 >= n1)
    throw Error(ErrC::infeasible_plant, "need n1 >= 1 and 0 <= n2 < n1");
  const int k = n1 - n2;

  const auto reps = plant_representatives(planted_poles);
  int planted_dim = 0;
  for (const Cplx& z : reps) planted_dim += z.imag() == 0.0 ? 1 : 2;
  if (planted_dim > k)
    throw Error(ErrC::infeasible_plant, "planted poles exceed the hidden dynamics dimension");

  Rng rng(seed);

  // hidden block: planted 2x2 rotation blocks / 1x1 reals, then stable log-spaced padding
  Mat H = Mat::Zero(k, k);
  int idx = 0;
  for (const Cplx& z : reps) {
    if (z.imag() == 0.0) {
      H(idx, idx) = z.real();
      idx += 1;
    } else {
      H(idx, idx) = z.real();
      H(idx, idx + 1) = z.imag();
      H(idx + 1, idx) = -z.imag();
      H(idx + 1, idx + 1) = z.real();
      idx += 2;
    }
  }
  const int npad = k - idx;
  for (int q = 0; q < npad; ++q) {
    const double t = npad == 1 ? 0.0 : static_cast<double>(q) / (npad - 1);
    H(idx + q, idx + q) = -std::pow(10.0, std::log10(0.5) + t * (std::log10(10.0) - std::log10(0.5)));
  }

  // adapted-coordinate system: constraint acts on the trailing n2 coordinates only,
  // so the hidden pencil is exactly (H, I) and the planted spectrum is preserved
  Mat A0 = Mat::Zero(n1, n1);
  A0.topLeftCorner(k, k) = H;
  if (n2 > 0) {
    A0.topRightCorner(k, n2) = 0.3 * gauss_mat(rng, k, n2);
    A0.bottomLeftCorner(n2, k) = 0.3 * gauss_mat(rng, n2, k);
    A0.bottomRightCorner(n2, n2) = -Mat::Identity(n2, n2) + 0.3 * gauss_mat(rng, n2, n2);
  }

  Mat E0 = Mat::Identity(n1, n1);
  for (int q = 0; q < n2; ++q) E0(k + q, k + q) = 0.5 + rng.uniform();

  Mat S0;
  if (n2 > 0) S0 = Mat::Identity(n2, n2) + 0.3 * gauss_mat(rng, n2, n2);

  const Mat Q = Eigen::HouseholderQR<Mat>(gauss_mat(rng, n1, n1)).householderQ();

  Index2System sys;
  sys.E11 = Q * E0 * Q.transpose();
  sys.A11 = Q * A0 * Q.transpose();
  sys.A21 = Mat::Zero(n2, n1);
  if (n2 > 0) {
    Mat A210 = Mat::Zero(n2, n1);
    A210.rightCols(n2) = S0;
    sys.A21 = A210 * Q.transpose();
  }
  sys.B1 = gauss_mat(rng, n1, 1);
  sys.C1 = gauss_mat(rng, 2, n1);
  sys.B2 = Mat::Zero(n2, 1);
  sys.C2 = Mat::Zero(2, n2);
  sys.D = Mat::Zero(2, 1);

  require_valid(sys);

  // oracle self-check: every planted pole must appear in the finite spectrum
  const PoleReport rep = finite_poles(sys);
  for (const Cplx& z : planted_poles) {
    double best = std::numeric_limits<double>::infinity();
    for (const Cplx& lam : rep.finite_poles) best = std::min(best, std::abs(lam - z));
    if (best > 1e-10 * std::max(1.0, std::abs(z)))
      throw Error(ErrC::internal_error, "planted pole not recovered by the eigenvalue oracle");
  }
  return sys;
}

}  // namespace mordae
