#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "core/core.hpp"
#include "core/rng.hpp"
#include "helpers.hpp"
#include "reduction/reduction.hpp"
#include "testbed/testbed.hpp"
#include "transfer/transfer.hpp"

using namespace mordae;
using namespace testutil;

namespace {

CMat dense_pencil_eval(const DescriptorSystem& d, Cplx s) {
  const CMat pencil = s * d.E.cast<Cplx>() - d.A.cast<Cplx>();
  return d.C.cast<Cplx>() * pencil.partialPivLu().solve(d.B.cast<Cplx>()) +
         d.D.cast<Cplx>();
}

}  // namespace

TEST_CASE("saddle-path evaluation matches the embedded pencil") {
  Index2System s = dense_system(22, 6, 2, 3, 601);
  Rng rng(41);
  s.B2 = gauss_mat(rng, 6, 2);
  s.C2 = gauss_mat(rng, 3, 6);
  s.D = gauss_mat(rng, 3, 2);
  const DescriptorSystem d = embed_index2(s);
  for (const Cplx sigma : {Cplx(0.0, 1.0), Cplx(0.4, -2.2), Cplx(3.0, 0.0)}) {
    const CMat via_saddle = eval_transfer(s, sigma);
    const CMat via_pencil = dense_pencil_eval(d, sigma);
    CHECK(rel_cmat(via_saddle, via_pencil) <= 1e-10);
    CHECK(rel_cmat(eval_transfer(d, sigma), via_pencil) <= 1e-10);
  }
}

TEST_CASE("reduced-model evaluation matches the dense resolvent formula") {
  const Index2System s = dense_system(30, 8, 2, 2, 602);
  const InterpolationData data = random_interp_data({Cplx(0.0, 1.0)}, 2, 2, 42);
  const ReducedModel rom = reduce_index2(s, data, ReductionMode::petrov_galerkin, 1e-10);
  const Cplx sigma(0.2, 0.9);
  const CMat pencil = sigma * rom.Er.cast<Cplx>() - rom.Ar.cast<Cplx>();
  const CMat want = rom.Cr.cast<Cplx>() * pencil.partialPivLu().solve(rom.Br.cast<Cplx>()) +
                    rom.Dr.cast<Cplx>();
  CHECK(rel_cmat(eval_transfer(rom, sigma), want) <= 1e-12);
}

TEST_CASE("derivative form matches the explicit two-resolvent formula") {
  const Index2System s = dense_system(18, 5, 2, 2, 603);
  const DescriptorSystem d = embed_index2(s);
  Rng rng(43);
  const CVec b = gauss_cvec(rng, 2);
  const CVec c = gauss_cvec(rng, 2);
  const Cplx sigma(0.1, 1.3);
  const CMat pencil = sigma * d.E.cast<Cplx>() - d.A.cast<Cplx>();
  const auto lu = pencil.partialPivLu();
  const CMat gprime = -d.C.cast<Cplx>() *
                      lu.solve(d.E.cast<Cplx>() * lu.solve(d.B.cast<Cplx>()));
  const Cplx want = (c.transpose() * gprime * b)(0);
  CHECK(std::abs(transfer_derivative_form(s, sigma, c, b) - want) <=
        1e-10 * std::max(1.0, std::abs(want)));
}

TEST_CASE("sweep grids are inclusive and exactly spaced") {
  const auto lin = sweep_grid(1.0, 3.0, 5, false);
  REQUIRE(lin.size() == 5);
  CHECK(lin.front() == 1.0);
  CHECK(lin.back() == 3.0);
  CHECK(rel(lin[2], 2.0) <= 1e-15);

  const auto lg = sweep_grid(1e-2, 1e2, 5, true);
  REQUIRE(lg.size() == 5);
  CHECK(lg.front() == 1e-2);
  CHECK(lg.back() == 1e2);
  CHECK(rel(lg[1], 1e-1) <= 1e-14);
  CHECK(rel(lg[2], 1.0) <= 1e-14);
  CHECK(rel(lg[3], 1e1) <= 1e-14);
}

TEST_CASE("sweep values reuse the point evaluator exactly") {
  const Index2System s = dense_system(20, 5, 2, 2, 604);
  const FrequencyResponse fr = sigma_sweep(s, 0.1, 10.0, 7, true);
  REQUIRE(fr.omegas.size() == 7);
  REQUIRE(fr.values.size() == 7);
  REQUIRE(fr.norms.size() == 7);
  for (std::size_t k = 0; k < fr.omegas.size(); ++k) {
    REQUIRE(fr.ok[k] == 1);
    const CMat direct = eval_transfer(s, Cplx(0.0, fr.omegas[k]));
    CHECK(fr.values[k] == direct);  // same code path, bit for bit
    Eigen::JacobiSVD<CMat> svd(direct);
    CHECK(fr.norms[k] == svd.singularValues()(0));
  }
}

TEST_CASE("sweep argument errors carry bad_argument") {
  const Index2System s = dense_system(10, 3, 1, 1, 605);
  CHECK(thrown_code([&] { sigma_sweep(s, -1.0, 10.0, 5, true); }) == ErrC::bad_argument);
  CHECK(thrown_code([&] { sigma_sweep(s, 1.0, 1.0, 5, true); }) == ErrC::bad_argument);
  CHECK(thrown_code([&] { sigma_sweep(s, 1.0, 10.0, 1, true); }) == ErrC::bad_argument);
}

TEST_CASE("a sweep point on a pole is reported failed, not fatal") {
  // Planted poles include +-2i; a linear grid over [1,3] with 3 points hits omega=2.
  const Index2System s = generate_planted(24, 6, {Cplx(0.0, 2.0), Cplx(0.0, -2.0)}, 11);
  const FrequencyResponse fr = sigma_sweep(s, 1.0, 3.0, 3, false);
  REQUIRE(fr.omegas.size() == 3);
  CHECK(fr.ok[0] == 1);
  CHECK(fr.ok[1] == 0);
  CHECK(std::isnan(fr.norms[1]));
  CHECK(fr.values[1].size() == 0);
  CHECK(fr.ok[2] == 1);
  CHECK(std::isfinite(fr.norms[2]));
}

TEST_CASE("finite poles of a planted system are recovered exactly") {
  const std::vector<Cplx> want{Cplx(-0.5, 0.0), Cplx(-1.0, 2.0), Cplx(-1.0, -2.0)};
  const Index2System s = generate_planted(30, 8, want, 12);
  const PoleReport rep = finite_poles(s);
  REQUIRE(rep.finite_poles.size() == 22);  // n1 - n2 finite eigenvalues
  CHECK(rep.unstable_count == 0);

  // Sorted by descending real part, then ascending imaginary part.
  for (std::size_t k = 1; k < rep.finite_poles.size(); ++k) {
    const Cplx a = rep.finite_poles[k - 1], b = rep.finite_poles[k];
    CHECK((a.real() > b.real() ||
           (a.real() == b.real() && a.imag() <= b.imag())));
  }
  // The planted trio appears to near machine precision.
  for (const Cplx& w : want) {
    double best = 1e300;
    for (const Cplx& g : rep.finite_poles) best = std::min(best, std::abs(g - w));
    CHECK(best <= 1e-10);
  }
  // Real axis poles carry +0.0 imaginary parts after canonicalization.
  for (const Cplx& g : rep.finite_poles)
    if (g.imag() == 0.0) CHECK_FALSE(std::signbit(g.imag()));
}

TEST_CASE("unstable poles are counted and conjugate-paired") {
  const std::vector<Cplx> want{Cplx(0.3, 1.0), Cplx(0.3, -1.0), Cplx(-2.0, 0.0)};
  const Index2System s = generate_planted(20, 5, want, 13);
  const PoleReport rep = finite_poles(s);
  CHECK(rep.unstable_count == 2);
  // Leading entries are the unstable pair (largest real part first).
  CHECK(std::abs(rep.finite_poles[0] - Cplx(0.3, -1.0)) <= 1e-10);
  CHECK(std::abs(rep.finite_poles[1] - Cplx(0.3, 1.0)) <= 1e-10);
  // Conjugate symmetry of the whole spectrum.
  for (const Cplx& g : rep.finite_poles) {
    if (g.imag() == 0.0) continue;
    double best = 1e300;
    for (const Cplx& h : rep.finite_poles) best = std::min(best, std::abs(h - std::conj(g)));
    CHECK(best <= 1e-8);
  }
}

TEST_CASE("descriptor and structured pole paths agree on the finite spectrum") {
  const Index2System s = generate_planted(18, 4, {Cplx(-0.7, 0.0)}, 14);
  const PoleReport structured = finite_poles(s);
  const PoleReport embedded = finite_poles(embed_index2(s));
  REQUIRE(structured.finite_poles.size() == 14);
  REQUIRE(embedded.finite_poles.size() == 14);  // 2 n2 infinite eigenvalues filtered
  for (std::size_t k = 0; k < structured.finite_poles.size(); ++k)
    CHECK(std::abs(structured.finite_poles[k] - embedded.finite_poles[k]) <= 1e-7);
  CHECK(embedded.note.find("infinite") != std::string::npos);
}

TEST_CASE("reduced models expose their pole report") {
  const Index2System s = generate_planted(24, 6, {Cplx(-0.9, 0.5), Cplx(-0.9, -0.5)}, 15);
  const InterpolationData data =
      random_interp_data({Cplx(0.0, 0.5), Cplx(0.0, 1.5)}, 1, 2, 44);
  const ReducedModel rom = reduce_index2(s, data, ReductionMode::petrov_galerkin, 1e-10);
  const PoleReport rep = finite_poles(rom);
  CHECK(rep.finite_poles.size() == static_cast<std::size_t>(rom.order()));
}

TEST_CASE("spectral abscissa handles standard and generalized pencils") {
  Mat A = Eigen::Vector3d{-1.0, -3.0, -0.25}.asDiagonal();
  CHECK(rel(spectral_abscissa(A, Mat::Identity(3, 3)), -0.25) <= 1e-12);
  CHECK(rel(spectral_abscissa(A, 2.0 * Mat::Identity(3, 3)), -0.125) <= 1e-12);

  Mat U = Mat::Zero(2, 2);
  U << -1.0, 5.0, 0.0, 0.5;  // upper triangular: eigenvalues -1, 0.5
  CHECK(rel(spectral_abscissa(U, Mat::Identity(2, 2)), 0.5) <= 1e-12);
}
