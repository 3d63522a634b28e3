#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrs/diagnostics.hpp"
#include "lrs/factor_ops.hpp"
#include "lrs/rng.hpp"
#include "lrs/spectral.hpp"
#include "support/oracles.hpp"

using namespace lrs;
namespace oracle = lrs::testing;

TEST_SUITE("diagnostics") {

TEST_CASE("measure_nu on partial isometries, colnorm extremes, and zero") {
  Rng rng(61);
  const Matrix u = random_orthonormal(8, 4, rng);
  Rng orth_rng(62);
  const Matrix vbar = orth(rng.gaussian_matrix(6, 4), orth_rng).q;
  CHECK(measure_nu(u * vbar.transpose(), 4) == doctest::Approx(1.0).epsilon(1e-12));

  Vector shared = rng.gaussian_matrix(6, 1);
  shared.normalize();
  Matrix w(6, 4);
  for (int j = 0; j < 4; ++j) w.col(j) = shared;
  CHECK(measure_nu(u * colnorm(w).transpose(), 4) ==
        doctest::Approx(2.0).epsilon(1e-12));

  CHECK(measure_nu(Matrix::Zero(5, 5), 3) == 0.0);
}

TEST_CASE("measure_defect vanishes at the polar factor and doubles when anti-aligned") {
  Rng rng(63);
  const Matrix m = rng.gaussian_matrix(6, 5);
  const int r = 3;
  const Matrix polar = polar_rank_r(m, r);
  CHECK(measure_defect(m, polar, r) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(measure_defect(m, Matrix(-polar), r) ==
        doctest::Approx(2.0 * kyfan_norm(m, r)).epsilon(1e-10));
  CHECK_THROWS_AS(measure_defect(m, Matrix::Zero(2, 2), r), ShapeError);
}

TEST_CASE("measure_defect agrees with direct evaluation and can go negative") {
  // Correlated columns after column normalization push the dual norm above
  // one, which lets the inner product exceed the Ky Fan norm.
  Rng rng(64);
  const int r = 2;
  const Matrix u = random_orthonormal(6, r, rng);
  Vector base = rng.gaussian_matrix(5, 1);
  base.normalize();
  Vector tilted = base + 0.05 * rng.gaussian_matrix(5, 1);
  tilted.normalize();
  Matrix w(5, r);
  w.col(0) = base;
  w.col(1) = tilted;
  const Matrix direction = u * colnorm(w).transpose();
  const Matrix m = u * w.transpose();
  const double defect = measure_defect(m, direction, r);
  const double direct = kyfan_norm(m, r) - m.cwiseProduct(direction).sum();
  CHECK(defect == doctest::Approx(direct).epsilon(1e-12));
  CHECK(defect < 0.0);
}

TEST_CASE("measure_persistence on aligned, anti-aligned, and tiny inputs") {
  Rng rng(65);
  const Matrix a = rng.gaussian_matrix(4, 3);
  CHECK(measure_persistence(a, a) == doctest::Approx(1.0));
  CHECK(measure_persistence(a, Matrix(-a)) == doctest::Approx(-1.0));
  CHECK(measure_persistence(a, Matrix::Zero(4, 3)) == 0.0);
  CHECK(measure_persistence(Matrix::Zero(4, 3), a) == 0.0);
}

TEST_CASE("suffix contraction: constant and alternating sequences pass") {
  std::vector<double> constant(40, 0.5);
  CHECK(check_suffix_contraction(constant, 0.6, 1.0).ok);

  std::vector<double> alternating;
  for (int i = 0; i < 20; ++i) {
    alternating.push_back(i % 2 == 0 ? 1.5 : 0.4);
  }
  CHECK(check_suffix_contraction(alternating, 0.8, 1.9).ok);
  CHECK(oracle::brute_force_suffix_check(alternating, 0.8, 1.9));

  CHECK(check_suffix_contraction(std::vector<double>{}, 0.5, 1.0).ok);
}

TEST_CASE("suffix contraction rejects the half-contracting half-growing tail") {
  // Full-horizon geometric mean is well below one, yet the growth tail
  // violates every suffix window that covers it.
  std::vector<double> rhos(10, 0.5);
  rhos.insert(rhos.end(), 4, 2.0);
  const SuffixCheckResult result = check_suffix_contraction(rhos, 0.9, 2.0);
  CHECK_FALSE(result.ok);
  CHECK(result.t > 10);  // the violating window covers tail steps
  CHECK_FALSE(oracle::brute_force_suffix_check(rhos, 0.9, 2.0));

  double mean_log = 0.0;
  for (double rho : rhos) mean_log += std::log(rho);
  CHECK(std::exp(mean_log / static_cast<double>(rhos.size())) < 0.9);
}

TEST_CASE("suffix contraction agrees with the brute-force oracle") {
  Rng rng(66);
  for (int trial = 0; trial < 40; ++trial) {
    const int length = 5 + static_cast<int>(rng.uniform() * 195);
    std::vector<double> rhos;
    rhos.reserve(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) {
      rhos.push_back(0.3 + 1.2 * rng.uniform());
    }
    const double rho_bar = 0.55 + 0.4 * rng.uniform();
    const double c = 1.0 + 4.0 * rng.uniform();
    CHECK(check_suffix_contraction(rhos, rho_bar, c).ok ==
          oracle::brute_force_suffix_check(rhos, rho_bar, c));
  }
}

TEST_CASE("suffix contraction validates arguments") {
  std::vector<double> rhos{0.5, -1.0};
  CHECK_THROWS_AS(check_suffix_contraction(rhos, 0.5, 1.0), ValidationError);
  std::vector<double> good{0.5};
  CHECK_THROWS_AS(check_suffix_contraction(good, 1.5, 1.0), RangeError);
  CHECK_THROWS_AS(check_suffix_contraction(good, 0.5, 0.5), RangeError);
}

TEST_CASE("contraction ceilings at the reported operating point") {
  const ContractionCeilings at64 = contraction_ceilings(64, 10.0);
  CHECK(at64.original == doctest::Approx(0.0044).epsilon(0.05));
  CHECK(at64.ours == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  CHECK(at64.relaxation == doctest::Approx(22.6).epsilon(0.01));

  CHECK(contraction_ceilings(7, 1.0).ours == doctest::Approx(0.5));
  CHECK(contraction_ceilings(2, 10.0).original ==
        doctest::Approx(1.0 / 41.0).epsilon(1e-12));
}

TEST_CASE("implicit momentum coefficient is the squared tracking error") {
  CHECK(implicit_momentum_coeff(0.35) == doctest::Approx(0.1225));
  CHECK(implicit_momentum_coeff(0.007) == doctest::Approx(4.9e-5));
  CHECK(implicit_momentum_coeff(0.0) == 0.0);
  CHECK_THROWS_AS(implicit_momentum_coeff(1.5), RangeError);
}

TEST_CASE("smoothness and coupling cost ratios") {
  const CostRatios at256 = smoothness_coupling_ratios(256);
  CHECK(at256.smoothness == 256.0);
  CHECK(at256.coupling == 8.5);
  const CostRatios at1 = smoothness_coupling_ratios(1);
  CHECK(at1.smoothness == 1.0);
  CHECK(at1.coupling == 1.0);
  const CostRatios at64 = smoothness_coupling_ratios(64);
  CHECK(at64.smoothness == 64.0);
  CHECK(at64.coupling == 4.5);
}

}  // TEST_SUITE
