#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wright_poisson/errors.hpp"
#include "wright_poisson/special_functions.hpp"

using namespace wright_poisson;
using doctest::Approx;

namespace {

const double kE = std::numbers::e;

// High-precision references (40-digit evaluation, rounded to double).
constexpr double kLogGammaHalf = 0.57236494292470008707;
constexpr double kLogGammaMilli = 6.9071788853838536825;
constexpr double kLogGamma1000 = 5905.2204232091812118;
constexpr double kLogGamma7p3 = 7.1478925230222490328;
constexpr double kMl2_05_15_1 = 4.0089800807622834663;
constexpr double kMl2_15_05_m15 = -0.38323852502395565155;
constexpr double kMl2_05_m05_1 = 5.2910748725361616098;
constexpr double kMl3_07_12_25_08 = 7.3662263264760117766;

WrightSpec normalizer(double alpha, double beta, double z) {
  return WrightSpec{{{1.0, 1.0}}, {{beta, alpha}}, z};
}

}  // namespace

TEST_CASE("log_gamma reference values") {
  CHECK(log_gamma(1.0) == 0.0);
  CHECK(log_gamma(2.0) == 0.0);
  CHECK(oracle::rel_err(log_gamma(0.5), kLogGammaHalf) <= 1e-15);
  CHECK(oracle::rel_err(log_gamma(1e-3), kLogGammaMilli) <= 1e-13);
  CHECK(oracle::rel_err(log_gamma(1e3), kLogGamma1000) <= 1e-13);
  CHECK(oracle::rel_err(log_gamma(7.3), kLogGamma7p3) <= 1e-13);
  // ln Γ(1/2) = ln √π, ln Γ(n) = ln (n-1)!
  CHECK(log_gamma(0.5) == Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));
  CHECK(log_gamma(11.0) == Approx(std::log(3628800.0)).epsilon(1e-15));
}

TEST_CASE("log_gamma rejects nonpositive and non-finite input") {
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(log_gamma(std::nan("")), DomainError);
}

TEST_CASE("reciprocal_gamma vanishes at poles and reflects for x < 0") {
  CHECK(reciprocal_gamma(0.0) == 0.0);
  CHECK(reciprocal_gamma(-1.0) == 0.0);
  CHECK(reciprocal_gamma(-7.0) == 0.0);
  CHECK(reciprocal_gamma(-3.0 + 5e-13) == 0.0);
  CHECK(reciprocal_gamma(3.0) == 0.5);
  // 1/Γ(-1/2) = -1 / (2√π)
  CHECK(reciprocal_gamma(-0.5) == Approx(-0.5 / std::sqrt(std::numbers::pi)).epsilon(1e-15));
  CHECK(reciprocal_gamma(-2.5) == Approx(static_cast<double>(oracle::rgamma(-2.5L))).epsilon(1e-14));
  CHECK(reciprocal_gamma(150.0) == Approx(std::exp(-std::lgamma(150.0))).epsilon(1e-12));
  CHECK(reciprocal_gamma(172.0) > 0.0);
  CHECK(reciprocal_gamma(172.0) == Approx(std::exp(-std::lgamma(172.0))).epsilon(1e-10));
  // 1/Γ(200) is below the smallest subnormal
  CHECK(reciprocal_gamma(200.0) == 0.0);
  CHECK_THROWS_AS(reciprocal_gamma(std::nan("")), DomainError);
  CHECK_THROWS_AS(reciprocal_gamma(-std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(-3.7, 0) == 1.0);
  CHECK(pochhammer(0.0, 0) == 1.0);
  CHECK(pochhammer(3.0, 2) == 12.0);
  CHECK(pochhammer(-2.0, 3) == 0.0);
  CHECK(pochhammer(-2.0, 2) == 2.0);
  for (std::uint64_t r = 0; r <= 20; ++r) {
    CHECK(pochhammer(1.0, r) == Approx(std::exp(log_gamma(static_cast<double>(r) + 1.0))).epsilon(1e-13));
  }

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> gamma_dist(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double g = gamma_dist(gen);
    for (std::uint64_t n = 0; n < 50; ++n) {
      CHECK(pochhammer(g, n + 1) == pochhammer(g, n) * (g + static_cast<double>(n)));
    }
  }
}

TEST_CASE("wright_convergence_index") {
  CHECK(wright_convergence_index(normalizer(0.7, 2.0, 1.0)) == Approx(0.7 - 1.0));
  CHECK(wright_convergence_index(WrightSpec{}) == 0.0);
  const WrightSpec second{{{1, 1}, {1, 1}}, {{-1, 1}, {2.0, 2.5}}, 1.0};
  CHECK(wright_convergence_index(second) == Approx(2.5 - 1.0));
}

TEST_CASE("wright_series reduces to the exponential") {
  const WrightSpec exp_spec{{{1, 1}}, {{1, 1}}, 1.0};
  CHECK(wright_series(exp_spec).value == Approx(kE).epsilon(1e-15));
  CHECK(wright_series(WrightSpec{{{1, 1}}, {{1, 1}}, -1.5}).value ==
        Approx(std::exp(-1.5)).epsilon(1e-14));
  CHECK(wright_series(normalizer(1.0, 1.0, 1.0)).value == Approx(kE).epsilon(1e-15));
  // z = 0 leaves only Γ(1)/Γ(β)
  CHECK(wright_series(normalizer(0.5, 2.5, 0.0)).value ==
        Approx(reciprocal_gamma(2.5)).epsilon(1e-15));
}

TEST_CASE("second-factorial 2Psi2 has exact zeros at k = 0, 1") {
  for (const double beta : {0.5, 1.0, 2.0, 3.0}) {
    for (const double alpha : {0.5, 1.5, 3.0}) {
      const WrightSpec spec{{{1, 1}, {1, 1}}, {{-1, 1}, {beta, alpha}}, 1.7};
      CHECK(wright_series_term(spec, 0) == 0.0);
      CHECK(wright_series_term(spec, 1) == 0.0);
      // k = 2: Γ(3)² / (Γ(1) Γ(β + 2α)) · z² / 2!
      const double want = 2.0 * 1.7 * 1.7 / std::tgamma(beta + 2.0 * alpha);
      CHECK(wright_series_term(spec, 2) == Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("wright_series handles negative upper arguments with sign tracking") {
  // Σ Γ(-1/2 + k) z^k / k!, compared against a long double summation.
  const double z = 0.3;
  const WrightSpec spec{{{-0.5, 1.0}}, {}, z};
  long double want = 0.0L;
  long double fact = 1.0L;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) fact *= k;
    want += std::tgamma(-0.5L + k) * std::pow(static_cast<long double>(z), k) / fact;
  }
  const SeriesResult got = wright_series(spec);
  CHECK(oracle::rel_err(got.value, want) <= 1e-13);
  CHECK(got.warning.has_value());  // Δ = -1
}

TEST_CASE("wright_series rejects an upper pole and warns past the divergence boundary") {
  CHECK_THROWS_AS(wright_series(WrightSpec{{{-2.0, 1.0}}, {}, 0.5}), DomainError);
  CHECK_THROWS_AS(wright_series(WrightSpec{{{1.0, 1.0}}, {{1.0, 0.0}}, 0.5}), DomainError);

  // Δ = -1: Σ Γ(1+k) z^k / k! = 1 / (1 - z), still summable for |z| < 1.
  const SeriesResult geometric = wright_series(WrightSpec{{{1.0, 1.0}}, {}, 0.5});
  CHECK(geometric.value == Approx(2.0).epsilon(1e-14));
  REQUIRE(geometric.warning.has_value());

  CHECK_FALSE(wright_series(normalizer(0.5, 1.0, 1.0)).warning.has_value());
}

TEST_CASE("mittag_leffler family closed forms") {
  CHECK(mittag_leffler(1.0, 1.0).value == Approx(kE).epsilon(1e-15));
  CHECK(mittag_leffler(2.0, 1.0).value == Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(mittag_leffler(0.5, 0.0).value == 1.0);
  // E_{1/2}(z) = e^{z²} erfc(-z)
  CHECK(mittag_leffler(0.5, -2.0).value ==
        Approx(std::exp(4.0) * std::erfc(2.0)).epsilon(1e-12));
  CHECK(mittag_leffler(0.5, 1.0).value == Approx(kE * std::erfc(-1.0)).epsilon(1e-14));

  CHECK(mittag_leffler2(1.0, 2.0, 1.0).value == Approx(kE - 1.0).epsilon(1e-15));
  CHECK(mittag_leffler2(1.0, 0.0, 1.0).value == Approx(kE).epsilon(1e-15));
  CHECK(oracle::rel_err(mittag_leffler2(0.5, 1.5, 1.0).value, kMl2_05_15_1) <= 1e-14);
  CHECK(oracle::rel_err(mittag_leffler2(1.5, 0.5, -1.5).value, kMl2_15_05_m15) <= 1e-13);
  CHECK(oracle::rel_err(mittag_leffler2(0.5, -0.5, 1.0).value, kMl2_05_m05_1) <= 1e-14);

  CHECK(mittag_leffler3(1.0, 1.0, 1.0, 1.0).value == Approx(kE).epsilon(1e-15));
  CHECK(mittag_leffler3(0.8, 2.5, 3.0, 0.0).value == Approx(reciprocal_gamma(2.5)).epsilon(1e-15));
  CHECK(oracle::rel_err(mittag_leffler3(0.7, 1.2, 2.5, 0.8).value, kMl3_07_12_25_08) <= 1e-13);
  // (−2)_k vanishes for k > 2: 1 − 2·3 + 2·9/(2·2) = −0.5
  CHECK(mittag_leffler3(1.0, 1.0, -2.0, 3.0).value == Approx(-0.5).epsilon(1e-15));

  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler2(-1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler3(0.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("identity web over the series envelope") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> alpha_dist(0.3, 3.0);
  std::uniform_real_distribution<double> beta_dist(0.1, 3.0);
  std::uniform_real_distribution<double> z_dist(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double alpha = alpha_dist(gen);
    const double beta = beta_dist(gen);
    const double z = z_dist(gen);
    const double e1 = mittag_leffler(alpha, z).value;
    CHECK(std::abs(mittag_leffler2(alpha, 1.0, z).value - e1) <= 1e-12 * std::abs(e1));
    const double e2 = mittag_leffler2(alpha, beta, z).value;
    CHECK(std::abs(mittag_leffler3(alpha, beta, 1.0, z).value - e2) <= 1e-12 * std::abs(e2));
    // Wright form of the same function
    CHECK(std::abs(wright_series(normalizer(alpha, beta, z)).value - e2) <= 1e-12 * std::abs(e2));
  }
}

TEST_CASE("series agree with an independent long double summation for z >= 0") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> alpha_dist(0.3, 3.0);
  std::uniform_real_distribution<double> beta_dist(-2.0, 3.0);
  std::uniform_real_distribution<double> z_dist(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double alpha = alpha_dist(gen);
    const double beta = beta_dist(gen);
    const double z = z_dist(gen);
    const long double want = oracle::ml2(alpha, beta, z);
    const double got = mittag_leffler2(alpha, beta, z).value;
    INFO("alpha=", alpha, " beta=", beta, " z=", z);
    CHECK(std::abs(got - want) <= 1e-12L * std::max(1.0L, std::abs(want)));
  }
}

TEST_CASE("truncation soundness: tighter control moves results by <= 10 rel_tol") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> alpha_dist(0.4, 3.0);
  std::uniform_real_distribution<double> z_dist(0.0, 3.0);
  SeriesControl loose;
  loose.rel_tol = 1e-12;
  SeriesControl tight = loose;
  tight.rel_tol = loose.rel_tol / 2.0;
  tight.max_terms = loose.max_terms * 2;
  for (int i = 0; i < 100; ++i) {
    const double alpha = alpha_dist(gen);
    const double z = z_dist(gen);
    const double a = mittag_leffler2(alpha, 1.3, z, loose).value;
    const double b = mittag_leffler2(alpha, 1.3, z, tight).value;
    CHECK(std::abs(a - b) <= 10.0 * loose.rel_tol * std::abs(b));
  }
}

TEST_CASE("log_value tracks value") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> alpha_dist(0.5, 3.0);
  std::uniform_real_distribution<double> z_dist(0.0, 40.0);
  for (int i = 0; i < 300; ++i) {
    const double alpha = alpha_dist(gen);
    const double z = z_dist(gen);
    const SeriesResult res = mittag_leffler2(alpha, 1.0, z);
    REQUIRE(res.log_value > 0.0);
    if (!std::isfinite(res.value)) {
      CHECK(res.log_value > 709.0);
      continue;
    }
    const double back = std::exp(res.log_value);
    // exp∘log cannot beat the rounding of log_value itself, which grows
    // with |log_value|; inside |log| <= 2 that is within 4 ulps.
    if (std::abs(res.log_value) <= 2.0) {
      CHECK(oracle::ulp_distance(back, res.value) <= 4);
    } else {
      CHECK(std::abs(back - res.value) <=
            (std::abs(res.log_value) + 4.0) * std::numeric_limits<double>::epsilon() * res.value);
    }
  }
}

TEST_CASE("rescaling keeps huge sums usable") {
  const SeriesResult big = mittag_leffler(1.0, 700.0);
  CHECK(std::isfinite(big.value));
  CHECK(big.log_value == Approx(700.0).epsilon(1e-13));
  CHECK(big.value == Approx(std::exp(700.0)).epsilon(1e-12));

  const SeriesResult huge = mittag_leffler(1.0, 900.0);
  CHECK(std::isinf(huge.value));
  CHECK(huge.log_value == Approx(900.0).epsilon(1e-13));
  CHECK(huge.scaled_value * std::exp(huge.log_scale - 900.0) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("non-convergence and control validation") {
  // 2^{1/α}/α terms are needed before the series turns around.
  CHECK_THROWS_AS(mittag_leffler(0.05, 2.0), NonConvergenceError);
  SeriesControl tiny;
  tiny.max_terms = 8;
  CHECK_THROWS_AS(mittag_leffler(1.0, 30.0, tiny), NonConvergenceError);

  SeriesControl bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(mittag_leffler(1.0, 1.0, bad), DomainError);
  bad = SeriesControl{};
  bad.min_terms = 20;
  bad.max_terms = 10;
  CHECK_THROWS_AS(mittag_leffler(1.0, 1.0, bad), DomainError);
}

TEST_CASE("concurrent evaluation matches serial evaluation") {
  std::vector<double> zs;
  for (int i = 0; i < 64; ++i) zs.push_back(-2.0 + 0.0625 * i);
  std::vector<double> serial;
  for (const double z : zs) serial.push_back(mittag_leffler3(0.75, 1.25, 1.5, z).value);

  std::vector<double> parallel(zs.size());
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < zs.size(); i += 4) {
        parallel[i] = mittag_leffler3(0.75, 1.25, 1.5, zs[i]).value;
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(parallel == serial);
}
