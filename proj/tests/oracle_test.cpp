#include <gtest/gtest.h>

#include <random>

#include "tmsum/digits.hpp"
#include "tmsum/oracle.hpp"
#include "tmsum/phase.hpp"

namespace {

using tmsum::complex;

void expect_complex_near(complex actual, complex expected, double tol = 1e-12) {
  EXPECT_NEAR(actual.real(), expected.real(), tol);
  EXPECT_NEAR(actual.imag(), expected.imag(), tol);
}

TEST(Phase, FracMulIsExactForLargeMultipliers) {
  // 2^-40 * (2^40 + 3) = 1 + 3 * 2^-40.
  EXPECT_DOUBLE_EQ(tmsum::frac_mul(0x1p-40, (std::uint64_t{1} << 40) + 3), 3 * 0x1p-40);
  // 0.75 * odd = 0.75 or 0.25 mod 1, no matter how large.
  EXPECT_DOUBLE_EQ(tmsum::frac_mul(0.75, (std::uint64_t{1} << 62) + 1), 0.75);
  EXPECT_DOUBLE_EQ(tmsum::frac_mul(-0.25, 3), 0.25);
  EXPECT_DOUBLE_EQ(tmsum::frac_mul(0.3, 0), 0.0);
}

TEST(Phase, RationalFrequencyIsReduced) {
  const tmsum::rational_frequency r(-6, 8);
  EXPECT_EQ(r.a, 1u);
  EXPECT_EQ(r.q, 4u);
  EXPECT_DOUBLE_EQ(tmsum::phase(r, 7), 0.75);
  EXPECT_THROW(tmsum::rational_frequency(1, 0), std::invalid_argument);
}

TEST(Phase, UnitHasModulusOne) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = static_cast<double>(rng() >> 11) * 0x1p-53 * 100.0 - 50.0;
    EXPECT_NEAR(std::abs(tmsum::unit(tmsum::frac(x))), 1.0, 1e-12);
  }
}

TEST(NaiveLinear, Examples) {
  expect_complex_near(tmsum::naive_linear_sum(0.0, 8), {-2.0, 0.0});
  expect_complex_near(tmsum::naive_linear_sum(0.5, 8), {-2.0, 0.0});
  expect_complex_near(tmsum::naive_linear_sum(0.0, 1), {-1.0, 0.0});
  expect_complex_near(tmsum::naive_linear_sum(0.0, tmsum::floor_cutoff(8.9)), {-2.0, 0.0});
}

TEST(NaiveQuadratic, Examples) {
  expect_complex_near(tmsum::naive_quadratic_sum(0.0, 8), {-2.0, 0.0});
  expect_complex_near(tmsum::naive_quadratic_sum(1.0, 8), {-2.0, 0.0});
  // -eps(1) + eps(2) - eps(3) + eps(4) = 1 - 1 - 1 - 1
  expect_complex_near(tmsum::naive_quadratic_sum(0.5, 4), {-2.0, 0.0});
}

TEST(NaiveGauss, Examples) {
  expect_complex_near(tmsum::naive_gauss_sum(0.0, 8), {8.0, 0.0});
  expect_complex_near(tmsum::naive_gauss_sum(0.5, 2), {0.0, 0.0});
  // e(1/4) + e(1) + e(9/4) + e(4) = i + 1 + i + 1
  expect_complex_near(tmsum::naive_gauss_sum(0.25, 4), {2.0, 2.0});
}

TEST(NaiveCorrelation, Examples) {
  using args = tmsum::correlation_args<double>;
  expect_complex_near(tmsum::naive_correlation_sum(args{4.0, 1, 0.0}), {-2.0, 0.0});
  expect_complex_near(tmsum::naive_correlation_sum(args{1.0, 1, 0.0}), {1.0, 0.0});
  expect_complex_near(tmsum::naive_correlation_sum(args{4.0, 2, 0.0}), {0.0, 0.0});
  expect_complex_near(tmsum::naive_correlation_sum(args{4.7, 2, 0.0}), {0.0, 0.0});
  EXPECT_THROW(tmsum::naive_correlation_sum(args{4.0, 0, 0.0}), std::invalid_argument);
}

TEST(RestrictedQuadratic, Examples) {
  expect_complex_near(tmsum::restricted_quadratic_sum(0.0, 8), {3.0, 0.0});
  expect_complex_near(tmsum::restricted_quadratic_sum(0.37, 1), {0.0, 0.0});
}

TEST(RestrictedQuadratic, IndicatorIdentity) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const double alpha = static_cast<double>(rng() >> 11) * 0x1p-53;
    const std::uint64_t X = 1 + rng() % 10'000;
    const complex expected =
        0.5 * (tmsum::naive_quadratic_sum(alpha, X) + tmsum::naive_gauss_sum(alpha, X));
    ASSERT_LE(std::abs(tmsum::restricted_quadratic_sum(alpha, X) - expected), 1e-9);
  }
}

TEST(OracleSums, ConjugationAndTrivialBounds) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const double alpha = static_cast<double>(rng() >> 11) * 0x1p-53;
    const std::uint64_t X = 1 + rng() % 3000;
    const std::uint64_t h = 1 + rng() % 40;
    const complex lin = tmsum::naive_linear_sum(alpha, X);
    const complex corr = tmsum::naive_correlation_sum(X, h, alpha);
    EXPECT_LE(std::abs(lin), static_cast<double>(X));
    EXPECT_LE(std::abs(corr), static_cast<double>(X));
    EXPECT_LE(std::abs(tmsum::naive_linear_sum(-alpha, X) - std::conj(lin)), 1e-9);
    EXPECT_LE(std::abs(tmsum::naive_correlation_sum(X, h, -alpha) - std::conj(corr)), 1e-9);
    EXPECT_LE(std::abs(tmsum::naive_quadratic_sum(-alpha, X) - std::conj(tmsum::naive_quadratic_sum(alpha, X))),
              1e-9);
  }
}

TEST(OracleSums, LinearSumAtZeroCountsClasses) {
  for (std::uint64_t X : {1, 2, 8, 1000, 65537}) {
    const auto t0 = tmsum::gelfond_count(X, 0, 1, 0).count;
    const auto t1 = tmsum::gelfond_count(X, 0, 1, 1).count;
    EXPECT_DOUBLE_EQ(tmsum::naive_linear_sum(0.0, X).real(),
                     static_cast<double>(t0) - static_cast<double>(t1));
  }
}

TEST(OracleSums, RationalAndRealFrequenciesAgree) {
  const tmsum::rational_frequency r(3, 10);
  const complex a = tmsum::naive_quadratic_sum(r, 5000);
  // For q = 10 the double 0.3 differs by ~1e-17, which n^2 <= 2.5e7 keeps below 1e-9 in phase.
  const complex b = tmsum::naive_quadratic_sum(0.3, 5000);
  EXPECT_LE(std::abs(a - b), 1e-6);
}

}  // namespace
