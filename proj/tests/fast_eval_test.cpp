#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "tmsum/fast_eval.hpp"
#include "tmsum/oracle.hpp"

namespace {

using tmsum::complex;

double draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

void expect_complex_near(complex actual, complex expected, double tol = 1e-9) {
  EXPECT_NEAR(actual.real(), expected.real(), tol);
  EXPECT_NEAR(actual.imag(), expected.imag(), tol);
}

TEST(GeometricSum, Examples) {
  expect_complex_near(tmsum::geometric_sum_closed(17, 0.0), {17.0, 0.0});
  expect_complex_near(tmsum::geometric_sum_closed(4, 0.5), {0.0, 0.0});
  expect_complex_near(tmsum::geometric_sum_closed(3, 0.5), {-1.0, 0.0});
  EXPECT_THROW(tmsum::geometric_sum_closed(0, 0.1), std::invalid_argument);
}

TEST(GeometricSum, MatchesDirectSummation) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const double gamma = draw(rng);
    const std::uint64_t M = 1 + rng() % 5000;
    complex direct{0.0, 0.0};
    for (std::uint64_t n = 1; n <= M; ++n) direct += tmsum::unit(tmsum::frac_mul(gamma, n));
    ASSERT_LE(std::abs(tmsum::geometric_sum_closed(M, gamma) - direct), 1e-9);
  }
}

TEST(GeometricSum, NearResonantFrequencies) {
  // ||gamma|| far below 1e-9: the sum is M e((M+1) gamma / 2) to first order.
  for (double gamma : {1e-12, 1.0 - 1e-13, 3e-10}) {
    const std::uint64_t M = 1'000'000;
    std::complex<long double> direct{0.0L, 0.0L};
    for (std::uint64_t n = 1; n <= M; ++n) {
      const complex u = tmsum::unit(tmsum::frac_mul(gamma, n));
      direct += std::complex<long double>(u.real(), u.imag());
    }
    const complex d{static_cast<double>(direct.real()), static_cast<double>(direct.imag())};
    EXPECT_LE(std::abs(tmsum::geometric_sum_closed(M, gamma) - d), 1e-8);
  }
}

TEST(GeometricSum, DirichletBound) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const double gamma = draw(rng);
    const std::uint64_t M = 1 + rng() % 1'000'000;
    const double d = std::abs(gamma - std::round(gamma));
    const double bound = std::min(static_cast<double>(M), 1.0 / (2.0 * d));
    ASSERT_LE(std::abs(tmsum::geometric_sum_closed(M, gamma)), bound * (1 + 1e-12));
  }
}

TEST(FastLinear, Examples) {
  for (int k = 1; k <= 16; ++k) {
    const std::uint64_t X = std::uint64_t{1} << k;
    ASSERT_NEAR(tmsum::naive_linear_sum(0.0, X).real(), -2.0, 1e-12) << k;
  }
  expect_complex_near(tmsum::fast_linear_sum(0.0, std::uint64_t{1} << 20), {-2.0, 0.0}, 1e-12);
  expect_complex_near(tmsum::fast_linear_sum(0.5, 8), {-2.0, 0.0}, 1e-12);
  expect_complex_near(tmsum::fast_linear_sum(0.3, 100'000), tmsum::naive_linear_sum(0.3, 100'000), 1e-7);
}

TEST(FastLinear, MatchesOracle) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 150; ++t) {
    const double alpha = draw(rng);
    const std::uint64_t X = 1 + rng() % 200'000;
    ASSERT_LE(std::abs(tmsum::fast_linear_sum(alpha, X) - tmsum::naive_linear_sum(alpha, X)), 1e-7);
  }
}

TEST(FastLinear, HandlesHugeCutoffs) {
  const std::uint64_t X = std::uint64_t{1} << 50;
  const complex v = tmsum::fast_linear_sum(0.1234567, X);
  EXPECT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
  // |S(alpha)| <= 3 X^lambda holds for powers of two by the product formula.
  EXPECT_LE(std::abs(v), 3.0 * std::pow(static_cast<double>(X), tmsum::gelfond_lambda));
}

TEST(ShiftPair, Examples) {
  const auto p = tmsum::lemma3_eval(4, 0.0);
  expect_complex_near(p.shift1, {-2.0, 0.0});
  expect_complex_near(p.shift2, {0.0, 0.0});
  for (double gamma : {0.0, 0.21, 0.77}) {
    const auto one = tmsum::lemma3_eval(1, gamma);
    const complex e = tmsum::unit(gamma);
    expect_complex_near(one.shift1, e);
    expect_complex_near(one.shift2, -e);
  }
}

TEST(ShiftPair, MatchesOracle) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const double gamma = draw(rng);
    const std::uint64_t Y = rng() % 50'000;
    const auto p = tmsum::lemma3_eval(Y, gamma);
    ASSERT_LE(std::abs(p.shift1 - tmsum::naive_correlation_sum(Y, 1, gamma)), 1e-8);
    ASSERT_LE(std::abs(p.shift2 - tmsum::naive_correlation_sum(Y, 2, gamma)), 1e-8);
  }
}

TEST(DigitDescent, Structure) {
  const auto d = tmsum::make_descent(0b101101);
  EXPECT_EQ(d.N, 4);
  EXPECT_EQ(d.w, (std::vector<int>{1, 0, 1, 1, 0}));
  EXPECT_EQ(d.s, (std::vector<int>{-1, 1, -1, -1, 1}));
  EXPECT_EQ(d.h_seq, (std::vector<std::uint64_t>{45, 22, 11, 5, 2, 1}));
  for (std::uint64_t h = 2; h < 5000; ++h) {
    const auto dd = tmsum::make_descent(h);
    ASSERT_EQ(std::bit_width(h), dd.N + 2);
    ASSERT_TRUE(dd.h_seq[dd.N] == 2 || dd.h_seq[dd.N] == 3);
    ASSERT_EQ(dd.h_seq[dd.N + 1], 1u);
  }
  EXPECT_THROW(tmsum::make_descent(1), std::invalid_argument);
}

TEST(DigitReduction, ShiftFourAtZeroFrequency) {
  const auto t = tmsum::lemma2_reduction(4, 0.0, 4096);
  ASSERT_EQ(t.levels.size(), 2u);
  expect_complex_near(t.final_coeffs.x, {4.0, 0.0}, 0.0);
  expect_complex_near(t.final_coeffs.y, {0.0, 0.0}, 0.0);
  const complex exact = tmsum::naive_correlation_sum(4096, 4, 0.0);
  expect_complex_near(t.reconstruct(tmsum::lemma3_eval(t.final_cutoff, t.final_beta)), exact);
  // Up to the boundary terms, S(X,4,0) is 4 S(X/4,1,0).
  EXPECT_LE(std::abs(exact - 4.0 * tmsum::naive_correlation_sum(1024, 1, 0.0)), 4.0 * 2 + 4);
}

TEST(DigitReduction, ShiftTwoIsOneStep) {
  for (double beta : {0.0, 0.1, 0.45, 0.9}) {
    const auto t = tmsum::lemma2_reduction(2, beta, 10'000);
    ASSERT_EQ(t.levels.size(), 1u);
    expect_complex_near(t.final_coeffs.x, 1.0 + tmsum::unit(beta), 1e-15);
    expect_complex_near(t.final_coeffs.y, {0.0, 0.0}, 1e-15);
    expect_complex_near(t.reconstruct(tmsum::lemma3_eval(t.final_cutoff, t.final_beta)),
                        tmsum::naive_correlation_sum(10'000, 2, beta));
  }
}

TEST(DigitReduction, InitialPairDependsOnParity) {
  for (std::uint64_t h : {3, 5, 7, 101, 4095}) {
    const auto t = tmsum::lemma2_reduction(h, 0.3, 100);
    expect_complex_near(t.levels[0].coeffs.x, {0.0, 0.0}, 0.0);
    expect_complex_near(t.levels[0].coeffs.y, {1.0, 0.0}, 0.0);
  }
  for (std::uint64_t h : {2, 4, 6, 100, 4096}) {
    const auto t = tmsum::lemma2_reduction(h, 0.3, 100);
    expect_complex_near(t.levels[0].coeffs.x, {1.0, 0.0}, 0.0);
    expect_complex_near(t.levels[0].coeffs.y, {0.0, 0.0}, 0.0);
  }
  EXPECT_THROW(tmsum::lemma2_reduction(1, 0.3, 100), std::invalid_argument);
}

TEST(DigitReduction, RecurrencesAreTheDigitRecurrences) {
  // Steps after level 0 follow x' = (s + (s+1)/2 e) x - (s+1)/2 y,
  // y' = (s-1)/2 e x - ((s-1)/2 + s e) y with s = s_j.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t h = 2 + rng() % 3000;
    const auto tr = tmsum::lemma2_reduction(h, draw(rng), 1000);
    for (std::size_t j = 1; j < tr.levels.size(); ++j) {
      const auto& prev = tr.levels[j - 1];
      const auto& cur = tr.levels[j];
      (void)prev;
      const double s = tr.descent.s[j];
      ASSERT_EQ(cur.step_sign, static_cast<int>(s));
      const complex e = tmsum::unit(cur.beta);
      const complex x = cur.coeffs.x;
      const complex y = cur.coeffs.y;
      const auto& next = j + 1 < tr.levels.size() ? tr.levels[j + 1].coeffs : tr.final_coeffs;
      ASSERT_LE(std::abs(next.x - ((s + (s + 1) / 2 * e) * x - (s + 1) / 2 * y)), 1e-9);
      ASSERT_LE(std::abs(next.y - ((s - 1) / 2 * e * x - ((s - 1) / 2 + s * e) * y)), 1e-9);
    }
  }
}

TEST(DigitReduction, CoefficientBoundAndFrequencyRange) {
  std::mt19937_64 rng(6);
  for (std::uint64_t h = 2; h <= 1024; ++h) {
    for (int b = 0; b < 5; ++b) {
      const auto t = tmsum::lemma2_reduction(h, draw(rng), 777);
      for (const auto& l : t.levels) {
        const double cap = std::pow(3.0, l.j) * (1 + 1e-12);
        ASSERT_LE(std::abs(l.coeffs.x), cap);
        ASSERT_LE(std::abs(l.coeffs.y), cap);
        ASSERT_GE(l.beta, 0.0);
        ASSERT_LT(l.beta, 1.0);
      }
      const double cap = std::pow(3.0, t.final_coeffs.level) * (1 + 1e-12);
      ASSERT_LE(std::abs(t.final_coeffs.x), cap);
      ASSERT_LE(std::abs(t.final_coeffs.y), cap);
    }
  }
}

TEST(FastCorrelation, Examples) {
  expect_complex_near(tmsum::fast_correlation_sum(4, 1, 0.0), {-2.0, 0.0});
  expect_complex_near(tmsum::fast_correlation_sum(1, 5, 0.0), {-1.0, 0.0});
  expect_complex_near(tmsum::fast_correlation_sum(10'000, 6, 0.37), tmsum::naive_correlation_sum(10'000, 6, 0.37),
                      1e-7);
  EXPECT_THROW(tmsum::fast_correlation_sum(10, 0, 0.1), std::invalid_argument);
}

TEST(FastCorrelation, MatchesOracle) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    const std::uint64_t X = 1 + rng() % 100'000;
    const std::uint64_t h = 1 + rng() % 512;
    const double beta = draw(rng);
    ASSERT_LE(std::abs(tmsum::fast_correlation_sum(X, h, beta) - tmsum::naive_correlation_sum(X, h, beta)), 1e-7)
        << "X=" << X << " h=" << h << " beta=" << beta;
  }
}

TEST(FastCorrelation, ShiftLargerThanCutoff) {
  for (std::uint64_t h : {100, 1000, 65536, 100001}) {
    for (std::uint64_t X : {1, 2, 3, 17, 64}) {
      ASSERT_LE(std::abs(tmsum::fast_correlation_sum(X, h, 0.4) - tmsum::naive_correlation_sum(X, h, 0.4)), 1e-9);
    }
  }
}

TEST(FastCorrelation, RationalFrequencies) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t q = 2 + rng() % 1000;
    const tmsum::rational_frequency beta(static_cast<std::int64_t>(rng() % q), q);
    const std::uint64_t X = 1 + rng() % 20'000;
    const std::uint64_t h = 1 + rng() % 300;
    ASSERT_LE(std::abs(tmsum::fast_correlation_sum(X, h, beta) - tmsum::naive_correlation_sum(X, h, beta)), 1e-8);
  }
}

TEST(TraceDump, OneLinePerLevelPlusFinal) {
  const auto t = tmsum::lemma2_reduction(4, 0.0, 256);
  std::ostringstream os;
  tmsum::write_trace(os, t);
  const std::string text = os.str();
  EXPECT_NE(text.find("# h=4 N=1 X=256 beta=0\n"), std::string::npos);
  EXPECT_NE(text.find("\n0 4 1 256 0 (1,0) (0,0) "), std::string::npos);
  EXPECT_NE(text.find("\n1 2 1 127 0 (2,0) (0,0) "), std::string::npos);
  EXPECT_NE(text.find("\nfinal 1 0 63 0 (4,0) (0,0) "), std::string::npos);
}

}  // namespace
