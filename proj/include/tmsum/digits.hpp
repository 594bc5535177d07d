#pragma once

// Binary digit sums, the Thue-Morse sign and progression counts.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tmsum {

/// Exponent in the error term of progression counts, ln 3 / ln 4.
inline const double gelfond_lambda = std::log(3.0) / std::log(4.0);

enum class parity_class : int { N0 = 0, N1 = 1 };

/// The sign epsilon(n) in {+1, -1}.
class sign_value {
 public:
  constexpr explicit sign_value(int v) : value_(v < 0 ? -1 : 1) {}
  constexpr int value() const { return value_; }
  constexpr operator int() const { return value_; }
  constexpr sign_value operator-() const { return sign_value(-value_); }
  constexpr friend bool operator==(sign_value, sign_value) = default;

 private:
  int value_;
};

constexpr unsigned digit_sum(std::uint64_t n) { return static_cast<unsigned>(std::popcount(n)); }

/// (-1)^digit_sum(n); epsilon(0) = +1.
constexpr sign_value epsilon(std::uint64_t n) { return sign_value((std::popcount(n) & 1) ? -1 : 1); }

/// epsilon(n) as a plain int, for inner loops.
constexpr int eps(std::uint64_t n) { return (std::popcount(n) & 1) ? -1 : 1; }

constexpr parity_class classify(std::uint64_t n) {
  return (std::popcount(n) & 1) ? parity_class::N1 : parity_class::N0;
}

struct gelfond_count_report {
  std::uint64_t X = 0;
  std::uint64_t m = 1;
  std::uint64_t l = 0;
  int j = 0;
  std::uint64_t count = 0;
  double main_term = 0.0;
  double deviation = 0.0;
  double lambda_ratio = 0.0;
};

/// counts[l][j] = #{1 <= n <= X : n = l (mod m), n in N_j}.
///
/// Digit DP over the bits of X: O(m log X) instead of O(X). The table
/// below[i][r][p] counts t < 2^i with t = r (mod m) and parity p.
inline std::vector<std::array<std::uint64_t, 2>> gelfond_table(std::uint64_t X, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("gelfond_table: modulus must be positive");
  const int bits = X == 0 ? 0 : std::bit_width(X);
  using row = std::vector<std::array<std::uint64_t, 2>>;
  std::vector<row> below(static_cast<std::size_t>(bits) + 1, row(m, {0, 0}));
  below[0][0][0] = 1;  // t = 0
  std::uint64_t pow_mod = 1 % m;  // 2^i mod m
  for (int i = 0; i < bits; ++i) {
    const row& prev = below[i];
    row& next = below[i + 1];
    for (std::uint64_t r = 0; r < m; ++r) {
      const std::uint64_t shifted = (r + pow_mod) % m;  // residue of t + 2^i
      for (int p = 0; p < 2; ++p) {
        next[r][p] += prev[r][p];
        next[shifted][p ^ 1] += prev[r][p];
      }
    }
    pow_mod = (pow_mod * 2) % m;
  }

  // Count 0 <= n <= X by walking the prefix of X: at every 1-bit of X,
  // take n equal to X above that bit, 0 at it, and free below it.
  std::vector<std::array<std::uint64_t, 2>> counts(m, {0, 0});
  int prefix_parity = 0;
  for (int i = bits - 1; i >= 0; --i) {
    if ((X >> i) & 1) {
      const std::uint64_t high = (X >> (i + 1)) << (i + 1);
      const std::uint64_t base = high % m;
      for (std::uint64_t r = 0; r < m; ++r)
        for (int p = 0; p < 2; ++p)
          counts[(base + r) % m][prefix_parity ^ p] += below[i][r][p];
      prefix_parity ^= 1;
    }
  }
  // n = X itself.
  counts[X % m][prefix_parity] += 1;
  // Drop n = 0.
  counts[0][0] -= 1;
  return counts;
}

inline gelfond_count_report gelfond_count(std::uint64_t X, std::uint64_t l, std::uint64_t m, int j) {
  if (m == 0) throw std::invalid_argument("gelfond_count: modulus must be positive");
  if (l >= m) throw std::invalid_argument("gelfond_count: residue must satisfy 0 <= l < m");
  if (j != 0 && j != 1) throw std::invalid_argument("gelfond_count: class index must be 0 or 1");
  const auto table = gelfond_table(X, m);
  gelfond_count_report rep;
  rep.X = X;
  rep.m = m;
  rep.l = l;
  rep.j = j;
  rep.count = table[l][j];
  rep.main_term = static_cast<double>(X) / (2.0 * static_cast<double>(m));
  rep.deviation = static_cast<double>(rep.count) - rep.main_term;
  rep.lambda_ratio = X == 0 ? 0.0 : std::abs(rep.deviation) / std::pow(static_cast<double>(X), gelfond_lambda);
  return rep;
}

}  // namespace tmsum
