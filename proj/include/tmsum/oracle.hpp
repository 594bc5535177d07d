#pragma once

// Brute-force O(X) reference sums. Every sum runs over 1 <= n <= X with an
// integer cutoff X; use floor_cutoff() to pass a real cutoff.
//
// Error budget: phases are exact up to a final rounding (see phase.hpp) and
// terms are accumulated in double, which keeps the absolute error well under
// 1e-7 for X <= 10^7.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "tmsum/digits.hpp"
#include "tmsum/phase.hpp"

namespace tmsum {

inline std::uint64_t floor_cutoff(double x) {
  if (!(x >= 0.0)) return 0;
  return static_cast<std::uint64_t>(std::floor(x));
}

/// Parameters of S(Y, h, beta) = sum_{n <= Y} eps(n) eps(n+h) e(beta n).
template <frequency F = double>
struct correlation_args {
  double Y = 1.0;
  std::uint64_t h = 1;
  F beta{};
};

/// sum_{n<=X} eps(n) e(alpha n)
template <frequency F>
complex naive_linear_sum(const F& alpha, std::uint64_t X) {
  complex acc{0.0, 0.0};
  for (std::uint64_t n = 1; n <= X; ++n) acc += static_cast<double>(eps(n)) * character(alpha, n);
  return acc;
}

namespace detail {
inline std::uint64_t square(std::uint64_t n) {
  if (n >= (std::uint64_t{1} << 32)) throw std::overflow_error("quadratic sum cutoff exceeds 2^32");
  return n * n;
}
}  // namespace detail

/// S_0(alpha) = sum_{n<=X} eps(n) e(alpha n^2)
template <frequency F>
complex naive_quadratic_sum(const F& alpha, std::uint64_t X) {
  complex acc{0.0, 0.0};
  for (std::uint64_t n = 1; n <= X; ++n)
    acc += static_cast<double>(eps(n)) * character(alpha, detail::square(n));
  return acc;
}

/// S_1(alpha) = sum_{n<=X} e(alpha n^2)
template <frequency F>
complex naive_gauss_sum(const F& alpha, std::uint64_t X) {
  complex acc{0.0, 0.0};
  for (std::uint64_t n = 1; n <= X; ++n) acc += character(alpha, detail::square(n));
  return acc;
}

template <frequency F>
complex naive_correlation_sum(std::uint64_t Y, std::uint64_t h, const F& beta) {
  complex acc{0.0, 0.0};
  for (std::uint64_t n = 1; n <= Y; ++n)
    acc += static_cast<double>(eps(n) * eps(n + h)) * character(beta, n);
  return acc;
}

template <frequency F>
complex naive_correlation_sum(const correlation_args<F>& args) {
  if (args.h < 1) throw std::invalid_argument("correlation sum needs h >= 1");
  return naive_correlation_sum(floor_cutoff(args.Y), args.h, args.beta);
}

/// sum_{n<=X, n in N0} e(alpha n^2), filtering on the parity class directly.
template <frequency F>
complex restricted_quadratic_sum(const F& alpha, std::uint64_t X) {
  complex acc{0.0, 0.0};
  for (std::uint64_t n = 1; n <= X; ++n)
    if (classify(n) == parity_class::N0) acc += character(alpha, detail::square(n));
  return acc;
}

}  // namespace tmsum
