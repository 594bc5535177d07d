#pragma once

// Frequencies and the unit character e(x) = exp(2 pi i x).
//
// Every sum in this library needs phases of the form frac(f * n) for very
// large n (up to 2^50 for the fast evaluators, n^2 up to 2^64 for the
// quadratic oracles). Multiplying in double precision and then reducing
// mod 1 throws away every significant bit once f * n exceeds 2^53, so the
// reduction is done exactly on the binary expansion of f instead.

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace tmsum {

using complex = std::complex<double>;

/// e(x) for x already reduced to a small representative.
inline complex unit(double x) {
  x -= std::round(x);
  const double angle = 2.0 * std::numbers::pi * x;
  return {std::cos(angle), std::sin(angle)};
}

/// Fractional part in [0, 1).
inline double frac(double x) {
  const double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// frac(x * n), computed from the exact binary expansion of x.
///
/// x = K * 2^-p with K < 2^53, so x * n mod 1 = (K * n mod 2^p) / 2^p and
/// the only rounding happens in the final conversion.
inline double frac_mul(double x, std::uint64_t n) {
  if (!std::isfinite(x)) throw std::invalid_argument("frac_mul: non-finite frequency");
  x = frac(x);
  if (x == 0.0 || n == 0) return 0.0;
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  const auto k = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));
  const int p = 53 - exponent;  // x = k * 2^-p, p >= 53 since x < 1
  unsigned __int128 product = static_cast<unsigned __int128>(k) * n;
  if (p < 128) product &= (static_cast<unsigned __int128>(1) << p) - 1;
  // Split into two 64-bit halves so the long double conversion keeps 64 bits.
  const auto hi = static_cast<std::uint64_t>(product >> 64);
  const auto lo = static_cast<std::uint64_t>(product);
  const long double value =
      std::ldexp(static_cast<long double>(hi), 64 - p) + std::ldexp(static_cast<long double>(lo), -p);
  const double r = static_cast<double>(value);
  return r >= 1.0 ? 0.0 : r;
}

/// An exact rational frequency a/q, kept reduced with 0 <= a < q.
struct rational_frequency {
  std::uint64_t a = 0;
  std::uint64_t q = 1;

  rational_frequency() = default;
  rational_frequency(std::int64_t num, std::uint64_t den) : q(den) {
    if (den == 0) throw std::invalid_argument("rational_frequency: zero denominator");
    const auto qs = static_cast<__int128>(den);
    __int128 r = static_cast<__int128>(num) % qs;
    if (r < 0) r += qs;
    a = static_cast<std::uint64_t>(r);
    const std::uint64_t g = std::gcd(a, q);
    if (g > 1) {
      a /= g;
      q /= g;
    }
  }

  friend bool operator==(const rational_frequency&, const rational_frequency&) = default;
};

inline double to_real(double f) { return f; }
inline double to_real(const rational_frequency& f) {
  return static_cast<double>(static_cast<long double>(f.a) / static_cast<long double>(f.q));
}

inline double phase(double f, std::uint64_t n) { return frac_mul(f, n); }
inline double phase(const rational_frequency& f, std::uint64_t n) {
  const auto r = static_cast<unsigned __int128>(f.a) * n % f.q;
  return static_cast<double>(static_cast<long double>(static_cast<std::uint64_t>(r)) /
                             static_cast<long double>(f.q));
}

/// n * f mod 1, as a frequency of the same kind.
inline double scaled(double f, std::uint64_t n) { return frac_mul(f, n); }
inline rational_frequency scaled(const rational_frequency& f, std::uint64_t n) {
  rational_frequency out;
  out.q = f.q;
  out.a = static_cast<std::uint64_t>(static_cast<unsigned __int128>(f.a) * n % f.q);
  const std::uint64_t g = std::gcd(out.a, out.q);
  if (g > 1) {
    out.a /= g;
    out.q /= g;
  }
  return out;
}

/// 2f mod 1. Exact for both representations, so repeated doubling never drifts.
template <class F>
F doubled(const F& f) {
  return scaled(f, 2);
}

template <class F>
concept frequency = std::copyable<F> && requires(const F& f, std::uint64_t n) {
  { phase(f, n) } -> std::convertible_to<double>;
  { scaled(f, n) } -> std::same_as<F>;
  { to_real(f) } -> std::convertible_to<double>;
};

/// e(f * n).
template <frequency F>
complex character(const F& f, std::uint64_t n) {
  return unit(phase(f, n));
}

}  // namespace tmsum
