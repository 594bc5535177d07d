#pragma once

// Logarithmic-time evaluators built on the halving identities
//
//   eps(2n) = eps(n),   eps(2n+1) = -eps(n).
//
// Internally every sum is a prefix sum over 0 <= n < M,
//
//   P(M, alpha)    = sum_{n<M} eps(n) e(alpha n)
//   C(M, h, beta)  = sum_{n<M} eps(n) eps(n+h) e(beta n),
//
// because splitting n into even and odd halves maps a prefix of length M to
// prefixes of length ceil(M/2) and floor(M/2), and the two differ by a single
// term. With m = floor(M/2) and b_g = eps(m) eps(m+g) e(2 beta m) [M odd]:
//
//   P(M, a)          = (1 - e(a)) P(m, 2a) + [M odd] eps(m) e(2a m)
//   C(M, 2g, b)      = (1 + e(b)) C(m, g, 2b) + b_g
//   C(M, 2g+1, b)    = -C(m, g, 2b) - e(b) C(m, g+1, 2b) - b_g
//   C(M, 0, b)       = sum_{n<M} e(b n)
//
// The public sums run over 1 <= n <= X, i.e. S = C(X+1) - eps(0)eps(h).

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmsum/digits.hpp"
#include "tmsum/phase.hpp"

namespace tmsum {

namespace detail {

/// Representative of frac(x) in [-1/2, 1/2).
inline double centered(double x) { return x >= 0.5 ? x - 1.0 : x; }

/// sum_{n=1}^{M} e(gamma n), M >= 0.
///
/// Evaluated in half-angle form, sin(pi M g)/sin(pi g) * e((M+1) g / 2), with
/// both angles reduced mod 1 first. Unlike e(g)(e(gM)-1)/(e(g)-1) this has no
/// cancellation when g is close to an integer.
template <frequency F>
complex geometric_sum(std::uint64_t M, const F& gamma) {
  if (M == 0) return {0.0, 0.0};
  const double g = centered(phase(gamma, 1));
  if (g == 0.0) return {static_cast<double>(M), 0.0};
  const double top = centered(phase(gamma, M));
  const double ratio = std::sin(std::numbers::pi * top) / std::sin(std::numbers::pi * g);
  return ratio * unit(0.5 * (g + top));
}

/// sum_{n<M} e(gamma n)
template <frequency F>
complex geometric_prefix(std::uint64_t M, const F& gamma) {
  if (M == 0) return {0.0, 0.0};
  return complex{1.0, 0.0} + geometric_sum(M - 1, gamma);
}

/// C(M, 1, gamma). Each level contributes C = -e(g) C' - G0(ceil(M/2), 2g);
/// the chain is folded from the deepest level up so that every intermediate
/// value is itself a prefix sum of moderate size.
template <frequency F>
complex prefix_shift1(std::uint64_t M, F gamma) {
  struct level {
    complex rotation;
    complex geometric;
  };
  std::array<level, 66> levels{};
  int depth = 0;
  while (M > 0) {
    const F next = doubled(gamma);
    levels[depth++] = {character(gamma, 1), geometric_prefix(M - M / 2, next)};
    M /= 2;
    gamma = next;
  }
  complex r{0.0, 0.0};
  for (int d = depth - 1; d >= 0; --d) r = -levels[d].rotation * r - levels[d].geometric;
  return r;
}

}  // namespace detail

/// sum_{n=1}^{M} e(gamma n) in closed form. Requires M >= 1.
template <frequency F>
complex geometric_sum_closed(std::uint64_t M, const F& gamma) {
  if (M < 1) throw std::invalid_argument("geometric_sum_closed: M must be >= 1");
  return detail::geometric_sum(M, gamma);
}

/// sum_{n<=X} eps(n) e(alpha n) in O(log X).
template <frequency F>
complex fast_linear_sum(const F& alpha, std::uint64_t X) {
  struct level {
    complex factor;
    complex tail;
  };
  std::array<level, 66> levels{};
  int depth = 0;
  std::uint64_t M = X + 1;
  F f = alpha;
  while (M > 0) {
    const F next = doubled(f);
    const std::uint64_t m = M / 2;
    complex tail{0.0, 0.0};
    if (M & 1) tail = static_cast<double>(eps(m)) * character(next, m);
    levels[depth++] = {complex{1.0, 0.0} - character(f, 1), tail};
    M = m;
    f = next;
  }
  complex r{0.0, 0.0};
  for (int d = depth - 1; d >= 0; --d) r = levels[d].factor * r + levels[d].tail;
  return r - 1.0;  // drop n = 0
}

/// The pair (S(Y, 1, gamma), S(Y, 2, gamma)).
struct shift_pair {
  complex shift1;
  complex shift2;
};

/// Exact S(Y, 1, gamma) and S(Y, 2, gamma) in O(log Y).
///
/// S(Y,1) follows -sum_{n<=Y/2} e(2 gamma n) - e(gamma) S(Y/2, 1, 2 gamma);
/// S(Y,2) reduces to the shift-1 sum, (1 + e(gamma)) S(Y/2, 1, 2 gamma),
/// since eps(2n+1) eps(2n+3) = eps(n) eps(n+1).
template <frequency F>
shift_pair lemma3_eval(std::uint64_t Y, const F& gamma) {
  const std::uint64_t M = Y + 1;
  const std::uint64_t m = M / 2;
  const F next = doubled(gamma);
  const complex c1 = detail::prefix_shift1(M, gamma);
  complex c2 = (complex{1.0, 0.0} + character(gamma, 1)) * detail::prefix_shift1(m, next);
  if (M & 1) c2 += static_cast<double>(eps(m) * eps(m + 1)) * character(next, m);
  // eps(0) eps(1) = eps(0) eps(2) = -1.
  return {c1 + 1.0, c2 + 1.0};
}

/// Binary digits of a shift h >= 2 written as 1 w_N ... w_1 w_0.
struct digit_descent {
  std::uint64_t h = 2;
  int N = 0;                          // bit_width(h) - 2
  std::vector<int> w;                 // w_0 .. w_N
  std::vector<int> s;                 // s_j = 1 - 2 w_j
  std::vector<std::uint64_t> h_seq;   // h_0 = h, ..., h_N in {2,3}, h_{N+1} = 1
};

inline digit_descent make_descent(std::uint64_t h) {
  if (h < 2) throw std::invalid_argument("digit descent needs h >= 2");
  digit_descent d;
  d.h = h;
  d.N = std::bit_width(h) - 2;
  for (int j = 0; j <= d.N; ++j) {
    const int bit = static_cast<int>((h >> j) & 1);
    d.w.push_back(bit);
    d.s.push_back(1 - 2 * bit);
  }
  for (int j = 0; j <= d.N + 1; ++j) d.h_seq.push_back(h >> j);
  return d;
}

struct coefficient_pair {
  complex x;
  complex y;
  int level = 0;
};

template <frequency F>
struct reduction_level {
  int j = 0;
  std::uint64_t h_j = 0;
  int step_sign = 1;             // +1: pair (2g, 2g+1); -1: pair (2g+1, 2g+2), g = h_{j+1}
  std::uint64_t cutoff = 0;      // exact S-cutoff at this level
  double nominal_cutoff = 0.0;   // X 2^-j
  F beta{};                      // 2^j beta mod 1
  coefficient_pair coeffs;
  complex boundary;              // exact correction produced by the step at this level
};

/// Full record of the digit descent for S(X, h, beta).
///
/// Level j carries x_j S(.., b_j, beta_j) + y_j S(.., b_j + 1, beta_j) with
/// b_j = h_j for j >= 1. Level 0 starts from b_0 = h - w_0, so an even h is
/// represented by (x_0, y_0) = (1, 0) and an odd h by (0, 1); both lead with
/// an even base, so the level-0 step always uses sign +1. After N+1 steps the
/// pair is (1, 2) and
///
///   S(X, h, beta) = x_{N+1} S(X_{N+1}, 1, beta_{N+1})
///                 + y_{N+1} S(X_{N+1}, 2, beta_{N+1}) + sum of boundaries.
template <frequency F>
struct reduction_trace {
  digit_descent descent;
  std::uint64_t X = 0;
  F beta{};
  std::vector<reduction_level<F>> levels;  // j = 0 .. N
  coefficient_pair final_coeffs;           // (x_{N+1}, y_{N+1})
  std::uint64_t final_cutoff = 0;          // X_{N+1}
  double final_nominal_cutoff = 0.0;
  F final_beta{};                          // beta_{N+1}
  complex final_boundary;                  // prefix-to-sum conversion at level N+1

  complex boundary_total() const {
    complex total = final_boundary;
    for (const auto& l : levels) total += l.boundary;
    return total;
  }

  complex reconstruct(const shift_pair& tail) const {
    return final_coeffs.x * tail.shift1 + final_coeffs.y * tail.shift2 + boundary_total();
  }
};

template <frequency F>
reduction_trace<F> lemma2_reduction(std::uint64_t h, const F& beta, std::uint64_t X) {
  if (h < 2) throw std::invalid_argument("lemma2_reduction: h must be >= 2");
  reduction_trace<F> trace;
  trace.descent = make_descent(h);
  trace.X = X;
  trace.beta = beta;
  const int N = trace.descent.N;

  complex x = (h & 1) ? complex{0.0, 0.0} : complex{1.0, 0.0};
  complex y = (h & 1) ? complex{1.0, 0.0} : complex{0.0, 0.0};
  std::uint64_t M = X + 1;
  F f = beta;
  double nominal = static_cast<double>(X);

  for (int j = 0; j <= N; ++j) {
    reduction_level<F> lvl;
    lvl.j = j;
    lvl.h_j = trace.descent.h_seq[j];
    lvl.step_sign = j == 0 ? 1 : trace.descent.s[j];
    lvl.cutoff = M - 1;
    lvl.nominal_cutoff = nominal;
    lvl.beta = f;
    lvl.coeffs = {x, y, j};

    const std::uint64_t g = trace.descent.h_seq[j + 1];
    const std::uint64_t m = M / 2;
    const F next = doubled(f);
    const complex rot = character(f, 1);
    complex boundary{0.0, 0.0};
    if (j == 0) boundary -= static_cast<double>(eps(h));  // S = C(X+1) - eps(0) eps(h)
    if (M & 1) {
      const complex u = character(next, m);
      const double bg = eps(m) * eps(m + g);
      if (lvl.step_sign > 0) {
        boundary += (x - y) * bg * u;
      } else {
        const double bg1 = eps(m) * eps(m + g + 1);
        boundary += (-x * bg + y * bg1) * u;
      }
    }
    lvl.boundary = boundary;
    trace.levels.push_back(lvl);

    if (lvl.step_sign > 0) {
      const complex nx = (1.0 + rot) * x - y;
      const complex ny = -rot * y;
      x = nx;
      y = ny;
    } else {
      const complex nx = -x;
      const complex ny = -rot * x + (1.0 + rot) * y;
      x = nx;
      y = ny;
    }
    M = m;
    f = next;
    nominal *= 0.5;
  }

  trace.final_coeffs = {x, y, N + 1};
  trace.final_cutoff = M == 0 ? 0 : M - 1;
  trace.final_nominal_cutoff = nominal;
  trace.final_beta = f;
  // C(M, k) = S(M-1, k) + eps(k) for M >= 1, eps(1) = eps(2) = -1.
  trace.final_boundary = M == 0 ? complex{0.0, 0.0} : -(x + y);
  return trace;
}

/// S(X, h, beta) exactly, in O(log h + log X).
template <frequency F>
complex fast_correlation_sum(std::uint64_t X, std::uint64_t h, const F& beta) {
  if (h < 1) throw std::invalid_argument("fast_correlation_sum: h must be >= 1");
  if (X == 0) return {0.0, 0.0};
  if (h == 1) return lemma3_eval(X, beta).shift1;
  if (h == 2) return lemma3_eval(X, beta).shift2;
  const auto trace = lemma2_reduction(h, beta, X);
  return trace.reconstruct(lemma3_eval(trace.final_cutoff, trace.final_beta));
}

namespace detail {
inline std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // no "-0" in dumps
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}
inline std::string format_complex(const complex& z) {
  return "(" + format_real(z.real()) + "," + format_real(z.imag()) + ")";
}
}  // namespace detail

/// Line-oriented dump: a header comment, one line per level
/// (j h_j s_j X_j beta_j x_j y_j boundary), then a "final" line for level N+1.
template <frequency F>
void write_trace(std::ostream& os, const reduction_trace<F>& t) {
  using detail::format_complex;
  using detail::format_real;
  os << "# h=" << t.descent.h << " N=" << t.descent.N << " X=" << t.X
     << " beta=" << format_real(to_real(t.beta)) << "\n";
  os << "# j h_j s_j X_j beta_j x_j y_j boundary\n";
  for (const auto& l : t.levels) {
    os << l.j << ' ' << l.h_j << ' ' << l.step_sign << ' ' << l.cutoff << ' '
       << format_real(to_real(l.beta)) << ' ' << format_complex(l.coeffs.x) << ' '
       << format_complex(l.coeffs.y) << ' ' << format_complex(l.boundary) << '\n';
  }
  os << "final " << t.descent.h_seq.back() << " 0 " << t.final_cutoff << ' '
     << format_real(to_real(t.final_beta)) << ' ' << format_complex(t.final_coeffs.x) << ' '
     << format_complex(t.final_coeffs.y) << ' ' << format_complex(t.final_boundary) << '\n';
}

}  // namespace tmsum
