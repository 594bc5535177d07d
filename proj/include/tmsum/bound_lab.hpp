#pragma once

// Mechanized bound pipeline for the quadratic sum S_0(alpha): rational
// approximation, the exact van der Corput inequality, parameter selection,
// the q-window conditions and the S_0 / S_1 split of the restricted sum.
//
// All logarithms are natural logarithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tmsum/digits.hpp"
#include "tmsum/fast_eval.hpp"
#include "tmsum/oracle.hpp"
#include "tmsum/phase.hpp"

namespace tmsum {

inline const double log2_of_3 = std::log2(3.0);

/// ||x|| = min({x}, 1 - {x}).
inline double nearest_int_distance(double x) { return std::abs(x - std::round(x)); }

/// alpha = a/q + theta/q^2 with gcd(a, q) = 1.
struct rational_approximation {
  std::int64_t a = 0;
  std::uint64_t q = 1;
  double theta = 0.0;
};

namespace detail {

/// Convergents of num/den (0 <= num < den) with denominators <= q_max, plus
/// theta for each. Exact integer Euclid; the theta conversion is the only
/// rounding step.
inline std::vector<rational_approximation> fraction_convergents(unsigned __int128 num,
                                                                unsigned __int128 den,
                                                                std::uint64_t q_max,
                                                                std::int64_t integer_part) {
  std::vector<rational_approximation> out;
  const auto theta_of = [&](unsigned __int128 p, unsigned __int128 q) {
    // q^2 (num/den - p/q) = q (q num - p den) / den; |q num - p den| < den / q.
    const __int128 diff = static_cast<__int128>(q * num) - static_cast<__int128>(p * den);
    return static_cast<double>(static_cast<long double>(q) * static_cast<long double>(diff) /
                               static_cast<long double>(den));
  };
  unsigned __int128 p2 = 0, q2 = 1;  // p_{k-2}, q_{k-2}
  unsigned __int128 p1 = 1, q1 = 0;  // p_{k-1}, q_{k-1}
  unsigned __int128 x = num, y = den;
  while (y != 0) {
    const unsigned __int128 term = x / y;
    if (q1 != 0 && term > (static_cast<unsigned __int128>(q_max) - q2) / q1) break;
    const unsigned __int128 p = term * p1 + p2;
    const unsigned __int128 q = term * q1 + q2;
    if (q > q_max) break;
    if (q != 0) {
      // A leading partial quotient of 1 repeats q = 1; keep the later one.
      if (!out.empty() && out.back().q == q) out.pop_back();
      out.push_back({integer_part * static_cast<std::int64_t>(q) + static_cast<std::int64_t>(p),
                     static_cast<std::uint64_t>(q), theta_of(p, q)});
    }
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
    const unsigned __int128 r = x % y;
    x = y;
    y = r;
  }
  return out;
}

}  // namespace detail

/// Continued-fraction convergents of alpha with q <= q_max, in increasing q.
inline std::vector<rational_approximation> convergents(double alpha, std::uint64_t q_max) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("convergents: alpha must be finite");
  if (q_max < 1) throw std::invalid_argument("convergents: q_max must be >= 1");
  if (std::abs(alpha) >= 0x1p62) throw std::invalid_argument("convergents: |alpha| too large");
  const double whole = std::floor(alpha);
  const double f = alpha - whole;
  const auto integer_part = static_cast<std::int64_t>(whole);
  if (f == 0.0) return {{integer_part, 1, 0.0}};
  int exponent = 0;
  const double mantissa = std::frexp(f, &exponent);
  const auto k = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));
  const int p = 53 - exponent;
  if (p > 120) {
    // f < 2^-67: the next convergent denominator exceeds any 64-bit q_max.
    return {{integer_part, 1, f}};
  }
  return detail::fraction_convergents(k, static_cast<unsigned __int128>(1) << p, q_max, integer_part);
}

inline std::vector<rational_approximation> convergents(const rational_frequency& alpha, std::uint64_t q_max) {
  if (q_max < 1) throw std::invalid_argument("convergents: q_max must be >= 1");
  if (alpha.a == 0) return {{0, 1, 0.0}};
  return detail::fraction_convergents(alpha.a, alpha.q, q_max, 0);
}

/// The convergent with the largest q <= q_max; |theta| < 1 and gcd(a, q) = 1.
template <frequency F>
rational_approximation best_rational_approximation(const F& alpha, std::uint64_t q_max) {
  const auto all = convergents(alpha, q_max);
  return all.back();
}

struct vdc_report {
  std::uint64_t X = 0;
  std::uint64_t Q = 1;
  double lhs = 0.0;                  // |S_0(alpha)|^2
  std::vector<double> per_h;         // |S(X-h, h, 2h alpha)|, h = 1 .. Q-1
  double rhs = 0.0;
  double ratio = 0.0;                // lhs / rhs, <= 1
  double classical_form = 0.0;           // X/sqrt(Q) + (X/Q sum_h |S(X-h,h,2h alpha)|)^{1/2}
  double classical_form_ratio = 0.0;     // |S_0| / classical_form
  bool holds = false;
};

/// Relative slack allowed on inequalities that are exact in real arithmetic.
inline constexpr double inequality_slack = 1e-12;

/// |sum_{n<=X} z_n|^2 <= ((X+Q-1)/Q) (X + 2 sum_{h<Q} (1 - h/Q) |sum_{n<=X-h} z_{n+h} conj(z_n)|)
/// with z_n = eps(n) e(alpha n^2). The inner sums are e(alpha h^2) S(X-h, h, 2h alpha),
/// evaluated by fast_correlation_sum; only their moduli enter.
template <frequency F>
vdc_report vdc_inequality_check(const F& alpha, std::uint64_t X, std::uint64_t Q) {
  if (Q < 1 || Q > X) throw std::invalid_argument("vdc_inequality_check: need 1 <= Q <= X");
  vdc_report rep;
  rep.X = X;
  rep.Q = Q;
  rep.lhs = std::norm(naive_quadratic_sum(alpha, X));
  const double Xd = static_cast<double>(X);
  const double Qd = static_cast<double>(Q);
  double weighted = 0.0;
  double plain = 0.0;
  for (std::uint64_t h = 1; h < Q; ++h) {
    const double v = std::abs(fast_correlation_sum(X - h, h, scaled(alpha, 2 * h)));
    rep.per_h.push_back(v);
    weighted += (1.0 - static_cast<double>(h) / Qd) * v;
    plain += v;
  }
  rep.rhs = ((Xd + Qd - 1.0) / Qd) * (Xd + 2.0 * weighted);
  rep.ratio = rep.lhs / rep.rhs;
  rep.classical_form = Xd / std::sqrt(Qd) + std::sqrt(Xd / Qd * plain);
  rep.classical_form_ratio = std::sqrt(rep.lhs) / rep.classical_form;
  rep.holds = rep.ratio <= 1.0 + inequality_slack;
  return rep;
}

struct parameter_choice {
  std::uint64_t Q = 1;
  int j0 = 1;
};

/// True when Q^{log2 3} j 2^-j <= L^{-2c} < Q^{log2 3} (j-1) 2^{-j+1}.
inline bool j0_brackets(std::uint64_t Q, int j, double L, double c) {
  const long double bound = -2.0L * c * std::log2(static_cast<long double>(L));
  const long double scale = log2_of_3 * std::log2(static_cast<long double>(Q));
  const long double left = scale + std::log2(static_cast<long double>(j)) - j;
  if (!(left <= bound)) return false;
  if (j <= 1) return false;  // right side is 0
  const long double right = scale + std::log2(static_cast<long double>(j - 1)) - (j - 1);
  return bound < right;
}

/// Q = ceil((ln X)^{2c}) and the smallest j0 satisfying j0_brackets.
inline parameter_choice choose_parameters(double X, double c) {
  if (!(X > 2.0)) throw std::invalid_argument("choose_parameters: X must exceed 2");
  if (!(c > 0.0)) throw std::invalid_argument("choose_parameters: c must be positive");
  const double L = std::log(X);
  const double q_real = std::ceil(std::pow(L, 2.0 * c));
  if (q_real > 0x1p62) throw std::invalid_argument("choose_parameters: Q overflows");
  parameter_choice out;
  out.Q = static_cast<std::uint64_t>(q_real);
  for (int j = 1; j < 4096; ++j) {
    if (j0_brackets(out.Q, j, L, c)) {
      out.j0 = j;
      return out;
    }
  }
  throw std::domain_error("choose_parameters: no j0 satisfies the bracketing inequalities");
}

struct theorem_h_entry {
  std::uint64_t h = 1;
  int N = -1;                         // bit_width(h) - 2; -1 for h = 1 (no descent)
  double beta_final = 0.0;            // beta_{N+1} = 2^{N+1} (2h alpha) mod 1
  double min_distance = 0.0;          // min_{1<=j<=j0} ||2^j beta_{N+1}||
  double max_inverse_distance = 0.0;  // 1 / min_distance
  double a_condition_lhs = 0.0;       // 2^{N+j0+2} h
  bool a_condition = false;           // 2^{N+j0+2} h < q / 10
  bool chain_holds = true;            // a_condition => min_distance >= 0.9/q
  double abs_correlation = 0.0;       // |S(X-h, h, 2h alpha)|
};

struct theorem_report {
  double c = 1.0;
  std::uint64_t X = 0;
  rational_approximation approx;
  std::uint64_t Q = 1;
  int j0 = 1;
  std::vector<theorem_h_entry> per_h;
  // log^A X < q needs A > A_required (from the A-condition) and A < A_allowed.
  double A_required = 0.0;
  double A_allowed = 0.0;
  // q <= X log^-B X needs B >= B_required (from the B-condition) and B <= B_allowed.
  double B_required = 0.0;
  double B_allowed = 0.0;
  bool lower_window = false;
  bool upper_window = false;
  bool q_window = false;
  double predicted_scale = 0.0;  // X (ln X)^-c
  double actual = 0.0;           // |S_0(alpha)|
  double ratio = 0.0;            // actual / predicted_scale
  bool chain_holds = true;
};

template <frequency F>
theorem_report theorem_pipeline(const F& alpha, std::uint64_t X, double c) {
  if (X <= 2) throw std::invalid_argument("theorem_pipeline: X must exceed 2");
  theorem_report rep;
  rep.c = c;
  rep.X = X;
  rep.approx = best_rational_approximation(alpha, X);
  const auto params = choose_parameters(static_cast<double>(X), c);
  rep.Q = params.Q;
  rep.j0 = params.j0;
  const double L = std::log(static_cast<double>(X));
  const double q = static_cast<double>(rep.approx.q);

  double worst_a = 0.0;
  for (std::uint64_t h = 1; h < rep.Q; ++h) {
    theorem_h_entry e;
    e.h = h;
    e.N = h == 1 ? -1 : std::bit_width(h) - 2;
    const F beta = scaled(alpha, 2 * h);
    F g = beta;
    for (int i = 0; i < e.N + 1; ++i) g = doubled(g);
    e.beta_final = to_real(g);
    e.min_distance = 0.5;
    for (int j = 1; j <= rep.j0; ++j) {
      g = doubled(g);
      e.min_distance = std::min(e.min_distance, nearest_int_distance(phase(g, 1)));
    }
    e.max_inverse_distance =
        e.min_distance > 0.0 ? 1.0 / e.min_distance : std::numeric_limits<double>::infinity();
    e.a_condition_lhs = std::ldexp(static_cast<double>(h), e.N + rep.j0 + 2);
    e.a_condition = e.a_condition_lhs < q / 10.0;
    e.chain_holds = !e.a_condition || e.min_distance >= 0.9 / q;
    e.abs_correlation = std::abs(fast_correlation_sum(X - h, h, beta));
    worst_a = std::max(worst_a, e.a_condition_lhs);
    rep.chain_holds = rep.chain_holds && e.chain_holds;
    rep.per_h.push_back(e);
  }

  const double logL = std::log(L);
  rep.A_required = rep.per_h.empty() ? -std::numeric_limits<double>::infinity()
                                     : std::log(10.0 * worst_a) / logL;
  rep.A_allowed = std::log(q) / logL;
  rep.B_required = (log2_of_3 * std::log(static_cast<double>(rep.Q)) + std::log(static_cast<double>(rep.j0))) / logL +
                   2.0 + 2.0 * c;
  rep.B_allowed = std::log(static_cast<double>(X) / q) / logL;
  rep.lower_window = rep.A_required < rep.A_allowed;
  rep.upper_window = rep.B_required <= rep.B_allowed;
  rep.q_window = rep.lower_window && rep.upper_window;

  rep.predicted_scale = static_cast<double>(X) * std::pow(L, -c);
  rep.actual = std::abs(naive_quadratic_sum(alpha, X));
  rep.ratio = rep.actual / rep.predicted_scale;
  return rep;
}

struct corollary_report {
  std::uint64_t X = 0;
  complex restricted;      // sum over n in N0
  complex s0;              // S_0(alpha)
  complex s1;              // S_1(alpha)
  double identity_error = 0.0;
  bool identity_holds = false;
  double gauss_lhs = 0.0;  // |S_1|^2
  double gauss_mid = 0.0;  // X + 2 sum_{h<X} |sum_{n<=X-h} e(2h alpha n)|
  double gauss_rhs = 0.0;  // X + 2 sum_{h<X} min(X, 1/(2||2h alpha||))
  bool chain_holds = false;
};

inline constexpr double corollary_tolerance = 1e-9;

template <frequency F>
corollary_report corollary_check(const F& alpha, std::uint64_t X) {
  if (X < 1) throw std::invalid_argument("corollary_check: X must be >= 1");
  corollary_report rep;
  rep.X = X;
  rep.restricted = restricted_quadratic_sum(alpha, X);
  rep.s0 = naive_quadratic_sum(alpha, X);
  rep.s1 = naive_gauss_sum(alpha, X);
  rep.identity_error = std::abs(rep.restricted - 0.5 * (rep.s0 + rep.s1));
  rep.identity_holds = rep.identity_error <= corollary_tolerance;

  const double Xd = static_cast<double>(X);
  double mid = 0.0;
  double rhs = 0.0;
  for (std::uint64_t h = 1; h < X; ++h) {
    const F step = scaled(alpha, 2 * h);
    mid += std::abs(detail::geometric_sum(X - h, step));
    const double d = nearest_int_distance(phase(step, 1));
    rhs += d > 0.0 ? std::min(Xd, 1.0 / (2.0 * d)) : Xd;
  }
  rep.gauss_lhs = std::norm(rep.s1);
  rep.gauss_mid = Xd + 2.0 * mid;
  rep.gauss_rhs = Xd + 2.0 * rhs;
  rep.chain_holds = rep.gauss_lhs <= rep.gauss_mid * (1.0 + inequality_slack) &&
                    rep.gauss_mid <= rep.gauss_rhs * (1.0 + inequality_slack);
  return rep;
}

}  // namespace tmsum
