#pragma once

// Property checks shared by the `verify` command and the acceptance suite.
// Each check is deterministic for a given seed and returns a one-line summary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tmsum/bound_lab.hpp"
#include "tmsum/digits.hpp"
#include "tmsum/fast_eval.hpp"
#include "tmsum/oracle.hpp"

namespace tmsum {

struct check_result {
  std::string name;
  bool passed = true;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

inline std::uint64_t draw_between(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

template <class Body>
check_result timed(std::string name, Body&& body) {
  check_result r;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// digit-core

/// eps(2n) = eps(n), eps(2n+1) = -eps(n), and eps(n) = +1 iff n in N0.
inline check_result check_epsilon_recurrences(std::uint64_t count) {
  return detail::timed("epsilon recurrences", [&](check_result& r) {
    std::uint64_t bad = 0;
    for (std::uint64_t n = 0; n < count; ++n) {
      if (epsilon(2 * n) != epsilon(n)) ++bad;
      if (epsilon(2 * n + 1) != -epsilon(n)) ++bad;
      if ((epsilon(n) == sign_value(1)) != (classify(n) == parity_class::N0)) ++bad;
    }
    r.passed = bad == 0;
    r.detail = std::to_string(count) + " values, " + std::to_string(bad) + " violations";
  });
}

/// sum_{n < 2^k} eps(n) = 0 for 1 <= k <= k_max.
inline check_result check_balancedness(int k_max) {
  return detail::timed("balancedness", [&](check_result& r) {
    std::int64_t running = 0;
    std::uint64_t n = 0;
    int bad = 0;
    for (int k = 1; k <= k_max; ++k) {
      const std::uint64_t end = std::uint64_t{1} << k;
      for (; n < end; ++n) running += eps(n);
      if (running != 0) ++bad;
    }
    r.passed = bad == 0;
    r.detail = "k = 1.." + std::to_string(k_max) + ", " + std::to_string(bad) + " unbalanced";
  });
}

/// Progression counts partition 1..X and agree with direct enumeration.
inline check_result check_gelfond_counts(int trials, std::uint64_t X_max, std::uint64_t seed) {
  return detail::timed("gelfond partition", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t X = detail::draw_between(rng, 1, X_max);
      const std::uint64_t m = detail::draw_between(rng, 1, 40);
      const auto table = gelfond_table(X, m);
      std::uint64_t total = 0;
      for (const auto& row : table) total += row[0] + row[1];
      if (total != X) ++bad;
      if (X <= 20000) {
        std::vector<std::array<std::uint64_t, 2>> direct(m, {0, 0});
        for (std::uint64_t n = 1; n <= X; ++n) direct[n % m][static_cast<int>(classify(n))]++;
        if (direct != table) ++bad;
      }
    }
    r.passed = bad == 0;
    r.detail = std::to_string(trials) + " (X, m), " + std::to_string(bad) + " mismatches";
  });
}

// ---------------------------------------------------------------------------
// oracle-sums

/// restricted sum = (S_0 + S_1) / 2.
inline check_result check_indicator_identity(int trials, std::uint64_t X_max, std::uint64_t seed) {
  return detail::timed("indicator identity", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double alpha = detail::unit_draw(rng);
      const std::uint64_t X = detail::draw_between(rng, 1, X_max);
      const complex lhs = restricted_quadratic_sum(alpha, X);
      const complex rhs = 0.5 * (naive_quadratic_sum(alpha, X) + naive_gauss_sum(alpha, X));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    r.passed = worst <= corollary_tolerance;
    r.detail = std::to_string(trials) + " cases, max error " + detail::sci(worst);
  });
}

/// Trivial bounds, conjugation symmetry and agreement with progression counts.
inline check_result check_oracle_symmetries(int trials, std::uint64_t X_max, std::uint64_t seed) {
  return detail::timed("oracle symmetries", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double alpha = detail::unit_draw(rng);
      const double neg = 1.0 - alpha;  // -alpha mod 1
      const std::uint64_t X = detail::draw_between(rng, 1, X_max);
      const std::uint64_t h = detail::draw_between(rng, 1, 64);
      const complex lin = naive_linear_sum(alpha, X);
      const complex quad = naive_quadratic_sum(alpha, X);
      const complex corr = naive_correlation_sum(X, h, alpha);
      const double Xd = static_cast<double>(X);
      if (std::abs(lin) > Xd + 1e-9 || std::abs(corr) > Xd + 1e-9) ++bad;
      worst = std::max(worst, std::abs(naive_linear_sum(neg, X) - std::conj(lin)));
      worst = std::max(worst, std::abs(naive_quadratic_sum(neg, X) - std::conj(quad)));
      worst = std::max(worst, std::abs(naive_correlation_sum(X, h, neg) - std::conj(corr)));
      const auto table = gelfond_table(X, 1);
      const double diff = static_cast<double>(table[0][0]) - static_cast<double>(table[0][1]);
      if (std::abs(naive_linear_sum(0.0, X) - complex{diff, 0.0}) > 1e-9) ++bad;
    }
    r.passed = bad == 0 && worst <= 1e-9;
    r.detail = std::to_string(trials) + " cases, " + std::to_string(bad) + " bound violations, conj error " +
               detail::sci(worst);
  });
}

// ---------------------------------------------------------------------------
// fast-eval

inline check_result check_correlation_equivalence(int trials, std::uint64_t X_max, std::uint64_t h_max,
                                                  double tolerance, std::uint64_t seed) {
  return detail::timed("fast correlation vs oracle", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t X = detail::draw_between(rng, 1, X_max);
      const std::uint64_t h = detail::draw_between(rng, 1, h_max);
      const double beta = detail::unit_draw(rng);
      worst = std::max(worst, std::abs(fast_correlation_sum(X, h, beta) - naive_correlation_sum(X, h, beta)));
    }
    r.passed = worst <= tolerance;
    r.detail = std::to_string(trials) + " triples, max error " + detail::sci(worst);
  });
}

inline check_result check_linear_equivalence(int trials, std::uint64_t X_max, double tolerance,
                                             std::uint64_t seed) {
  return detail::timed("fast linear vs oracle", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double alpha = detail::unit_draw(rng);
      const std::uint64_t X = detail::draw_between(rng, 1, X_max);
      worst = std::max(worst, std::abs(fast_linear_sum(alpha, X) - naive_linear_sum(alpha, X)));
    }
    r.passed = worst <= tolerance;
    r.detail = std::to_string(trials) + " pairs, max error " + detail::sci(worst);
  });
}

/// |x_j|, |y_j| <= 3^j at every level, and every stored beta_j in [0, 1).
inline check_result check_coefficient_bound(std::uint64_t h_max, int betas_per_h, std::uint64_t seed) {
  return detail::timed("coefficient bound", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    std::uint64_t violations = 0;
    std::uint64_t levels = 0;
    std::uint64_t bad_beta = 0;
    double tightest = 0.0;
    for (std::uint64_t h = 2; h <= h_max; ++h) {
      for (int b = 0; b < betas_per_h; ++b) {
        const double beta = detail::unit_draw(rng);
        const auto trace = lemma2_reduction(h, beta, 1000);
        auto inspect = [&](const coefficient_pair& c) {
          const double cap = std::pow(3.0, c.level) * (1.0 + 1e-12);
          const double biggest = std::max(std::abs(c.x), std::abs(c.y));
          tightest = std::max(tightest, biggest / std::pow(3.0, c.level));
          if (biggest > cap) ++violations;
          ++levels;
        };
        for (const auto& l : trace.levels) {
          inspect(l.coeffs);
          if (!(l.beta >= 0.0 && l.beta < 1.0)) ++bad_beta;
        }
        inspect(trace.final_coeffs);
        if (!(trace.final_beta >= 0.0 && trace.final_beta < 1.0)) ++bad_beta;
      }
    }
    r.passed = violations == 0 && bad_beta == 0;
    r.detail = std::to_string(levels) + " levels, " + std::to_string(violations) +
               " violations, max |coeff|/3^j = " + detail::sci(tightest) + ", " + std::to_string(bad_beta) +
               " beta_j outside [0,1)";
  });
}

/// Largest observed C in |S(X,h,b)| <= h^{log2 3} (|S_1| + |S_2|) + C h^{log2 3}.
inline double lemma2_constant(std::uint64_t X, std::uint64_t h_max, int betas_per_h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint64_t h = 3; h <= h_max; ++h) {
    for (int b = 0; b < betas_per_h; ++b) {
      const double beta = detail::unit_draw(rng);
      const auto trace = lemma2_reduction(h, beta, X);
      const auto tail = lemma3_eval(trace.final_cutoff, trace.final_beta);
      const double full = std::abs(trace.reconstruct(tail));
      const double scale = std::pow(static_cast<double>(h), log2_of_3);
      const double c = (full - scale * (std::abs(tail.shift1) + std::abs(tail.shift2))) / scale;
      worst = std::max(worst, c);
    }
  }
  return worst;
}

inline check_result check_lemma2_statement(std::uint64_t X, std::uint64_t h_max, int betas_per_h,
                                           std::uint64_t seed) {
  return detail::timed("reduction constant", [&](check_result& r) {
    const double c1 = lemma2_constant(X, h_max, betas_per_h, seed);
    const double c2 = lemma2_constant(2 * X, h_max, betas_per_h, seed);
    const bool finite = std::isfinite(c1) && std::isfinite(c2);
    // The constant may be negative (the bound is slack); growth is judged on max(C, 1).
    r.passed = finite && std::max(c2, 1.0) <= 2.0 * std::max(c1, 1.0);
    r.detail = "C(X=" + std::to_string(X) + ") = " + detail::sci(c1) + ", C(2X) = " + detail::sci(c2);
  });
}

/// |sum_{n<=M} e(gamma n)| <= min(M, 1/(2||gamma||)).
inline check_result check_geometric_bound(int trials, std::uint64_t M_max, std::uint64_t seed) {
  return detail::timed("geometric bound", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const double gamma = detail::unit_draw(rng);
      const std::uint64_t M = detail::draw_between(rng, 1, M_max);
      const double value = std::abs(geometric_sum_closed(M, gamma));
      const double d = nearest_int_distance(gamma);
      const double bound = d > 0.0 ? std::min(static_cast<double>(M), 1.0 / (2.0 * d)) : static_cast<double>(M);
      if (value > bound * (1.0 + 1e-12)) ++bad;
    }
    r.passed = bad == 0;
    r.detail = std::to_string(trials) + " cases, " + std::to_string(bad) + " violations";
  });
}

// ---------------------------------------------------------------------------
// bound-lab

inline check_result check_vdc_inequality(int trials, std::uint64_t X_max, std::uint64_t Q_max,
                                         std::uint64_t seed) {
  return detail::timed("van der Corput inequality", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double alpha = detail::unit_draw(rng);
      const std::uint64_t X = detail::draw_between(rng, 1, X_max);
      const std::uint64_t Q = detail::draw_between(rng, 1, std::min(Q_max, X));
      const auto rep = vdc_inequality_check(alpha, X, Q);
      worst = std::max(worst, rep.ratio);
      if (!rep.holds) ++bad;
    }
    r.passed = bad == 0;
    r.detail = std::to_string(trials) + " cases, max ratio " + detail::sci(worst) + ", " + std::to_string(bad) +
               " violations";
  });
}

inline check_result check_rational_approximations(int trials, std::uint64_t seed) {
  return detail::timed("rational approximation", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const double alpha = (detail::unit_draw(rng) - 0.5) * 20.0;
      const std::uint64_t q_max = detail::draw_between(rng, 1, 1'000'000'000);
      const auto approx = best_rational_approximation(alpha, q_max);
      const auto g = std::gcd(static_cast<std::uint64_t>(std::abs(approx.a)), approx.q);
      if (g != 1 || approx.q > q_max || !(std::abs(approx.theta) < 1.0)) ++bad;
    }
    r.passed = bad == 0;
    r.detail = std::to_string(trials) + " cases, " + std::to_string(bad) + " violations";
  });
}

inline check_result check_parameter_choice() {
  return detail::timed("parameter choice", [&](check_result& r) {
    int bad = 0;
    int cases = 0;
    for (int k = 8; k <= 60; k += 4) {
      for (double c : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        const double X = std::ldexp(1.0, k);
        const auto p = choose_parameters(X, c);
        const double L = std::log(X);
        ++cases;
        if (!j0_brackets(p.Q, p.j0, L, c)) ++bad;
        for (int j = 1; j < p.j0; ++j)
          if (j0_brackets(p.Q, j, L, c)) ++bad;
        if (static_cast<double>(p.Q) < std::pow(L, 2.0 * c)) ++bad;
      }
    }
    r.passed = bad == 0;
    r.detail = std::to_string(cases) + " (X, c), " + std::to_string(bad) + " violations";
  });
}

inline check_result check_corollary(int identity_trials, int chain_trials, std::uint64_t X_max,
                                    std::uint64_t seed) {
  return detail::timed("corollary split", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    int bad_identity = 0;
    int bad_chain = 0;
    double worst = 0.0;
    for (int t = 0; t < std::max(identity_trials, chain_trials); ++t) {
      const double alpha = detail::unit_draw(rng);
      const std::uint64_t X = detail::draw_between(rng, 1, X_max);
      const auto rep = corollary_check(alpha, X);
      worst = std::max(worst, rep.identity_error);
      if (t < identity_trials && !rep.identity_holds) ++bad_identity;
      if (t < chain_trials && !rep.chain_holds) ++bad_chain;
    }
    r.passed = bad_identity == 0 && bad_chain == 0;
    r.detail = std::to_string(identity_trials) + " identities (max error " + detail::sci(worst) + "), " +
               std::to_string(chain_trials) + " chains, " + std::to_string(bad_identity + bad_chain) +
               " violations";
  });
}

/// Whenever 2^{N+j0+2} h < q/10, ||2^j beta_{N+1}|| >= 0.9/q for 1 <= j <= j0.
inline check_result check_pipeline_chain(const std::vector<std::uint64_t>& X_list, const std::vector<double>& cs,
                                         int alphas, std::uint64_t seed) {
  return detail::timed("pipeline lower bound", [&](check_result& r) {
    std::mt19937_64 rng(seed);
    int runs = 0;
    std::uint64_t engaged = 0;
    int bad = 0;
    for (std::uint64_t X : X_list) {
      for (double c : cs) {
        for (int i = 0; i < alphas; ++i) {
          // a/q with q around sqrt(X), the regime the window targets.
          const auto q = detail::draw_between(rng, 2, 2 * static_cast<std::uint64_t>(std::sqrt(X)));
          const auto a = detail::draw_between(rng, 1, q);
          const rational_frequency alpha(static_cast<std::int64_t>(a), q);
          const auto rep = theorem_pipeline(alpha, X, c);
          ++runs;
          for (const auto& e : rep.per_h) {
            if (e.a_condition) ++engaged;
            if (!e.chain_holds) ++bad;
          }
        }
      }
    }
    r.passed = bad == 0;
    r.detail = std::to_string(runs) + " runs, " + std::to_string(engaged) + " engaged h, " + std::to_string(bad) +
               " violations";
  });
}

// ---------------------------------------------------------------------------
// empirical trends

/// max over (j, l, m <= m_max) of |T_j(2^k, l, m) - 2^k/(2m)| / 2^{k lambda}, for k in [k_lo, k_hi].
inline std::vector<double> gelfond_constants(int k_lo, int k_hi, std::uint64_t m_max) {
  std::vector<double> out;
  for (int k = k_lo; k <= k_hi; ++k) {
    const std::uint64_t X = std::uint64_t{1} << k;
    const double scale = std::pow(static_cast<double>(X), gelfond_lambda);
    double worst = 0.0;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
      const auto table = gelfond_table(X, m);
      const double main = static_cast<double>(X) / (2.0 * static_cast<double>(m));
      for (const auto& row : table)
        for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(static_cast<double>(row[j]) - main) / scale);
    }
    out.push_back(worst);
  }
  return out;
}

/// Growth between consecutive k must stay within max_growth over the last `window` steps.
inline check_result check_gelfond_stability(int k_lo, int k_hi, std::uint64_t m_max, int window,
                                            double max_growth) {
  return detail::timed("gelfond stability", [&](check_result& r) {
    const auto consts = gelfond_constants(k_lo, k_hi, m_max);
    std::ostringstream os;
    os.precision(6);
    bool ok = true;
    const int n = static_cast<int>(consts.size());
    for (int i = std::max(1, n - window); i < n; ++i) {
      const double growth = consts[i] / consts[i - 1];
      if (growth > 1.0 + max_growth) ok = false;
      os << "k=" << k_lo + i << ": " << consts[i] << " (x" << growth << ") ";
    }
    r.passed = ok;
    r.detail = os.str();
  });
}

struct trend_point {
  int k = 0;
  std::uint64_t X = 0;
  std::int64_t a = 0;
  std::uint64_t q = 0;
  double abs_s0_over_X = 0.0;
  double ratio = 0.0;  // |S_0|/X / (ln X)^-c
};

/// alpha_k = a/q, the convergent of `base` whose denominator is nearest sqrt(2^k).
inline std::vector<trend_point> theorem_trend(double base, int k_lo, int k_hi, double c) {
  const auto all = convergents(base, std::uint64_t{1} << 40);
  std::vector<trend_point> out;
  for (int k = k_lo; k <= k_hi; ++k) {
    const std::uint64_t X = std::uint64_t{1} << k;
    const double root = std::sqrt(static_cast<double>(X));
    auto best = all.front();
    for (const auto& cv : all)
      if (std::abs(static_cast<double>(cv.q) - root) < std::abs(static_cast<double>(best.q) - root)) best = cv;
    const rational_frequency alpha(best.a, best.q);
    const double s0 = std::abs(naive_quadratic_sum(alpha, X));
    trend_point p;
    p.k = k;
    p.X = X;
    p.a = best.a;
    p.q = best.q;
    p.abs_s0_over_X = s0 / static_cast<double>(X);
    p.ratio = p.abs_s0_over_X / std::pow(std::log(static_cast<double>(X)), -c);
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

enum class verify_level { quick, full };

struct verify_options {
  verify_level level = verify_level::quick;
  double oracle_tolerance = 1e-7;
  std::uint64_t seed = 20240229;
};

inline std::vector<std::function<check_result()>> verification_plan(const verify_options& o) {
  const bool full = o.level == verify_level::full;
  const std::uint64_t s = o.seed;
  const double tol = o.oracle_tolerance;
  std::vector<std::function<check_result()>> plan;
  plan.emplace_back([=] { return check_epsilon_recurrences(full ? 2'000'000 : 100'000); });
  plan.emplace_back([=] { return check_balancedness(full ? 24 : 16); });
  plan.emplace_back([=] { return check_gelfond_counts(full ? 300 : 40, full ? 1'000'000'000'000ULL : 100'000, s + 1); });
  plan.emplace_back([=] { return check_indicator_identity(full ? 200 : 30, full ? 10'000 : 2'000, s + 2); });
  plan.emplace_back([=] { return check_oracle_symmetries(full ? 200 : 30, full ? 10'000 : 2'000, s + 3); });
  plan.emplace_back([=] { return check_correlation_equivalence(full ? 500 : 60, full ? 100'000 : 10'000, 512, tol, s + 4); });
  plan.emplace_back([=] { return check_linear_equivalence(full ? 500 : 60, full ? 1'000'000 : 20'000, tol, s + 5); });
  plan.emplace_back([=] { return check_coefficient_bound(full ? 4096 : 256, full ? 100 : 10, s + 6); });
  plan.emplace_back([=] { return check_lemma2_statement(full ? 1'000'000 : 50'000, full ? 512 : 64, full ? 8 : 3, s + 7); });
  plan.emplace_back([=] { return check_geometric_bound(1000, 1'000'000, s + 8); });
  plan.emplace_back([=] { return check_vdc_inequality(full ? 200 : 30, full ? 10'000 : 2'000, 64, s + 9); });
  plan.emplace_back([=] { return check_rational_approximations(full ? 10'000 : 500, s + 10); });
  plan.emplace_back([=] { return check_parameter_choice(); });
  plan.emplace_back([=] { return check_corollary(full ? 100 : 20, full ? 50 : 10, full ? 10'000 : 2'000, s + 11); });
  plan.emplace_back([=] {
    // c = 0.01 keeps Q = 2 so the A-condition engages once q > 320.
    return full ? check_pipeline_chain({1 << 12, 1 << 16, 1 << 20}, {0.01, 0.05, 0.1, 0.25, 1.0}, 6, s + 12)
                : check_pipeline_chain({1 << 12, 1 << 16}, {0.01, 0.25}, 3, s + 12);
  });
  return plan;
}

}  // namespace tmsum
