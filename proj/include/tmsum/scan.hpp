#pragma once

// alpha-grid scans of |S_0(alpha)| against the X (ln X)^-c scale, written as CSV.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "tmsum/bound_lab.hpp"
#include "tmsum/phase.hpp"

namespace tmsum {

/// Farey fractions of order F in [0, 1), ascending: 0/1, 1/F, ..., (F-1)/F.
/// The closing 1/1 is dropped since it is the same frequency as 0/1.
inline std::vector<rational_frequency> farey_sequence(std::uint64_t order) {
  if (order < 1) throw std::invalid_argument("farey order must be >= 1");
  std::vector<rational_frequency> out;
  // Standard next-term recurrence from 0/1, 1/F.
  std::uint64_t a = 0, b = 1, c = 1, d = order;
  out.emplace_back(0, 1);
  while (c < d) {
    out.emplace_back(static_cast<std::int64_t>(c), d);
    const std::uint64_t k = (order + b) / d;
    const std::uint64_t next_c = k * c - a;
    const std::uint64_t next_d = k * d - b;
    a = c;
    b = d;
    c = next_c;
    d = next_d;
  }
  return out;
}

struct farey_source {
  std::uint64_t order = 1;
};
struct uniform_source {
  std::uint64_t count = 1;
};
struct explicit_source {
  std::vector<double> alphas;
};
using alpha_source = std::variant<farey_source, uniform_source, explicit_source>;

struct scan_config {
  std::vector<std::uint64_t> X_list;
  alpha_source source = farey_source{5};
  double c = 1.0;
  std::uint64_t seed = 1;
  std::string output_path;
  unsigned jobs = 0;  // 0: hardware concurrency
};

/// A scan frequency: exact when it came from a Farey grid.
using scan_alpha = std::variant<rational_frequency, double>;

inline double alpha_value(const scan_alpha& a) {
  return std::visit([](const auto& f) { return to_real(f); }, a);
}

inline std::vector<scan_alpha> expand_source(const scan_config& cfg) {
  std::vector<scan_alpha> out;
  if (const auto* f = std::get_if<farey_source>(&cfg.source)) {
    for (const auto& r : farey_sequence(f->order)) out.emplace_back(r);
  } else if (const auto* u = std::get_if<uniform_source>(&cfg.source)) {
    if (u->count < 1) throw std::invalid_argument("uniform grid size must be >= 1");
    std::mt19937_64 rng(cfg.seed);
    for (std::uint64_t i = 0; i < u->count; ++i) out.emplace_back(static_cast<double>(rng() >> 11) * 0x1p-53);
  } else {
    for (double a : std::get<explicit_source>(cfg.source).alphas) out.emplace_back(a);
  }
  return out;
}

struct scan_row {
  double alpha = 0.0;
  std::int64_t a = 0;
  std::uint64_t q = 1;
  double theta = 0.0;
  std::uint64_t X = 0;
  double abs_s0 = 0.0;
  double abs_s0_over_X = 0.0;
  double predicted_scale = 0.0;
  double ratio = 0.0;
  bool window_pass = false;
};

inline scan_row scan_one(const scan_alpha& alpha, std::uint64_t X, double c) {
  const auto rep = std::visit([&](const auto& f) { return theorem_pipeline(f, X, c); }, alpha);
  scan_row row;
  row.alpha = alpha_value(alpha);
  row.a = rep.approx.a;
  row.q = rep.approx.q;
  row.theta = rep.approx.theta;
  row.X = X;
  row.abs_s0 = rep.actual;
  row.abs_s0_over_X = rep.actual / static_cast<double>(X);
  row.predicted_scale = rep.predicted_scale;
  row.ratio = rep.ratio;
  row.window_pass = rep.q_window;
  return row;
}

/// Rows for every (alpha, X), sorted by (X, alpha). The worker count only
/// changes wall time: each row is a pure function of its inputs.
inline std::vector<scan_row> run_scan_rows(const scan_config& cfg) {
  const auto alphas = expand_source(cfg);
  struct task {
    std::size_t alpha_index;
    std::uint64_t X;
  };
  std::vector<task> tasks;
  for (std::uint64_t X : cfg.X_list) {
    if (X <= 2) throw std::invalid_argument("scan cutoffs must exceed 2");
    for (std::size_t i = 0; i < alphas.size(); ++i) tasks.push_back({i, X});
  }
  std::vector<scan_row> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  unsigned workers = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++)
          rows[i] = scan_one(alphas[tasks[i].alpha_index], tasks[i].X, cfg.c);
      });
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const scan_row& l, const scan_row& r) {
    return l.X != r.X ? l.X < r.X : l.alpha < r.alpha;
  });
  return rows;
}

namespace detail {
inline std::string csv_real(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline void write_scan_csv(std::ostream& os, const std::vector<scan_row>& rows) {
  os << "alpha,a,q,theta,X,abs_S0,abs_S0_over_X,predicted_scale,ratio,window_pass\n";
  for (const auto& r : rows) {
    os << detail::csv_real(r.alpha) << ',' << r.a << ',' << r.q << ',' << detail::csv_real(r.theta) << ',' << r.X
       << ',' << detail::csv_real(r.abs_s0) << ',' << detail::csv_real(r.abs_s0_over_X) << ','
       << detail::csv_real(r.predicted_scale) << ',' << detail::csv_real(r.ratio) << ','
       << (r.window_pass ? 1 : 0) << '\n';
  }
}

}  // namespace tmsum
