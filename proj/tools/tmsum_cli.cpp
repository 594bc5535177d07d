// Command-line front end: verification, scans, descent traces, progression
// counts, benchmarks and continued-fraction convergents.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tmsum/bound_lab.hpp"
#include "tmsum/digits.hpp"
#include "tmsum/fast_eval.hpp"
#include "tmsum/oracle.hpp"
#include "tmsum/scan.hpp"
#include "tmsum/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

/// Naive evaluations above this cutoff are skipped.
constexpr std::uint64_t naive_cap = 100'000'000;

std::string real17(double v) { return tmsum::detail::csv_real(v); }

std::string complex17(const tmsum::complex& z) { return "(" + real17(z.real()) + "," + real17(z.imag()) + ")"; }

int run_verify(const std::string& level, double oracle_tol, std::uint64_t seed) {
  tmsum::verify_options opts;
  if (level == "quick") {
    opts.level = tmsum::verify_level::quick;
  } else if (level == "full") {
    opts.level = tmsum::verify_level::full;
  } else {
    std::cerr << "verify: level must be quick or full\n";
    return exit_usage;
  }
  opts.oracle_tolerance = oracle_tol;
  opts.seed = seed;
  bool all = true;
  std::cout << std::left << std::setw(30) << "suite" << std::setw(8) << "result" << std::setw(10) << "seconds"
            << "detail\n";
  for (const auto& check : tmsum::verification_plan(opts)) {
    const auto r = check();
    all = all && r.passed;
    std::ostringstream secs;
    secs << std::fixed << std::setprecision(2) << r.seconds;
    std::cout << std::left << std::setw(30) << r.name << std::setw(8) << (r.passed ? "PASS" : "FAIL")
              << std::setw(10) << secs.str() << r.detail << "\n";
  }
  std::cout << (all ? "all suites passed\n" : "verification FAILED\n");
  return all ? exit_ok : exit_failed;
}

int run_trace(std::uint64_t h, double beta, std::uint64_t X) {
  if (h < 2) {
    std::cerr << "trace: h must be >= 2\n";
    return exit_usage;
  }
  const auto trace = tmsum::lemma2_reduction(h, beta, X);
  tmsum::write_trace(std::cout, trace);
  const auto tail = tmsum::lemma3_eval(trace.final_cutoff, trace.final_beta);
  const auto fast = trace.reconstruct(tail);
  std::cout << "# reconstruction " << complex17(fast) << "\n";
  if (X > naive_cap) {
    std::cout << "# oracle skipped (cap)\n";
    return exit_ok;
  }
  const auto oracle = tmsum::naive_correlation_sum(X, h, beta);
  const double err = std::abs(fast - oracle);
  std::cout << "# oracle " << complex17(oracle) << "\n# abs_error " << real17(err) << "\n";
  return err <= 1e-7 ? exit_ok : exit_failed;
}

int run_gelfond(const std::vector<std::uint64_t>& X_list, const std::vector<std::uint64_t>& m_list) {
  std::cout << "X,m,l,j,count,main_term,deviation,lambda_ratio\n";
  for (std::uint64_t X : X_list) {
    for (std::uint64_t m : m_list) {
      if (m == 0) {
        std::cerr << "gelfond: modulus must be >= 1\n";
        return exit_usage;
      }
      for (std::uint64_t l = 0; l < m; ++l) {
        for (int j = 0; j < 2; ++j) {
          const auto r = tmsum::gelfond_count(X, l, m, j);
          std::cout << r.X << ',' << r.m << ',' << r.l << ',' << r.j << ',' << r.count << ','
                    << real17(r.main_term) << ',' << real17(r.deviation) << ',' << real17(r.lambda_ratio) << '\n';
        }
      }
    }
  }
  return exit_ok;
}

template <class Fn>
double seconds_per_call(Fn&& fn, int min_reps = 1) {
  using clock = std::chrono::steady_clock;
  int reps = 0;
  const auto start = clock::now();
  auto now = start;
  do {
    fn();
    ++reps;
    now = clock::now();
  } while (reps < min_reps || std::chrono::duration<double>(now - start).count() < 0.05);
  return std::chrono::duration<double>(now - start).count() / reps;
}

int run_bench(const std::vector<std::uint64_t>& X_list, std::uint64_t h, double alpha) {
  std::cout << std::left << std::setw(20) << "X" << std::setw(12) << "sum" << std::setw(16) << "naive_s"
            << std::setw(16) << "fast_s" << "max_abs_diff\n";
  volatile double sink = 0.0;
  for (std::uint64_t X : X_list) {
    for (const char* which : {"linear", "correlation"}) {
      const bool linear = std::string(which) == "linear";
      auto fast = [&] {
        return linear ? tmsum::fast_linear_sum(alpha, X) : tmsum::fast_correlation_sum(X, h, alpha);
      };
      const double fast_s = seconds_per_call([&] { sink = sink + fast().real(); }, 100);
      std::string naive_s = "skipped (cap)";
      std::string diff = "-";
      if (X <= naive_cap) {
        tmsum::complex naive;
        const double t = seconds_per_call(
            [&] {
              naive = linear ? tmsum::naive_linear_sum(alpha, X) : tmsum::naive_correlation_sum(X, h, alpha);
            },
            1);
        naive_s = tmsum::detail::sci(t);
        diff = real17(std::abs(naive - fast()));
      }
      std::cout << std::left << std::setw(20) << X << std::setw(12) << which << std::setw(16) << naive_s
                << std::setw(16) << tmsum::detail::sci(fast_s) << diff << "\n";
    }
  }
  return exit_ok;
}

int run_approx(double alpha, std::uint64_t q_max) {
  std::cout << "a,q,theta\n";
  for (const auto& c : tmsum::convergents(alpha, q_max))
    std::cout << c.a << ',' << c.q << ',' << real17(c.theta) << '\n';
  return exit_ok;
}

int run_scan_command(const tmsum::scan_config& cfg) {
  std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "scan: cannot write " << cfg.output_path << "\n";
    return exit_usage;
  }
  const auto rows = tmsum::run_scan_rows(cfg);
  tmsum::write_scan_csv(out, rows);
  out.flush();
  if (!out) {
    std::cerr << "scan: write to " << cfg.output_path << " failed\n";
    return exit_usage;
  }
  std::cout << rows.size() << " rows written to " << cfg.output_path << "\n";
  return exit_ok;
}

/// Applies key=value lines to options of `cmd` that were not given on the
/// command line. Unknown keys are an error. If any option of `exclusive` came
/// from the command line, file values for that group are ignored.
void merge_config_file(CLI::App& cmd, const std::string& path, const std::vector<CLI::Option*>& exclusive) {
  std::ifstream probe(path);
  if (!probe) throw CLI::FileError::Missing(path);
  const bool group_given = std::any_of(exclusive.begin(), exclusive.end(), [](auto* o) { return o->count() > 0; });
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    CLI::Option* opt = nullptr;
    try {
      opt = cmd.get_option("--" + item.name);
    } catch (const CLI::OptionNotFound&) {
      throw CLI::ConversionError("unknown configuration key '" + item.name + "' in " + path);
    }
    if (opt->count() > 0) continue;
    if (group_given && std::find(exclusive.begin(), exclusive.end(), opt) != exclusive.end()) continue;
    std::vector<std::string> inputs;
    for (const auto& in : item.inputs) {
      for (const auto& part : CLI::detail::split(in, ',')) inputs.push_back(CLI::detail::trim_copy(part));
    }
    opt->add_result(inputs);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential sums twisted by the binary digit-sum parity"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");  // frees -h for the shift options

  std::string level = "quick";
  double oracle_tol = 1e-7;
  std::uint64_t verify_seed = 20240229;
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--oracle-tol", oracle_tol, "tolerance for fast-vs-oracle comparisons");
  verify->add_option("--seed", verify_seed, "random seed");

  tmsum::scan_config scan_cfg;
  std::uint64_t farey = 0;
  std::uint64_t uniform = 0;
  std::vector<double> alphas;
  auto* scan = app.add_subcommand("scan", "scan |S_0(alpha)| over an alpha grid");
  std::string scan_config_path;
  scan->add_option("--config", scan_config_path, "key=value configuration file; flags override it");
  auto* scan_X_opt = scan->add_option("-X,--X", scan_cfg.X_list, "cutoffs")->delimiter(',');
  auto* farey_opt = scan->add_option("--farey", farey, "Farey order F");
  auto* uniform_opt = scan->add_option("--uniform", uniform, "K seeded uniform draws");
  auto* alphas_opt = scan->add_option("--alphas", alphas, "explicit alpha list")->delimiter(',');
  farey_opt->excludes(uniform_opt)->excludes(alphas_opt);
  uniform_opt->excludes(alphas_opt);
  scan->add_option("-c,--c", scan_cfg.c, "exponent c in X (ln X)^-c");
  scan->add_option("--seed", scan_cfg.seed, "seed for --uniform");
  auto* scan_output_opt = scan->add_option("-o,--output", scan_cfg.output_path, "CSV output path");
  scan->add_option("-j,--jobs", scan_cfg.jobs, "worker threads (0: all cores)");

  std::uint64_t trace_h = 2;
  double trace_beta = 0.0;
  std::uint64_t trace_X = 1;
  auto* trace = app.add_subcommand("trace", "dump the digit descent for S(X, h, beta)");
  trace->add_option("--h", trace_h, "shift")->required();
  trace->add_option("--beta", trace_beta, "frequency")->required();
  trace->add_option("-X,--X", trace_X, "cutoff")->required();

  std::vector<std::uint64_t> gelfond_X;
  std::vector<std::uint64_t> gelfond_m;
  auto* gelfond = app.add_subcommand("gelfond", "progression counts T_j(X, l, m)");
  gelfond->add_option("-X,--X", gelfond_X, "cutoffs")->required()->delimiter(',');
  gelfond->add_option("-m,--m", gelfond_m, "moduli")->required()->delimiter(',');

  std::vector<std::uint64_t> bench_X{1'000'000};
  std::uint64_t bench_h = 37;
  double bench_alpha = 0.318309886183790671;
  auto* bench = app.add_subcommand("bench", "naive vs fast timings");
  bench->add_option("-X,--X", bench_X, "cutoffs")->delimiter(',');
  bench->add_option("--h", bench_h, "shift for the correlation sum");
  bench->add_option("--alpha", bench_alpha, "frequency");

  double approx_alpha = 0.0;
  std::uint64_t approx_qmax = 1'000'000;
  auto* approx = app.add_subcommand("approx", "continued-fraction convergents of alpha");
  approx->add_option("alpha", approx_alpha, "real number")->required();
  approx->add_option("--qmax", approx_qmax, "largest denominator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*verify) return run_verify(level, oracle_tol, verify_seed);
    if (*scan) {
      if (!scan_config_path.empty()) merge_config_file(*scan, scan_config_path, {farey_opt, uniform_opt, alphas_opt});
      if (!*scan_X_opt || !*scan_output_opt) {
        std::cerr << "scan: --X and --output are required\n";
        return exit_usage;
      }
      if (!!*farey_opt + !!*uniform_opt + !!*alphas_opt > 1) {
        std::cerr << "scan: --farey, --uniform and --alphas are mutually exclusive\n";
        return exit_usage;
      }
      if (*farey_opt) {
        scan_cfg.source = tmsum::farey_source{farey};
      } else if (*uniform_opt) {
        scan_cfg.source = tmsum::uniform_source{uniform};
      } else if (*alphas_opt) {
        scan_cfg.source = tmsum::explicit_source{alphas};
      } else {
        std::cerr << "scan: one of --farey, --uniform, --alphas is required\n";
        return exit_usage;
      }
      return run_scan_command(scan_cfg);
    }
    if (*trace) return run_trace(trace_h, trace_beta, trace_X);
    if (*gelfond) return run_gelfond(gelfond_X, gelfond_m);
    if (*bench) return run_bench(bench_X, bench_h, bench_alpha);
    if (*approx) return run_approx(approx_alpha, approx_qmax);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
