#include "swipt/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "swipt/config.hpp"
#include "swipt/harness.hpp"
#include "swipt/report.hpp"

namespace swipt::cli {

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config_path, "JSON run configuration");
  sub->add_option("--seed", c.seed, "Override the configured seed");
  sub->add_option("--threads", c.threads,
                  "Worker threads (default: SWIPT_THREADS or all cores)");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-efficient OFDM power allocation with power-splitting receivers"};
  app.require_subcommand(1);

  Common common;

  std::string solve_output;
  auto* solve = app.add_subcommand("solve", "Solve one channel realization, print JSON");
  add_common(solve, common);
  solve->add_option("-o,--output", solve_output, "JSON output path (default stdout)");
  bool solve_baseline = false;
  solve->add_flag("--baseline", solve_baseline, "Maximize capacity instead of efficiency");

  std::string sweep_csv, sweep_svg, sweep_metric = "ee";
  std::optional<int> sweep_trials;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over P_max and INR");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--csv", sweep_csv, "CSV output path (default stdout)");
  sweep_cmd->add_option("--svg", sweep_svg, "Optional SVG chart path");
  sweep_cmd->add_option("--metric", sweep_metric, "Chart metric: ee|capacity|harvest|rho|feasibility");
  sweep_cmd->add_option("--trials", sweep_trials, "Override n_trials");

  std::string conv_csv;
  std::optional<double> conv_inr, conv_pmax;
  std::optional<int> conv_trials;
  auto* conv = app.add_subcommand("convergence", "Average efficiency per outer iteration");
  add_common(conv, common);
  conv->add_option("--csv", conv_csv, "CSV output path (default stdout)");
  conv->add_option("--inr-db", conv_inr, "INR (default: config inr_db)");
  conv->add_option("--p-max-dbm", conv_pmax, "Transmit limit (default: config p_max_dbm)");
  conv->add_option("--trials", conv_trials, "Override n_trials");

  std::optional<int> verify_instances, verify_grid;
  auto* verify = app.add_subcommand("verify", "Compare the solver against the brute-force oracle");
  add_common(verify, common);
  verify->add_option("--instances", verify_instances, "Number of random instances");
  verify->add_option("--rho-grid", verify_grid, "rho grid size M");

  std::string plot_csv, plot_svg, plot_metric = "ee";
  auto* plot = app.add_subcommand("plot", "Render a sweep CSV as an SVG line chart");
  plot->add_option("--csv", plot_csv, "Sweep CSV input")->required();
  plot->add_option("--svg", plot_svg, "SVG output path")->required();
  plot->add_option("--metric", plot_metric, "ee|capacity|harvest|rho|feasibility");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (solve->parsed()) {
      const RunConfig cfg = resolve(common);
      const SystemParams params = to_params(cfg);
      const OuterOptions opts = to_solver(cfg);
      const ChannelRealization ch = generate_channel(params, cfg.seed);
      const SolveResult r = solve_baseline ? baseline_capacity_solve(ch, params, opts)
                                           : dinkelbach_solve(ch, params, opts);
      emit(solve_output.empty() ? cfg.output_json : solve_output,
           solve_result_json(r, ch, params), out);
      if (!r.feasible) {
        err << "solve: instance is infeasible\n";
        return kInfeasible;
      }
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      const RunConfig cfg = resolve(common);
      SweepConfig sc = to_sweep(cfg);
      sc.threads = common.threads;
      if (sweep_trials) sc.n_trials = *sweep_trials;
      const Metric metric = parse_metric(sweep_metric);
      const auto rows = swipt::sweep(sc);
      emit(sweep_csv.empty() ? cfg.output_csv : sweep_csv, csv_text(rows), out);
      const std::string svg = sweep_svg.empty() ? cfg.output_svg : sweep_svg;
      if (!svg.empty()) {
        emit_svg(series_from_rows(rows, metric), svg, metric_label(metric) + " vs P_max",
                 "Maximum transmit power P_max (dBm)", metric_label(metric));
      }
      return kOk;
    }

    if (conv->parsed()) {
      const RunConfig cfg = resolve(common);
      const SystemParams params = to_params(cfg);
      const auto trace = convergence_trace(
          params, conv_inr.value_or(cfg.inr_db), conv_pmax.value_or(cfg.p_max_dbm),
          conv_trials.value_or(cfg.n_trials), cfg.seed, to_solver(cfg), common.threads);
      emit(conv_csv.empty() ? cfg.output_csv : conv_csv, convergence_csv(trace), out);
      return kOk;
    }

    if (verify->parsed()) {
      const RunConfig cfg = resolve(common);
      const OuterOptions opts = to_solver(cfg);
      const int n = verify_instances.value_or(cfg.verify_instances);
      const int m = verify_grid.value_or(cfg.verify_rho_grid_m);
      if (n < 1 || m < 1) {
        err << "verify: --instances and --rho-grid must be >= 1\n";
        return kConfigError;
      }
      double max_gap = 0.0;
      int failures = 0;
      for (int i = 0; i < n; ++i) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        const int nf = i % 2 == 0 ? 2 : 4;
        const OracleComparison c =
            compare_with_oracle(random_small_instance(seed, nf), seed, m, opts);
        char line[256];
        std::snprintf(line, sizeof line,
                      "seed=%llu n_f=%d solver=%s oracle=%s gap=%.3e allowance=%.1e %s\n",
                      static_cast<unsigned long long>(seed), nf,
                      c.solver_feasible ? format_number(c.q_solver).c_str() : "infeasible",
                      c.oracle_feasible ? format_number(c.q_oracle).c_str() : "infeasible",
                      c.gap, c.allowance, c.agrees(0.005) ? "ok" : "MISMATCH");
        out << line;
        max_gap = std::max(max_gap, c.gap);
        if (!c.agrees(0.005)) ++failures;
      }
      out << "max_relative_gap " << format_number(max_gap) << "\n";
      out << "mismatches " << failures << "\n";
      return failures == 0 ? kOk : kInternalError;
    }

    if (plot->parsed()) {
      const Metric metric = parse_metric(plot_metric);
      const auto rows = parse_csv(read_text(plot_csv));
      emit_svg(series_from_rows(rows, metric), plot_svg, metric_label(metric) + " vs P_max",
               "Maximum transmit power P_max (dBm)", metric_label(metric));
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidParams& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace swipt::cli
