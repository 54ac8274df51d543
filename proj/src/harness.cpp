#include "swipt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace swipt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(0..n-1) on up to `threads` workers. Results must be written by
// index so the outcome does not depend on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

int resolve_threads(int requested) {
  return requested > 0 ? requested : default_thread_count();
}

struct TrialOutcome {
  bool feasible = false;
  double ee = 0.0;
  double capacity = 0.0;
  double harvested_w = 0.0;
  double rho = 0.0;
};

}  // namespace

std::string to_string(Scheme s) {
  return s == Scheme::kProposed ? "proposed" : "baseline";
}

std::string to_string(SchemeSelection s) {
  switch (s) {
    case SchemeSelection::kProposed:
      return "proposed";
    case SchemeSelection::kBaseline:
      return "baseline";
    case SchemeSelection::kBoth:
      return "both";
  }
  return "both";
}

SchemeSelection parse_scheme_selection(const std::string& s) {
  if (s == "proposed") return SchemeSelection::kProposed;
  if (s == "baseline") return SchemeSelection::kBaseline;
  if (s == "both") return SchemeSelection::kBoth;
  throw std::invalid_argument("unknown scheme '" + s +
                              "' (expected proposed, baseline or both)");
}

void SweepConfig::validate() const {
  params.validate();
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (p_max_dbm_grid.empty()) {
    throw std::invalid_argument("p_max_dbm_grid must not be empty");
  }
  if (inr_db_list.empty()) {
    throw std::invalid_argument("inr_db_list must not be empty");
  }
}

int default_thread_count() {
  if (const char* env = std::getenv("SWIPT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SystemParams params_at(const SystemParams& base, double p_max_dbm,
                       double inr_db) {
  SystemParams p = base;
  p.p_max_w = dbm_to_watt(p_max_dbm);
  p.inr_db = inr_db;
  return p;
}

SolveResult solve_scheme(Scheme scheme, const ChannelRealization& ch,
                         const SystemParams& params, const OuterOptions& opts) {
  return scheme == Scheme::kProposed ? dinkelbach_solve(ch, params, opts)
                                     : baseline_capacity_solve(ch, params, opts);
}

SweepRow run_trials(const SweepConfig& cfg, const SweepPoint& point) {
  cfg.validate();
  const SystemParams params = params_at(cfg.params, point.p_max_dbm, point.inr_db);
  params.validate();

  std::vector<TrialOutcome> outcomes(cfg.n_trials);
  parallel_for(cfg.n_trials, resolve_threads(cfg.threads), [&](int t) {
    const ChannelRealization ch =
        generate_channel(params, cfg.base_seed + static_cast<std::uint64_t>(t));
    const SolveResult r = solve_scheme(point.scheme, ch, params, cfg.solver);
    TrialOutcome& o = outcomes[t];
    o.feasible = r.feasible;
    if (r.feasible) {
      o.ee = r.q_star;
      o.capacity = r.capacity_bps;
      o.harvested_w = r.harvested_w;
      o.rho = r.alloc.rho;
    }
  });

  SweepRow row;
  row.p_max_dbm = point.p_max_dbm;
  row.inr_db = point.inr_db;
  row.scheme = point.scheme;
  row.n_trials = cfg.n_trials;
  int n_feasible = 0;
  double ee = 0.0, cap = 0.0, harvest = 0.0, rho = 0.0;
  for (const TrialOutcome& o : outcomes) {
    ee += o.ee;
    cap += o.capacity;
    row.max_trial_ee = std::max(row.max_trial_ee, o.ee);
    if (!o.feasible) continue;
    ++n_feasible;
    harvest += o.harvested_w;
    rho += o.rho;
  }
  row.avg_ee_bit_per_joule = ee / cfg.n_trials;
  row.avg_capacity_bps = cap / cfg.n_trials;
  row.feasibility_rate = static_cast<double>(n_feasible) / cfg.n_trials;
  if (n_feasible > 0) {
    const double mean_harvest = harvest / n_feasible;
    row.avg_harvested_dbm =
        mean_harvest > 0.0 ? watt_to_dbm(mean_harvest)
                           : -std::numeric_limits<double>::infinity();
    row.avg_rho = rho / n_feasible;
  } else {
    row.avg_harvested_dbm = kNaN;
    row.avg_rho = kNaN;
  }
  return row;
}

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<Scheme> schemes;
  if (cfg.scheme != SchemeSelection::kBaseline) {
    schemes.push_back(Scheme::kProposed);
  }
  if (cfg.scheme != SchemeSelection::kProposed) {
    schemes.push_back(Scheme::kBaseline);
  }
  std::vector<SweepRow> rows;
  for (double p_max : cfg.p_max_dbm_grid) {
    for (double inr : cfg.inr_db_list) {
      for (Scheme s : schemes) rows.push_back(run_trials(cfg, {p_max, inr, s}));
    }
  }
  return rows;
}

std::vector<double> convergence_trace(const SystemParams& params,
                                      double inr_db, double p_max_dbm,
                                      int n_trials, std::uint64_t seed,
                                      const OuterOptions& opts, int threads) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  const SystemParams p = params_at(params, p_max_dbm, inr_db);
  p.validate();
  const int length = opts.l_max;
  std::vector<std::vector<double>> traces(n_trials);
  parallel_for(n_trials, resolve_threads(threads), [&](int t) {
    const ChannelRealization ch =
        generate_channel(p, seed + static_cast<std::uint64_t>(t));
    const SolveResult r = dinkelbach_solve(ch, p, opts);
    std::vector<double> trace(length, 0.0);
    if (r.feasible) {
      for (int n = 0; n < length; ++n) {
        trace[n] = r.ee_trace.empty()
                       ? 0.0
                       : r.ee_trace[std::min<std::size_t>(n, r.ee_trace.size() - 1)];
      }
    }
    traces[t] = std::move(trace);
  });

  std::vector<double> avg(length, 0.0);
  for (const auto& tr : traces) {
    for (int n = 0; n < length; ++n) avg[n] += tr[n];
  }
  for (double& v : avg) v /= n_trials;
  return avg;
}

BruteForceResult brute_force_solve(const ChannelRealization& ch,
                                   const SystemParams& params,
                                   const BruteForceOptions& opts) {
  const int n = ch.size();
  if (n < 1 || n > 4) {
    throw std::invalid_argument("brute_force_solve supports 1..4 subcarriers");
  }
  const int steps = opts.grid_steps > 0
                        ? opts.grid_steps
                        : (n == 1 ? 4000 : n == 2 ? 400 : n == 3 ? 60 : 20);
  const double cap = default_power_cap(params);
  BruteForceResult out;
  if (cap < 0.0) return out;

  PowerAllocation alloc;
  alloc.p_w.assign(n, 0.0);

  // Efficiency of a feasible point, -inf otherwise.
  auto score = [&]() {
    for (double p : alloc.p_w) {
      if (p < 0.0 || p > cap) return -std::numeric_limits<double>::infinity();
    }
    if (!constraint_residuals(alloc, ch, params).feasible) {
      return -std::numeric_limits<double>::infinity();
    }
    const double u_tp = total_power_unchecked(alloc, ch, params);
    if (!(u_tp > 0.0)) return -std::numeric_limits<double>::infinity();
    return system_capacity(alloc, ch, params) / u_tp;
  };

  // Visits every point center + h * k, k in [-half, half]^n (or the full
  // [0, steps]^n box when `box` is set), keeping the best.
  auto scan = [&](const std::vector<double>& center, double h, int half,
                  bool box, std::vector<double>& best_p, double& best) {
    const int span = box ? steps + 1 : 2 * half + 1;
    int total = 1;
    for (int d = 0; d < n; ++d) total *= span;
    for (int idx = 0; idx < total; ++idx) {
      int rem = idx;
      for (int d = 0; d < n; ++d) {
        const int k = rem % span;
        rem /= span;
        alloc.p_w[d] = box ? cap * k / steps : center[d] + h * (k - half);
      }
      const double s = score();
      if (s > best) {
        best = s;
        best_p = alloc.p_w;
      }
    }
  };

  double best_overall = -std::numeric_limits<double>::infinity();
  for (double rho : rho_grid(opts.rho_grid_m)) {
    alloc.rho = rho;
    std::vector<double> best_p(n, 0.0);
    double best = -std::numeric_limits<double>::infinity();
    scan(best_p, 0.0, 0, true, best_p, best);
    if (!std::isfinite(best)) continue;

    // Zoom: at each step size re-center until the best point stops moving,
    // then halve the step.
    double h = cap / steps;
    std::vector<double> history;
    for (int level = 0; level < opts.refine_levels; ++level) {
      for (int sweep_no = 0; sweep_no < 200; ++sweep_no) {
        const std::vector<double> center = best_p;
        scan(center, h, 4, false, best_p, best);
        if (best_p == center) break;
      }
      history.push_back(best);
      h *= 0.5;
    }
    if (best > best_overall) {
      best_overall = best;
      out.alloc.p_w = best_p;
      out.alloc.rho = rho;
      out.ee = best;
      out.feasible = true;
      const double earlier =
          history.size() > 4 ? history[history.size() - 5] : history.front();
      out.resolution = best > 0.0 ? (best - earlier) / best : 0.0;
    }
  }
  return out;
}

SmallInstance random_small_instance(std::uint64_t seed, int n_subcarriers) {
  ChannelRng rng(seed * 0x9E3779B97F4A7C15ULL + 0x5EED);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

  SystemParams p;
  p.n_subcarriers = n_subcarriers;
  p.bandwidth_hz = 1.0e5 * n_subcarriers;
  p.sigma_zs_w = 1e-9 * uniform(0.5, 2.0);
  p.sigma_za_w = 1e-9 * uniform(0.2, 1.0);
  p.inr_db = uniform(-10.0, 20.0);
  p.p_c_w = uniform(0.05, 0.5);
  p.epsilon = uniform(1.5, 4.0);
  p.eta = uniform(0.3, 1.0);
  p.p_max_w = uniform(0.05, 1.0);
  p.rician_k_db = uniform(0.0, 10.0);
  p.rho_grid_m = 20;
  const double path_gain = std::pow(10.0, uniform(-5.0, -3.0));

  const bool grid_binding = rng.uniform() < 0.3;
  p.p_pg_w = p.p_c_w + p.epsilon * p.p_max_w * (grid_binding ? uniform(0.5, 0.9) : 3.0);
  const double cap = default_power_cap(p);

  ChannelRealization ch = generate_channel(p, seed);
  ch.path_gain_lin = path_gain;
  double mean_h2 = 0.0;
  for (double h : ch.h2) mean_h2 += h / n_subcarriers;

  p.p_min_req_w = 0.0;
  if (rng.uniform() < 0.5) {
    p.p_min_req_w = uniform(0.05, 0.4) * p.eta * path_gain * mean_h2 * cap;
  }
  p.p_max_req_w = 1.0;
  if (rng.uniform() < 0.25) {
    p.p_max_req_w = std::max(p.p_min_req_w, 1e-12) * uniform(1.5, 4.0) +
                    0.05 * p.eta * path_gain * mean_h2 * cap;
  }
  p.r_min_bps = 0.0;
  if (rng.uniform() < 0.5) {
    double full_rate = 0.0;
    for (int i = 0; i < n_subcarriers; ++i) {
      const double noise = p.sigma_za_w + ch.sigma_i_w[i] + p.sigma_zs_w;
      full_rate += p.subcarrier_bw_hz() *
                   std::log2(1.0 + cap / n_subcarriers * path_gain * ch.h2[i] / noise);
    }
    p.r_min_bps = uniform(0.2, 0.8) * full_rate;
  }
  return {p, ch};
}

bool OracleComparison::agrees(double tol) const {
  if (!solver_feasible && !oracle_feasible) return true;
  if (solver_feasible != oracle_feasible) return false;
  return gap <= tol + allowance;
}

OracleComparison compare_with_oracle(const SmallInstance& inst,
                                     std::uint64_t seed, int rho_grid_m,
                                     const OuterOptions& opts) {
  OuterOptions o = opts;
  o.rho_grid_m = rho_grid_m;
  const SolveResult s = dinkelbach_solve(inst.channel, inst.params, o);
  BruteForceOptions bf;
  bf.rho_grid_m = rho_grid_m;
  const BruteForceResult b = brute_force_solve(inst.channel, inst.params, bf);

  OracleComparison c;
  c.seed = seed;
  c.n_subcarriers = inst.channel.size();
  c.solver_feasible = s.feasible;
  c.oracle_feasible = b.feasible;
  c.q_solver = s.q_star;
  c.q_oracle = b.ee;
  c.allowance = b.resolution;
  if (s.feasible && b.feasible && b.ee > 0.0) {
    c.gap = std::abs(s.q_star - b.ee) / b.ee;
  }
  return c;
}

}  // namespace swipt
