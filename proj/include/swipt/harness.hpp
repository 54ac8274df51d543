#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swipt/dinkelbach.hpp"
#include "swipt/sysmodel.hpp"

namespace swipt {

enum class Scheme { kProposed, kBaseline };
enum class SchemeSelection { kProposed, kBaseline, kBoth };

std::string to_string(Scheme s);
std::string to_string(SchemeSelection s);
/// Throws std::invalid_argument for anything but proposed|baseline|both.
SchemeSelection parse_scheme_selection(const std::string& s);

struct SweepConfig {
  SystemParams params = SystemParams::reference();
  std::vector<double> p_max_dbm_grid;
  std::vector<double> inr_db_list;
  int n_trials = 1000;
  std::uint64_t base_seed = 1;
  SchemeSelection scheme = SchemeSelection::kBoth;
  OuterOptions solver;
  int threads = 0;  // <= 0: SWIPT_THREADS or hardware concurrency

  void validate() const;
};

struct SweepPoint {
  double p_max_dbm = 0.0;
  double inr_db = 0.0;
  Scheme scheme = Scheme::kProposed;
};

/// One averaged table row. Efficiency and capacity average over all trials
/// with infeasible trials counted as zero. Harvested power and rho average
/// over feasible trials only and are NaN when none was feasible.
struct SweepRow {
  double p_max_dbm = 0.0;
  double inr_db = 0.0;
  Scheme scheme = Scheme::kProposed;
  double avg_ee_bit_per_joule = 0.0;
  double avg_capacity_bps = 0.0;
  double avg_harvested_dbm = 0.0;
  double avg_rho = 0.0;
  double feasibility_rate = 0.0;
  int n_trials = 0;
  double max_trial_ee = 0.0;
};

/// Thread count from SWIPT_THREADS, falling back to hardware concurrency.
int default_thread_count();

/// Params with the point's transmit limit and interference level applied.
SystemParams params_at(const SystemParams& base, double p_max_dbm,
                       double inr_db);

SolveResult solve_scheme(Scheme scheme, const ChannelRealization& ch,
                         const SystemParams& params, const OuterOptions& opts);

SweepRow run_trials(const SweepConfig& cfg, const SweepPoint& point);

/// Cross product p_max grid x INR list x schemes, in that nesting order.
std::vector<SweepRow> sweep(const SweepConfig& cfg);

/// Trial-averaged best efficiency after each outer iteration, carried
/// forward after convergence; infeasible trials contribute zero.
std::vector<double> convergence_trace(const SystemParams& params,
                                      double inr_db, double p_max_dbm,
                                      int n_trials, std::uint64_t seed,
                                      const OuterOptions& opts = {},
                                      int threads = 0);

struct BruteForceOptions {
  int grid_steps = 0;     // per-dimension points of the coarse grid, 0: auto
  int rho_grid_m = 20;
  int refine_levels = 24;  // local zoom levels after the coarse pass
};

struct BruteForceResult {
  PowerAllocation alloc;
  double ee = 0.0;
  bool feasible = false;
  // Relative gain of the last zoom level; bounds the remaining grid error.
  double resolution = 0.0;
};

/// Exhaustive grid over the powers and rho, no water-filling involved.
/// Throws std::invalid_argument for more than 4 subcarriers.
BruteForceResult brute_force_solve(const ChannelRealization& ch,
                                   const SystemParams& params,
                                   const BruteForceOptions& opts = {});

struct SmallInstance {
  SystemParams params;
  ChannelRealization channel;
};

/// Random low-dimensional scenario with moderate SINR and a mix of active
/// and inactive constraints.
SmallInstance random_small_instance(std::uint64_t seed, int n_subcarriers);

struct OracleComparison {
  std::uint64_t seed = 0;
  int n_subcarriers = 0;
  double q_solver = 0.0;
  double q_oracle = 0.0;
  bool solver_feasible = false;
  bool oracle_feasible = false;
  double gap = 0.0;        // |q_solver - q_oracle| / q_oracle
  double allowance = 0.0;  // oracle grid resolution
  bool agrees(double tol) const;
};

OracleComparison compare_with_oracle(const SmallInstance& inst,
                                     std::uint64_t seed, int rho_grid_m,
                                     const OuterOptions& opts = {});

}  // namespace swipt
