#pragma once

#include <optional>
#include <vector>

#include "swipt/innersolver.hpp"
#include "swipt/objective.hpp"
#include "swipt/sysmodel.hpp"

namespace swipt {

enum class LoopOrder {
  kRhoInside,   // one rho search per fractional-programming iteration
  kRhoOutside,  // a full fractional-programming run per rho, then the max
};

struct OuterOptions {
  int l_max = 20;
  // Stop once U' - q U'_TP < eps * U', i.e. the relative efficiency gain of
  // the next iteration is below eps.
  double eps = 1e-4;
  int rho_grid_m = 0;  // <= 0 inherits SystemParams::rho_grid_m
  LoopOrder loop_order = LoopOrder::kRhoInside;
  InnerOptions inner;
};

/// rho_k = k / m for k = 0..m.
std::vector<double> rho_grid(int m);

struct RhoSearchResult {
  InnerSolution best;
  double rho = 0.0;
  bool feasible = false;
  // Inner objective per grid point; NaN where the inner solve was infeasible.
  std::vector<double> objectives;
  int inner_iterations = 0;
};

/// Warm-start multipliers kept per rho grid index across calls.
using RhoWarmStart = std::vector<std::optional<Multipliers>>;

RhoSearchResult solve_inner_over_rho(double q, const ChannelRealization& ch,
                                     const SystemParams& params,
                                     const OuterOptions& opts,
                                     RhoWarmStart* warm = nullptr);

struct SolveResult {
  PowerAllocation alloc;
  Multipliers mults;
  double q_star = 0.0;
  double capacity_bps = 0.0;
  double harvested_w = 0.0;
  double u_tp_w = 0.0;
  bool feasible = false;
  bool converged = false;
  int outer_iterations = 0;
  std::vector<double> outer_trace;  // q used by each outer iteration
  std::vector<double> ee_trace;     // best U/U_TP after each outer iteration
  std::vector<double> rho_trace;    // per-rho inner objective, last iteration
};

SolveResult dinkelbach_solve(const ChannelRealization& ch,
                             const SystemParams& params,
                             const OuterOptions& opts = {});

/// Capacity maximization under the same constraints (q = 0).
SolveResult baseline_capacity_solve(const ChannelRealization& ch,
                                    const SystemParams& params,
                                    const OuterOptions& opts = {});

bool feasibility_check(const ChannelRealization& ch, const SystemParams& params,
                       const OuterOptions& opts = {});

}  // namespace swipt
