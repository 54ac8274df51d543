#include "swipt/dinkelbach.hpp"

#include <cmath>
#include <limits>

namespace swipt {

namespace {

int grid_size(const SystemParams& params, const OuterOptions& opts) {
  return opts.rho_grid_m > 0 ? opts.rho_grid_m : params.rho_grid_m;
}

void fill_from_allocation(SolveResult& res, const PowerAllocation& alloc,
                          const ChannelRealization& ch,
                          const SystemParams& params) {
  res.alloc = alloc;
  res.capacity_bps = system_capacity(alloc, ch, params);
  res.harvested_w = harvested_power(alloc, ch, params).total();
  res.u_tp_w = total_power(alloc, ch, params);
  res.q_star = res.capacity_bps / res.u_tp_w;
  res.feasible = true;
}

// Fractional programming for a single rho; used by the swapped loop order.
SolveResult dinkelbach_fixed_rho(double rho, const ChannelRealization& ch,
                                 const SystemParams& params,
                                 const OuterOptions& opts) {
  SolveResult res;
  double q = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  std::optional<Multipliers> warm;
  for (int n = 0; n < opts.l_max; ++n) {
    const InnerSolution sol =
        solve_fixed_q_rho(q, rho, ch, params, opts.inner, warm);
    res.outer_trace.push_back(q);
    res.outer_iterations = n + 1;
    if (!sol.residuals.feasible) break;
    if (sol.converged) warm = sol.mults;
    const double u = system_capacity(sol.alloc, ch, params);
    const double u_tp = total_power(sol.alloc, ch, params);
    if (u / u_tp > best) {
      best = u / u_tp;
      fill_from_allocation(res, sol.alloc, ch, params);
      res.mults = sol.mults;
    }
    res.ee_trace.push_back(best);
    if (u - q * u_tp <= opts.eps * u) {
      res.converged = true;
      break;
    }
    q = best;
  }
  return res;
}

SolveResult solve_rho_outside(const ChannelRealization& ch,
                              const SystemParams& params,
                              const OuterOptions& opts) {
  SolveResult best;
  std::vector<double> per_rho;
  for (double rho : rho_grid(grid_size(params, opts))) {
    SolveResult r = dinkelbach_fixed_rho(rho, ch, params, opts);
    per_rho.push_back(r.feasible ? r.q_star
                                 : std::numeric_limits<double>::quiet_NaN());
    if (r.feasible && (!best.feasible || r.q_star > best.q_star)) {
      best = std::move(r);
    }
  }
  best.rho_trace = std::move(per_rho);
  return best;
}

}  // namespace

std::vector<double> rho_grid(int m) {
  std::vector<double> grid(m + 1);
  for (int k = 0; k <= m; ++k) grid[k] = static_cast<double>(k) / m;
  return grid;
}

RhoSearchResult solve_inner_over_rho(double q, const ChannelRealization& ch,
                                     const SystemParams& params,
                                     const OuterOptions& opts,
                                     RhoWarmStart* warm) {
  const std::vector<double> grid = rho_grid(grid_size(params, opts));
  if (warm != nullptr && warm->size() != grid.size()) {
    warm->assign(grid.size(), std::nullopt);
  }

  RhoSearchResult out;
  out.objectives.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  std::optional<Multipliers> previous;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::optional<Multipliers> start = previous;
    if (warm != nullptr && (*warm)[k]) start = (*warm)[k];

    InnerSolution sol =
        solve_fixed_q_rho(q, grid[k], ch, params, opts.inner, start);
    out.inner_iterations += sol.iterations;
    if (sol.converged) {
      previous = sol.mults;
      if (warm != nullptr) (*warm)[k] = sol.mults;
    }
    if (!sol.residuals.feasible) continue;

    out.objectives[k] = sol.objective;
    if (!out.feasible || sol.objective > out.best.objective) {
      out.feasible = true;
      out.rho = grid[k];
      out.best = std::move(sol);
    }
  }
  return out;
}

SolveResult dinkelbach_solve(const ChannelRealization& ch,
                             const SystemParams& params,
                             const OuterOptions& opts) {
  if (opts.loop_order == LoopOrder::kRhoOutside) {
    return solve_rho_outside(ch, params, opts);
  }

  SolveResult res;
  RhoWarmStart warm;
  double q = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < opts.l_max; ++n) {
    const RhoSearchResult r = solve_inner_over_rho(q, ch, params, opts, &warm);
    res.outer_trace.push_back(q);
    res.outer_iterations = n + 1;
    if (!r.feasible) break;

    const PowerAllocation& alloc = r.best.alloc;
    const double u = system_capacity(alloc, ch, params);
    const double u_tp = total_power(alloc, ch, params);
    // Keep the best ratio seen so an inexact inner solve cannot move q down.
    if (u / u_tp > best) {
      best = u / u_tp;
      fill_from_allocation(res, alloc, ch, params);
      res.mults = r.best.mults;
    }
    res.ee_trace.push_back(best);
    res.rho_trace = r.objectives;
    if (u - q * u_tp <= opts.eps * u) {
      res.converged = true;
      break;
    }
    q = best;
  }
  return res;
}

SolveResult baseline_capacity_solve(const ChannelRealization& ch,
                                    const SystemParams& params,
                                    const OuterOptions& opts) {
  SolveResult res;
  const RhoSearchResult r = solve_inner_over_rho(0.0, ch, params, opts);
  res.outer_trace = {0.0};
  res.outer_iterations = 1;
  res.rho_trace = r.objectives;
  if (!r.feasible) return res;
  fill_from_allocation(res, r.best.alloc, ch, params);
  res.mults = r.best.mults;
  res.converged = r.best.converged;
  res.ee_trace = {res.q_star};
  return res;
}

bool feasibility_check(const ChannelRealization& ch, const SystemParams& params,
                       const OuterOptions& opts) {
  return baseline_capacity_solve(ch, params, opts).feasible;
}

}  // namespace swipt
