#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "swipt/objective.hpp"
#include "swipt/sysmodel.hpp"

namespace swipt {

/// Dual variables of the harvest-window, transmit, rate and grid constraints.
/// Array order everywhere: {alpha (C1 lower), beta (C2), gamma (C4),
/// lambda (C3), theta (C1 upper)}.
struct Multipliers {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double theta = 0.0;

  std::array<double, 5> as_array() const {
    return {alpha, beta, gamma, lambda, theta};
  }
  static Multipliers from_array(const std::array<double, 5>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }
  bool operator==(const Multipliers&) const = default;
};

/// Slacks in multiplier order.
std::array<double, 5> slacks_in_multiplier_order(const ConstraintResiduals& r);

enum class StepRule {
  // Projected gradient preconditioned by the dual Hessian, step chosen by
  // Armijo backtracking.
  kScaled,
  // Plain projected gradient with xi_u(m) = c_u / (1 + m).
  kDiminishing,
};

struct InnerOptions {
  int max_iters = 5000;
  // Dimensionless gains for the diminishing rule; each is multiplied by the
  // constraint's natural multiplier unit over its slack scale.
  std::array<double, 5> step_gain = {1.0, 1.0, 1.0, 1.0, 1.0};
  double tol_residual = 1e-6;
  double tol_dual = 1e-7;
  // Layer-1 cap when the water level is unbounded. <= 0 selects
  // min(P_max, (P_PG - P_C) / epsilon).
  double p_cap_w = 0.0;
  StepRule step_rule = StepRule::kScaled;
  bool record_dual_trace = false;
};

struct InnerSolution {
  PowerAllocation alloc;
  Multipliers mults;
  double objective = 0.0;   // U - q * U_TP at alloc
  double dual_value = 0.0;  // dual function at mults
  int iterations = 0;
  bool converged = false;
  // Set when a necessary condition ruled out feasibility before iterating.
  bool screened_infeasible = false;
  ConstraintResiduals residuals;
  std::vector<double> dual_trace;
};

double default_power_cap(const SystemParams& params);

/// Lambda_i = q(eps - eta rho l g |H_i|^2) + lambda eps + beta
///            + (theta - alpha) eta rho l g |H_i|^2
double lambda_factor(double q, double rho, const Multipliers& mults,
                     const ChannelRealization& ch, const SystemParams& params,
                     int i);

/// Layer-1 maximizer: [W(1+gamma)/(ln2 Lambda_i) - 1/Gamma_i]^+ clipped to
/// the power cap; the cap itself where Lambda_i <= 0.
std::vector<double> waterfill(double q, double rho, const Multipliers& mults,
                              const ChannelRealization& ch,
                              const SystemParams& params,
                              const InnerOptions& opts = {});

/// mu_u(m+1) = [mu_u(m) - c_u / (1 + m) * slack_u]^+ with slacks taken from
/// `residuals` in multiplier order.
Multipliers update_multipliers(const Multipliers& mults,
                               const ConstraintResiduals& residuals, int m,
                               std::span<const double, 5> step_c);

/// Lagrangian maximized over the powers for fixed multipliers.
double dual_function(double q, double rho, const Multipliers& mults,
                     const ChannelRealization& ch, const SystemParams& params,
                     const InnerOptions& opts = {});

/**
 * Maximizes U - q U_TP over the powers for a fixed splitting ratio by
 * alternating the closed-form Layer-1 water-filling with Layer-2 multiplier
 * updates. `warm_start` replaces the all-zero initial multipliers.
 */
InnerSolution solve_fixed_q_rho(double q, double rho,
                                const ChannelRealization& ch,
                                const SystemParams& params,
                                const InnerOptions& opts = {},
                                const std::optional<Multipliers>& warm_start =
                                    std::nullopt);

struct KktReport {
  double stationarity = 0.0;     // max relative |dL/dP_i| (one-sided at 0)
  double primal = 0.0;           // max relative constraint violation
  double dual = 0.0;             // max negative multiplier
  double complementarity = 0.0;  // max |mu_u slack_u| / Lagrangian scale
  int worst_subcarrier = -1;

  double max_violation() const;
  bool passed(double tol) const { return max_violation() < tol; }
};

KktReport kkt_check(const InnerSolution& sol, double q,
                    const ChannelRealization& ch, const SystemParams& params);

}  // namespace swipt
