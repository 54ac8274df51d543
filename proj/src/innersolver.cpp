#include "swipt/innersolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace swipt {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kTiny = std::numeric_limits<double>::min();
// Scaled multipliers beyond this mean the dual is unbounded below, i.e. the
// primal problem at this rho has no feasible point.
constexpr double kDivergenceBound = 1e12;

using Mat5 = Eigen::Matrix<double, 5, 5>;

enum : int { kAlpha = 0, kBeta = 1, kGamma = 2, kLambda = 3, kTheta = 4 };

// Everything that stays fixed while the multipliers move.
struct Subproblem {
  double q = 0.0;
  double rho = 0.0;
  double w = 0.0;
  double cap = 0.0;
  double eps = 1.0;
  double p_noise = 0.0;  // harvest from interference and antenna noise
  const SystemParams* params = nullptr;
  std::vector<double> sinr;  // Gamma_i
  std::vector<double> b;     // eta rho l g |H_i|^2
  double b_max = 0.0;
  double lambda_ref = 0.0;
  std::array<double, 5> unit{};          // natural multiplier magnitudes
  std::array<double, 5> slack_scale{};   // natural slack magnitudes
  bool linear = false;                   // every Gamma_i == 0

  Subproblem(double q_, double rho_, const ChannelRealization& ch,
             const SystemParams& p, const InnerOptions& opts)
      : q(q_), rho(rho_), params(&p) {
    const int n = ch.size();
    w = p.subcarrier_bw_hz();
    cap = opts.p_cap_w > 0.0 ? opts.p_cap_w : default_power_cap(p);
    eps = p.epsilon;
    sinr.resize(n);
    b.resize(n);
    double noise = 0.0;
    double inv_sum = 0.0;
    linear = true;
    for (int i = 0; i < n; ++i) {
      sinr[i] = sinr_factor(rho, ch, p, i);
      b[i] = p.eta * rho * ch.path_gain_lin * ch.h2[i];
      b_max = std::max(b_max, b[i]);
      noise += p.sigma_za_w + ch.sigma_i_w[i];
      if (sinr[i] > 0.0) {
        linear = false;
        inv_sum += 1.0 / sinr[i];
      }
    }
    p_noise = p.eta * rho * noise;

    // Uniform water level that spends the whole cap.
    const double level0 =
        linear ? 0.0 : n * w / (kLn2 * (std::max(cap, kTiny) + inv_sum));
    lambda_ref = std::max({q * eps, level0, kTiny});
    const double b_unit = b_max > 0.0 ? lambda_ref / b_max : lambda_ref;
    unit = {b_unit, lambda_ref, 1.0, lambda_ref / eps, b_unit};
    slack_scale = {std::max({p.p_min_req_w, p_noise, kTiny}), p.p_max_w,
                   std::max(p.r_min_bps, p.bandwidth_hz), p.p_pg_w,
                   p.p_max_req_w};
  }

  int size() const { return static_cast<int>(sinr.size()); }

  double lambda_i(const Multipliers& m, int i) const {
    return q * (eps - b[i]) + m.lambda * eps + m.beta +
           (m.theta - m.alpha) * b[i];
  }
};

struct Evaluation {
  std::vector<double> p;
  double dual = 0.0;
  double capacity = 0.0;
  double sum_p = 0.0;
  double harvest = 0.0;
  std::array<double, 5> slack{};
  Mat5 hessian = Mat5::Zero();
};

Evaluation evaluate(const Subproblem& sp, const Multipliers& m,
                    bool with_hessian) {
  const SystemParams& par = *sp.params;
  const int n = sp.size();
  const double gain = 1.0 + m.gamma;
  Evaluation e;
  e.p.resize(n);
  double lagr = 0.0;
  double desired = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lam = sp.lambda_i(m, i);
    const double g = sp.sinr[i];
    double p = 0.0;
    bool interior = false;
    if (lam <= 0.0) {
      p = sp.cap;
    } else if (g > 0.0) {
      p = sp.w * gain / (kLn2 * lam) - 1.0 / g;
      if (p <= 0.0) {
        p = 0.0;
      } else if (p >= sp.cap) {
        p = sp.cap;
      } else {
        interior = true;
      }
    }
    const double c = g > 0.0 ? sp.w * std::log1p(p * g) / kLn2 : 0.0;
    e.p[i] = p;
    e.capacity += c;
    e.sum_p += p;
    desired += sp.b[i] * p;
    lagr += gain * c - lam * p;
    if (with_hessian && interior) {
      const double d = sp.w * gain / (kLn2 * lam * lam);
      Eigen::Matrix<double, 5, 1> v;
      v << sp.b[i], -1.0, lam / gain, -sp.eps, -sp.b[i];
      e.hessian.noalias() += d * v * v.transpose();
    }
  }
  e.harvest = desired + sp.p_noise;

  const double q = sp.q;
  lagr += -q * (par.p_c_w - sp.p_noise) - m.lambda * (par.p_c_w - par.p_pg_w) +
          m.beta * par.p_max_w - m.gamma * par.r_min_bps -
          m.alpha * (par.p_min_req_w - sp.p_noise) +
          m.theta * (par.p_max_req_w - sp.p_noise);
  e.dual = lagr;

  e.slack[kAlpha] = e.harvest - par.p_min_req_w;
  e.slack[kBeta] = par.p_max_w - e.sum_p;
  e.slack[kGamma] = e.capacity - par.r_min_bps;
  e.slack[kLambda] = par.p_pg_w - par.p_c_w - sp.eps * e.sum_p;
  e.slack[kTheta] = par.p_max_req_w - e.harvest;
  return e;
}

// Same scales as constraint_scales(), from an evaluation.
std::array<double, 5> iterate_scales(const Subproblem& sp,
                                     const Evaluation& e) {
  const SystemParams& p = *sp.params;
  return {std::max({p.p_min_req_w, e.harvest, kTiny}),
          std::max({p.p_max_w, e.sum_p, kTiny}),
          std::max({p.r_min_bps, e.capacity, kTiny}),
          std::max({p.p_pg_w, p.p_c_w + p.epsilon * e.sum_p, kTiny}),
          std::max({p.p_max_req_w, e.harvest, kTiny})};
}

// Primal feasibility and complementary slackness of the Layer-1 iterate.
bool kkt_satisfied(const Subproblem& sp, const Evaluation& e,
                   const Multipliers& m, double tol) {
  const auto scale = iterate_scales(sp, e);
  const auto mu = m.as_array();
  const SystemParams& p = *sp.params;
  double lscale = (1.0 + m.gamma) * e.capacity +
                  sp.q * (p.p_c_w + p.epsilon * e.sum_p) + kTiny;
  for (int u = 0; u < 5; ++u) lscale += mu[u] * scale[u];
  for (int u = 0; u < 5; ++u) {
    if (e.slack[u] / scale[u] < -tol) return false;
    if (mu[u] * std::abs(e.slack[u]) / lscale > tol) return false;
  }
  return true;
}

double movement(const Subproblem& sp, const Multipliers& from,
                const Multipliers& to) {
  const auto a = from.as_array();
  const auto b = to.as_array();
  double worst = 0.0;
  for (int u = 0; u < 5; ++u) {
    worst = std::max(worst, std::abs(b[u] - a[u]) / (std::abs(a[u]) + sp.unit[u]));
  }
  return worst;
}

bool diverged(const Subproblem& sp, const Multipliers& m) {
  const auto mu = m.as_array();
  for (int u = 0; u < 5; ++u) {
    if (!std::isfinite(mu[u]) || mu[u] > kDivergenceBound * sp.unit[u]) {
      return true;
    }
  }
  return false;
}

Multipliers project_step(const Multipliers& m, const std::array<double, 5>& d,
                         double t) {
  auto mu = m.as_array();
  for (int u = 0; u < 5; ++u) mu[u] = std::max(0.0, mu[u] + t * d[u]);
  return Multipliers::from_array(mu);
}

// Projected Newton direction on the dual. Components whose curvature
// vanishes fall back to a unit-scaled gradient step; `fallback` reports it.
std::array<double, 5> scaled_direction(const Subproblem& sp,
                                       const Evaluation& e,
                                       const Multipliers& m, bool& fallback) {
  const auto mu = m.as_array();
  std::array<double, 5> d{};
  std::array<int, 5> newton{};
  int n_newton = 0;
  fallback = false;

  double max_diag = 0.0;
  for (int u = 0; u < 5; ++u) {
    max_diag = std::max(max_diag, e.hessian(u, u) * sp.unit[u] * sp.unit[u]);
  }
  for (int u = 0; u < 5; ++u) {
    const bool pinned = mu[u] <= 0.0 && e.slack[u] >= 0.0;
    if (pinned) continue;
    const double diag = e.hessian(u, u) * sp.unit[u] * sp.unit[u];
    if (diag > 1e-12 * max_diag && diag > 0.0) {
      newton[n_newton++] = u;
    } else {
      d[u] = -e.slack[u] / sp.slack_scale[u] * sp.unit[u];
      fallback = true;
    }
  }
  if (n_newton == 0) return d;

  Eigen::MatrixXd h(n_newton, n_newton);
  Eigen::VectorXd g(n_newton);
  for (int a = 0; a < n_newton; ++a) {
    const int u = newton[a];
    g(a) = e.slack[u] * sp.unit[u];
    for (int c = 0; c < n_newton; ++c) {
      const int v = newton[c];
      h(a, c) = e.hessian(u, v) * sp.unit[u] * sp.unit[v];
    }
  }
  h.diagonal().array() += 1e-12 * max_diag;
  const Eigen::VectorXd step = h.ldlt().solve(-g);
  for (int a = 0; a < n_newton; ++a) {
    const int u = newton[a];
    d[u] = std::isfinite(step(a)) ? step(a) * sp.unit[u] : 0.0;
  }
  return d;
}

ConstraintResiduals residuals_from_slack(const std::array<double, 5>& s) {
  ConstraintResiduals r;
  r.c1_lo = s[kAlpha];
  r.c2 = s[kBeta];
  r.c4 = s[kGamma];
  r.c3 = s[kLambda];
  r.c1_hi = s[kTheta];
  return r;
}

// Necessary conditions: each constraint on its own must be satisfiable.
bool screened_out(const Subproblem& sp, double tol) {
  const SystemParams& p = *sp.params;
  if (sp.cap < 0.0 || p.p_c_w > p.p_pg_w * (1.0 + tol)) return true;
  if (sp.p_noise > p.p_max_req_w * (1.0 + tol)) return true;
  if (sp.p_noise + sp.b_max * sp.cap < p.p_min_req_w * (1.0 - tol)) {
    return true;
  }
  double rate_bound = 0.0;
  for (double g : sp.sinr) rate_bound += sp.w * std::log1p(sp.cap * g) / kLn2;
  return rate_bound < p.r_min_bps * (1.0 - tol);
}

InnerSolution finish(const Subproblem& sp, const Evaluation& e,
                     const Multipliers& m, const ChannelRealization& ch,
                     const InnerOptions& opts, InnerSolution sol) {
  sol.alloc.p_w = e.p;
  sol.alloc.rho = sp.rho;
  sol.mults = m;
  sol.dual_value = e.dual;
  sol.residuals =
      constraint_residuals(sol.alloc, ch, *sp.params, opts.tol_residual);
  sol.objective = system_capacity(sol.alloc, ch, *sp.params) -
                  sp.q * total_power_unchecked(sol.alloc, ch, *sp.params);
  if (!sol.residuals.feasible) sol.converged = false;
  return sol;
}

// All Gamma_i vanish: capacity is zero and the problem is a linear program
// in the powers. Harvest is bought on the subcarrier with the largest
// transfer efficiency, which also has the smallest net cost per harvested
// Watt.
InnerSolution solve_linear(const Subproblem& sp, const ChannelRealization& ch,
                           const InnerOptions& opts) {
  const SystemParams& p = *sp.params;
  const int n = sp.size();
  Multipliers m;
  Evaluation e;
  e.p.assign(n, 0.0);
  InnerSolution sol;
  sol.iterations = 1;
  const double need = p.p_min_req_w - sp.p_noise;
  if (need > 0.0 && sp.b_max > 0.0) {
    const int best = static_cast<int>(
        std::max_element(sp.b.begin(), sp.b.end()) - sp.b.begin());
    e.p[best] = need / sp.b[best];
    m.alpha = std::max(0.0, sp.q * (sp.eps - sp.b[best]) / sp.b[best]);
  }
  double desired = 0.0;
  for (int i = 0; i < n; ++i) desired += sp.b[i] * e.p[i];
  e.dual = -sp.q * (p.p_c_w + sp.eps * std::accumulate(e.p.begin(), e.p.end(), 0.0) -
                    desired - sp.p_noise);
  sol.converged = true;
  return finish(sp, e, m, ch, opts, std::move(sol));
}

}  // namespace

std::array<double, 5> slacks_in_multiplier_order(const ConstraintResiduals& r) {
  return {r.c1_lo, r.c2, r.c4, r.c3, r.c1_hi};
}

double default_power_cap(const SystemParams& params) {
  return std::min(params.p_max_w,
                  (params.p_pg_w - params.p_c_w) / params.epsilon);
}

double lambda_factor(double q, double rho, const Multipliers& mults,
                     const ChannelRealization& ch, const SystemParams& params,
                     int i) {
  const double transfer = params.eta * rho * ch.path_gain_lin * ch.h2[i];
  return q * (params.epsilon - transfer) + mults.lambda * params.epsilon +
         mults.beta + (mults.theta - mults.alpha) * transfer;
}

std::vector<double> waterfill(double q, double rho, const Multipliers& mults,
                              const ChannelRealization& ch,
                              const SystemParams& params,
                              const InnerOptions& opts) {
  const Subproblem sp(q, rho, ch, params, opts);
  return evaluate(sp, mults, false).p;
}

Multipliers update_multipliers(const Multipliers& mults,
                               const ConstraintResiduals& residuals, int m,
                               std::span<const double, 5> step_c) {
  const auto slack = slacks_in_multiplier_order(residuals);
  auto mu = mults.as_array();
  const double decay = 1.0 / (1.0 + m);
  for (int u = 0; u < 5; ++u) {
    mu[u] = std::max(0.0, mu[u] - step_c[u] * decay * slack[u]);
  }
  return Multipliers::from_array(mu);
}

double dual_function(double q, double rho, const Multipliers& mults,
                     const ChannelRealization& ch, const SystemParams& params,
                     const InnerOptions& opts) {
  const Subproblem sp(q, rho, ch, params, opts);
  return evaluate(sp, mults, false).dual;
}

InnerSolution solve_fixed_q_rho(double q, double rho,
                                const ChannelRealization& ch,
                                const SystemParams& params,
                                const InnerOptions& opts,
                                const std::optional<Multipliers>& warm_start) {
  const Subproblem sp(q, rho, ch, params, opts);

  if (screened_out(sp, opts.tol_residual)) {
    InnerSolution sol;
    sol.screened_infeasible = true;
    Evaluation e;
    e.p.assign(sp.size(), 0.0);
    return finish(sp, e, Multipliers{}, ch, opts, std::move(sol));
  }
  if (sp.linear) return solve_linear(sp, ch, opts);

  InnerSolution sol;
  Multipliers m = warm_start.value_or(Multipliers{});
  const bool scaled = opts.step_rule == StepRule::kScaled;
  Evaluation e = evaluate(sp, m, scaled);

  std::array<double, 5> step_c{};
  for (int u = 0; u < 5; ++u) {
    step_c[u] = opts.step_gain[u] * sp.unit[u] / sp.slack_scale[u];
  }

  for (int it = 0; it < opts.max_iters; ++it) {
    sol.iterations = it + 1;
    if (opts.record_dual_trace) sol.dual_trace.push_back(e.dual);

    Multipliers next;
    if (scaled) {
      bool fallback = false;
      const auto d = scaled_direction(sp, e, m, fallback);
      const Multipliers full = project_step(m, d, 1.0);
      if (kkt_satisfied(sp, e, m, opts.tol_residual) &&
          movement(sp, m, full) <= opts.tol_dual) {
        sol.converged = true;
        break;
      }
      // Armijo backtracking on the dual; a small absolute allowance absorbs
      // rounding in the dual value near the optimum.
      const double noise = 1e-13 * (std::abs(e.dual) + 1.0);
      auto sufficient = [&](const Multipliers& cand, const Evaluation& ec) {
        const auto a = m.as_array();
        const auto b = cand.as_array();
        double pred = 0.0;
        for (int u = 0; u < 5; ++u) pred += e.slack[u] * (b[u] - a[u]);
        return ec.dual <= e.dual + 1e-4 * pred + noise;
      };
      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        next = project_step(m, d, t);
        if (sufficient(next, evaluate(sp, next, false))) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (accepted && fallback && t == 1.0) {
        // Gradient fallback steps carry no curvature information; expand
        // while the dual keeps decreasing.
        double best_dual = evaluate(sp, next, false).dual;
        for (int ls = 0; ls < 60; ++ls) {
          const Multipliers cand = project_step(m, d, 2.0 * t);
          const Evaluation ec = evaluate(sp, cand, false);
          if (!(ec.dual < best_dual) || !sufficient(cand, ec)) break;
          best_dual = ec.dual;
          next = cand;
          t *= 2.0;
        }
      }
      if (!accepted) {
        sol.converged = kkt_satisfied(sp, e, m, opts.tol_residual);
        break;
      }
    } else {
      next = update_multipliers(m, residuals_from_slack(e.slack), it,
                                std::span<const double, 5>(step_c));
      if (kkt_satisfied(sp, e, m, opts.tol_residual) &&
          movement(sp, m, next) <= opts.tol_dual) {
        sol.converged = true;
        break;
      }
    }

    m = next;
    e = evaluate(sp, m, scaled);
    if (diverged(sp, m)) break;
  }
  return finish(sp, e, m, ch, opts, std::move(sol));
}

double KktReport::max_violation() const {
  return std::max({stationarity, primal, dual, complementarity});
}

KktReport kkt_check(const InnerSolution& sol, double q,
                    const ChannelRealization& ch, const SystemParams& params) {
  const PowerAllocation& a = sol.alloc;
  const Multipliers& m = sol.mults;
  const double w = params.subcarrier_bw_hz();
  const double gain = 1.0 + m.gamma;
  KktReport rep;

  for (int i = 0; i < ch.size(); ++i) {
    const double g = sinr_factor(a.rho, ch, params, i);
    const double transfer = params.eta * a.rho * ch.path_gain_lin * ch.h2[i];
    const double marginal = gain * w * g / (kLn2 * (1.0 + a.p_w[i] * g));
    const double lam = lambda_factor(q, a.rho, m, ch, params, i);
    const double grad = marginal - lam;
    const double scale =
        marginal + std::abs(q * (params.epsilon - transfer)) +
        m.lambda * params.epsilon + m.beta + (m.alpha + m.theta) * transfer +
        kTiny;
    const double v = a.p_w[i] > 0.0 ? std::abs(grad) / scale
                                    : std::max(0.0, grad) / scale;
    if (v > rep.stationarity) {
      rep.stationarity = v;
      rep.worst_subcarrier = i;
    }
  }

  const ConstraintResiduals r = constraint_residuals(a, ch, params);
  const ConstraintScales cs = constraint_scales(a, ch, params);
  const std::array<double, 5> slack = slacks_in_multiplier_order(r);
  const std::array<double, 5> scale = {cs.c1_lo, cs.c2, cs.c4, cs.c3, cs.c1_hi};
  const auto mu = m.as_array();

  const double capacity = system_capacity(a, ch, params);
  double lscale = gain * capacity +
                  std::abs(q) * (params.p_c_w + params.epsilon * a.total_w()) +
                  kTiny;
  for (int u = 0; u < 5; ++u) lscale += std::abs(mu[u]) * scale[u];
  for (int u = 0; u < 5; ++u) {
    rep.primal = std::max(rep.primal, -slack[u] / scale[u]);
    rep.dual = std::max(rep.dual, -mu[u]);
    rep.complementarity =
        std::max(rep.complementarity, std::abs(mu[u] * slack[u]) / lscale);
  }
  return rep;
}

}  // namespace swipt
