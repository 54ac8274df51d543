#include "swipt/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace swipt {

double PowerAllocation::total_w() const {
  return std::accumulate(p_w.begin(), p_w.end(), 0.0);
}

double sinr_factor(double rho, const ChannelRealization& ch,
                   const SystemParams& params, int i) {
  const double keep = 1.0 - rho;
  if (keep <= 0.0) return 0.0;
  const double num = keep * ch.path_gain_lin * ch.h2[i];
  const double den =
      keep * (params.sigma_za_w + ch.sigma_i_w[i]) + params.sigma_zs_w;
  return num / den;
}

double subcarrier_capacity(double p_w, double gamma, double w_hz) {
  return w_hz * std::log1p(p_w * gamma) / std::numbers::ln2;
}

double system_capacity(const PowerAllocation& alloc,
                       const ChannelRealization& ch,
                       const SystemParams& params) {
  const double w = params.subcarrier_bw_hz();
  double u = 0.0;
  for (int i = 0; i < ch.size(); ++i) {
    u += subcarrier_capacity(alloc.p_w[i],
                             sinr_factor(alloc.rho, ch, params, i), w);
  }
  return u;
}

HarvestedPower harvested_power(const PowerAllocation& alloc,
                               const ChannelRealization& ch,
                               const SystemParams& params) {
  double desired = 0.0;
  double noise = 0.0;
  for (int i = 0; i < ch.size(); ++i) {
    desired += alloc.p_w[i] * ch.path_gain_lin * ch.h2[i];
    noise += params.sigma_za_w + ch.sigma_i_w[i];
  }
  const double k = params.eta * alloc.rho;
  return {k * desired, k * noise};
}

double total_power_unchecked(const PowerAllocation& alloc,
                             const ChannelRealization& ch,
                             const SystemParams& params) {
  const HarvestedPower h = harvested_power(alloc, ch, params);
  return params.p_c_w + params.epsilon * alloc.total_w() - h.desired_w -
         h.interference_w;
}

double total_power(const PowerAllocation& alloc, const ChannelRealization& ch,
                   const SystemParams& params) {
  const double u_tp = total_power_unchecked(alloc, ch, params);
  if (!(u_tp > 0.0)) {
    throw NonPhysicalPower(
        "total power dissipation is non-positive (" + std::to_string(u_tp) +
        " W); harvesting credit exceeds consumption");
  }
  return u_tp;
}

double energy_efficiency(const PowerAllocation& alloc,
                         const ChannelRealization& ch,
                         const SystemParams& params) {
  const double u_tp = total_power(alloc, ch, params);
  return system_capacity(alloc, ch, params) / u_tp;
}

ConstraintScales constraint_scales(const PowerAllocation& alloc,
                                   const ChannelRealization& ch,
                                   const SystemParams& params) {
  constexpr double kFloor = std::numeric_limits<double>::min();
  const double harvest = harvested_power(alloc, ch, params).total();
  const double sum_p = alloc.total_w();
  return {
      std::max({params.p_min_req_w, harvest, kFloor}),
      std::max({params.p_max_req_w, harvest, kFloor}),
      std::max({params.p_max_w, sum_p, kFloor}),
      std::max({params.p_pg_w, params.p_c_w + params.epsilon * sum_p, kFloor}),
      std::max({params.r_min_bps, system_capacity(alloc, ch, params), kFloor}),
  };
}

ConstraintResiduals constraint_residuals(const PowerAllocation& alloc,
                                         const ChannelRealization& ch,
                                         const SystemParams& params,
                                         double tol) {
  const double harvest = harvested_power(alloc, ch, params).total();
  const double sum_p = alloc.total_w();

  ConstraintResiduals r;
  r.c1_lo = harvest - params.p_min_req_w;
  r.c1_hi = params.p_max_req_w - harvest;
  r.c2 = params.p_max_w - sum_p;
  r.c3 = params.p_pg_w - params.p_c_w - params.epsilon * sum_p;
  r.c4 = system_capacity(alloc, ch, params) - params.r_min_bps;

  const ConstraintScales s = constraint_scales(alloc, ch, params);
  r.worst_relative = std::min({r.c1_lo / s.c1_lo, r.c1_hi / s.c1_hi,
                               r.c2 / s.c2, r.c3 / s.c3, r.c4 / s.c4});

  bool nonneg = alloc.rho >= 0.0 && alloc.rho <= 1.0;
  for (double p : alloc.p_w) nonneg = nonneg && p >= 0.0;
  r.feasible = nonneg && r.worst_relative >= -tol;
  return r;
}

}  // namespace swipt
