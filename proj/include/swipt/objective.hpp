#pragma once

#include <stdexcept>
#include <vector>

#include "swipt/sysmodel.hpp"

namespace swipt {

/// Transmit powers per subcarrier (Watt) and the power-splitting ratio.
struct PowerAllocation {
  std::vector<double> p_w;
  double rho = 0.0;

  double total_w() const;
  bool operator==(const PowerAllocation&) const = default;
};

/// Signed slacks of the harvest window (C1), transmit limit (C2), grid
/// limit (C3) and rate requirement (C4). Non-negative means satisfied.
struct ConstraintResiduals {
  double c1_lo = 0.0;
  double c1_hi = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  bool feasible = false;

  /// Most negative slack, each normalized by its constraint scale.
  double worst_relative = 0.0;
};

inline constexpr double kDefaultFeasibilityTol = 1e-6;

/// U_TP <= 0: the power model has no physical meaning for these inputs.
class NonPhysicalPower : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct HarvestedPower {
  double desired_w = 0.0;       // P_D
  double interference_w = 0.0;  // P_I
  double total() const { return desired_w + interference_w; }
};

/// Per-Watt SINR factor of subcarrier i.
double sinr_factor(double rho, const ChannelRealization& ch,
                   const SystemParams& params, int i);

double subcarrier_capacity(double p_w, double gamma, double w_hz);

double system_capacity(const PowerAllocation& alloc,
                       const ChannelRealization& ch,
                       const SystemParams& params);

HarvestedPower harvested_power(const PowerAllocation& alloc,
                               const ChannelRealization& ch,
                               const SystemParams& params);

/// Net power dissipation. Throws NonPhysicalPower when the result is <= 0.
double total_power(const PowerAllocation& alloc, const ChannelRealization& ch,
                   const SystemParams& params);

/// Same as total_power but returns the raw value without the sign check.
double total_power_unchecked(const PowerAllocation& alloc,
                             const ChannelRealization& ch,
                             const SystemParams& params);

/// Bits per Joule. Propagates NonPhysicalPower.
double energy_efficiency(const PowerAllocation& alloc,
                         const ChannelRealization& ch,
                         const SystemParams& params);

ConstraintResiduals constraint_residuals(const PowerAllocation& alloc,
                                         const ChannelRealization& ch,
                                         const SystemParams& params,
                                         double tol = kDefaultFeasibilityTol);

/// Scale against which each slack is judged: max(|lhs|, |rhs|) with a floor.
struct ConstraintScales {
  double c1_lo, c1_hi, c2, c3, c4;
};
ConstraintScales constraint_scales(const PowerAllocation& alloc,
                                   const ChannelRealization& ch,
                                   const SystemParams& params);

}  // namespace swipt
