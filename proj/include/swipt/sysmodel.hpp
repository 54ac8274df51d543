#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace swipt {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Thrown when a parameter set violates one of its invariants.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double dbm_to_watt(double dbm);
/// Throws std::domain_error for watt <= 0.
double watt_to_dbm(double watt);
double db_to_linear(double db);
double linear_to_db(double lin);

/**
 * Scenario constants of the OFDM link. All powers are stored in Watt; dBm
 * only appears at the configuration boundary.
 */
struct SystemParams {
  double bandwidth_hz = 1.0e6;
  int n_subcarriers = 128;

  double sigma_za_w = 0.0;  // antenna noise per subcarrier
  double sigma_zs_w = 0.0;  // signal-processing noise per subcarrier
  // Mean interference-to-processing-noise ratio. -inf disables interference.
  double inr_db = 10.0;

  double p_c_w = 10.0;
  double epsilon = 1.0 / 0.38;
  double eta = 0.8;

  double p_max_w = 0.1;       // transmit limit (C2)
  double p_pg_w = 100.0;      // grid supply limit (C3)
  double p_min_req_w = 1e-3;  // harvest window (C1)
  double p_max_req_w = 0.1;
  double r_min_bps = 10.0e6;  // rate requirement (C4)

  double carrier_hz = 470.0e6;
  double distance_m = 10.0;
  double antenna_gain_db = 40.0;  // Tx + Rx combined
  double shadowing_lin = 1.0;
  double breakpoint_m = 5.0;
  double pl_exponent_near = 2.0;
  double pl_exponent_far = 3.5;

  double rician_k_db = 6.0;
  int rho_grid_m = 100;

  double subcarrier_bw_hz() const { return bandwidth_hz / n_subcarriers; }
  double inr_lin() const { return db_to_linear(inr_db); }

  /// Throws InvalidParams naming the first violated invariant.
  void validate() const;

  /// Defaults of the reference scenario (-125/-128 dBm noise, P_C = 40 dBm...).
  static SystemParams reference();
};

/**
 * One draw of the small-scale fading and interference statistics.
 * `path_gain_lin` already includes shadowing and antenna gains.
 */
struct ChannelRealization {
  double path_gain_lin = 1.0;
  std::vector<double> h2;
  std::vector<double> sigma_i_w;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(h2.size()); }
  bool operator==(const ChannelRealization&) const = default;
};

/// Free-space loss up to the breakpoint, log-distance slope beyond it (dB).
double path_loss_db(const SystemParams& params);

/// Linear propagation gain l <= 1, antenna gains excluded.
double path_loss_gain(const SystemParams& params);

/// l * g * antenna gains.
double composite_path_gain(const SystemParams& params);

/// Seeded draw: Rician |H_i|^2 with unit mean power and exponential
/// interference variances with mean inr * sigma_zs. Bit-exact in (params, seed).
ChannelRealization generate_channel(const SystemParams& params,
                                    std::uint64_t seed);

/// Deterministic normal/exponential source used by generate_channel.
class ChannelRng {
 public:
  explicit ChannelRng(std::uint64_t seed);

  double uniform();  // (0, 1)
  double normal();
  double exponential(double mean);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace swipt
