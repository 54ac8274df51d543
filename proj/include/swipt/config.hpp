#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "swipt/dinkelbach.hpp"
#include "swipt/harness.hpp"
#include "swipt/sysmodel.hpp"

namespace swipt {

/// Malformed or invalid configuration. The message names the line or key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Everything a CLI run needs, kept in the units of the JSON file (dBm, dB,
 * Hz) so that load -> serialize -> load is exact. Conversion to Watt happens
 * in to_params().
 */
struct RunConfig {
  double bandwidth_hz = 1.0e6;
  int n_subcarriers = 128;
  double sigma_za_dbm = -128.0;
  double sigma_zs_dbm = -125.0;
  double inr_db = 10.0;  // -inf disables interference
  double p_c_dbm = 40.0;
  double epsilon = 1.0 / 0.38;
  double eta = 0.8;
  double p_max_dbm = 22.0;
  double p_pg_dbm = 50.0;
  double p_min_req_dbm = 0.0;
  double p_max_req_dbm = 20.0;
  double r_min_bps = 10.0e6;
  double carrier_hz = 470.0e6;
  double distance_m = 10.0;
  double antenna_gain_db = 40.0;
  double shadowing_db = 0.0;
  double breakpoint_m = 5.0;
  double pl_exponent_near = 2.0;
  double pl_exponent_far = 3.5;
  double rician_k_db = 6.0;
  int rho_grid_m = 100;

  int l_max = 20;
  double outer_eps = 1e-4;
  std::string loop_order = "rho_inside";  // rho_inside | rho_outside
  int inner_max_iters = 5000;
  double inner_tol_residual = 1e-6;
  double inner_tol_dual = 1e-7;
  std::string inner_step_rule = "scaled";  // scaled | diminishing

  std::vector<double> p_max_dbm_grid = {6, 10, 14, 18, 20, 22, 26, 30, 36};
  std::vector<double> inr_db_list = {0, 10, 50};
  int n_trials = 1000;
  std::uint64_t seed = 1;
  std::string scheme = "both";

  int verify_instances = 50;
  int verify_rho_grid_m = 20;

  std::string output_csv;  // empty: stdout
  std::string output_svg;  // empty: no chart
  std::string output_json;

  bool operator==(const RunConfig&) const = default;
};

/// Parses JSON text. `source` prefixes diagnostics (usually the file path).
RunConfig parse_config(const std::string& text,
                       const std::string& source = "<config>");
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Unit conversion and validation; throws ConfigError.
SystemParams to_params(const RunConfig& cfg);
OuterOptions to_solver(const RunConfig& cfg);
SweepConfig to_sweep(const RunConfig& cfg);

}  // namespace swipt
