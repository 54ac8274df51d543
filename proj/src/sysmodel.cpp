#include "swipt/sysmodel.hpp"

#include <cmath>
#include <numbers>

namespace swipt {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) {
  if (!(watt > 0.0)) {
    throw std::domain_error("watt_to_dbm: power must be positive, got " +
                            std::to_string(watt));
  }
  return 10.0 * std::log10(watt) + 30.0;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams("invalid system parameters: " + what);
}

}  // namespace

void SystemParams::validate() const {
  require(bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
  require(n_subcarriers >= 1, "n_subcarriers must be >= 1");
  require(sigma_za_w > 0.0, "sigma_za must be > 0");
  require(sigma_zs_w > 0.0, "sigma_zs must be > 0");
  require(!std::isnan(inr_db) && inr_db < std::numeric_limits<double>::infinity(),
          "inr_db must be finite or -inf");
  require(p_c_w > 0.0, "p_c must be > 0");
  require(epsilon >= 1.0, "epsilon must be >= 1");
  require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
  require(p_max_w > 0.0, "p_max must be > 0");
  require(p_pg_w > 0.0, "p_pg must be > 0");
  require(p_min_req_w >= 0.0, "p_min_req must be >= 0");
  require(p_max_req_w > 0.0, "p_max_req must be > 0");
  require(p_max_req_w >= p_min_req_w, "p_max_req must be >= p_min_req");
  require(r_min_bps >= 0.0, "r_min must be >= 0");
  require(carrier_hz > 0.0, "carrier_hz must be > 0");
  require(distance_m > 0.0, "distance_m must be > 0");
  require(shadowing_lin > 0.0, "shadowing must be > 0");
  require(breakpoint_m > 0.0, "breakpoint_m must be > 0");
  require(pl_exponent_near > 0.0 && pl_exponent_far > 0.0,
          "path-loss exponents must be > 0");
  require(!std::isnan(rician_k_db), "rician_k_db must not be NaN");
  require(rho_grid_m >= 1, "rho_grid_m must be >= 1");
}

SystemParams SystemParams::reference() {
  SystemParams p;
  p.bandwidth_hz = 1.0e6;
  p.n_subcarriers = 128;
  p.sigma_za_w = dbm_to_watt(-128.0);
  p.sigma_zs_w = dbm_to_watt(-125.0);
  p.inr_db = 10.0;
  p.p_c_w = dbm_to_watt(40.0);
  p.epsilon = 1.0 / 0.38;
  p.eta = 0.8;
  p.p_max_w = dbm_to_watt(22.0);
  p.p_pg_w = dbm_to_watt(50.0);
  p.p_min_req_w = dbm_to_watt(0.0);
  p.p_max_req_w = dbm_to_watt(20.0);
  p.r_min_bps = 10.0e6;
  p.carrier_hz = 470.0e6;
  p.distance_m = 10.0;
  p.antenna_gain_db = 40.0;
  p.shadowing_lin = 1.0;
  p.rician_k_db = 6.0;
  p.rho_grid_m = 100;
  return p;
}

double path_loss_db(const SystemParams& params) {
  auto free_space_db = [&](double d) {
    return 20.0 * std::log10(4.0 * std::numbers::pi * d * params.carrier_hz /
                             kSpeedOfLight);
  };
  const double d = params.distance_m;
  const double d_bp = params.breakpoint_m;
  if (d <= d_bp) {
    // The near exponent scales the free-space slope; 2 is plain free space.
    return free_space_db(d_bp) + 10.0 * params.pl_exponent_near *
                                     std::log10(d / d_bp);
  }
  return free_space_db(d_bp) +
         10.0 * params.pl_exponent_far * std::log10(d / d_bp);
}

double path_loss_gain(const SystemParams& params) {
  return db_to_linear(-path_loss_db(params));
}

double composite_path_gain(const SystemParams& params) {
  return path_loss_gain(params) * params.shadowing_lin *
         db_to_linear(params.antenna_gain_db);
}

ChannelRng::ChannelRng(std::uint64_t seed) : engine_(seed) {}

double ChannelRng::uniform() {
  // 53 random bits mapped into the open interval (0, 1).
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double ChannelRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

double ChannelRng::exponential(double mean) {
  return -mean * std::log(uniform());
}

ChannelRealization generate_channel(const SystemParams& params,
                                    std::uint64_t seed) {
  params.validate();
  const int n = params.n_subcarriers;
  ChannelRealization ch;
  ch.seed = seed;
  ch.path_gain_lin = composite_path_gain(params);
  ch.h2.resize(n);
  ch.sigma_i_w.resize(n);

  const double k = db_to_linear(params.rician_k_db);
  const bool pure_los = std::isinf(k);
  const double los = pure_los ? 1.0 : std::sqrt(k / (k + 1.0));
  // CN(0,1) has variance 1/2 per real dimension.
  const double scatter =
      pure_los ? 0.0 : std::sqrt(1.0 / (k + 1.0)) * std::sqrt(0.5);
  const double interference_mean = params.inr_lin() * params.sigma_zs_w;

  ChannelRng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double re = los + scatter * rng.normal();
    const double im = scatter * rng.normal();
    ch.h2[i] = re * re + im * im;
    ch.sigma_i_w[i] =
        interference_mean > 0.0 ? rng.exponential(interference_mean) : 0.0;
  }
  return ch;
}

}  // namespace swipt
