#include <cmath>
#include <numbers>

#include "doctest.h"
#include "swipt/sysmodel.hpp"

using namespace swipt;

TEST_CASE("dBm conversions") {
  CHECK(dbm_to_watt(40.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(dbm_to_watt(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(dbm_to_watt(-125.0) == doctest::Approx(std::pow(10.0, -15.5)).epsilon(1e-14));
  CHECK(watt_to_dbm(dbm_to_watt(17.3)) == doctest::Approx(17.3).epsilon(1e-14));
  CHECK_THROWS_AS(watt_to_dbm(0.0), std::domain_error);
  CHECK_THROWS_AS(watt_to_dbm(-1.0), std::domain_error);
  CHECK(db_to_linear(30.0) == doctest::Approx(1000.0));
  CHECK(linear_to_db(0.01) == doctest::Approx(-20.0));
}

TEST_CASE("reference scenario is valid and splits bandwidth exactly") {
  const SystemParams p = SystemParams::reference();
  CHECK_NOTHROW(p.validate());
  CHECK(p.subcarrier_bw_hz() * p.n_subcarriers == p.bandwidth_hz);
  CHECK(p.p_c_w == doctest::Approx(10.0));
  CHECK(p.p_max_req_w == doctest::Approx(0.1));
  CHECK(p.epsilon == doctest::Approx(2.6316).epsilon(1e-4));
}

TEST_CASE("validate rejects each broken invariant") {
  auto broken = [](auto mutate) {
    SystemParams p = SystemParams::reference();
    mutate(p);
    return p;
  };
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.epsilon = 0.9; }).validate(), InvalidParams);
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.eta = 1.2; }).validate(), InvalidParams);
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.eta = -0.1; }).validate(), InvalidParams);
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.p_max_w = 0.0; }).validate(), InvalidParams);
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.p_c_w = -1.0; }).validate(), InvalidParams);
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.p_min_req_w = -1e-3; }).validate(), InvalidParams);
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.p_max_req_w = p.p_min_req_w / 2; }).validate(),
                  InvalidParams);
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.rho_grid_m = 0; }).validate(), InvalidParams);
  CHECK_THROWS_AS(broken([](SystemParams& p) { p.n_subcarriers = 0; }).validate(), InvalidParams);
  CHECK_NOTHROW(broken([](SystemParams& p) { p.p_min_req_w = 0.0; }).validate());
}

TEST_CASE("path loss: free space inside the breakpoint, steeper slope beyond") {
  SystemParams p = SystemParams::reference();
  p.distance_m = 1.0;
  const double fs1 = 20.0 * std::log10(4.0 * std::numbers::pi * 1.0 * p.carrier_hz / kSpeedOfLight);
  CHECK(path_loss_db(p) == doctest::Approx(fs1).epsilon(1e-12));

  p.distance_m = 20.0;
  const double at20 = path_loss_db(p);
  p.distance_m = 40.0;
  CHECK(path_loss_db(p) - at20 == doctest::Approx(35.0 * std::log10(2.0)).epsilon(1e-12));

  p.distance_m = 10.0;
  const double lg_db = linear_to_db(composite_path_gain(p));
  CHECK(lg_db >= -15.0);
  CHECK(lg_db <= -5.0);
  CHECK(path_loss_gain(p) <= 1.0);
}

TEST_CASE("channel draws are reproducible and well formed") {
  const SystemParams p = SystemParams::reference();
  const ChannelRealization a = generate_channel(p, 42);
  const ChannelRealization b = generate_channel(p, 42);
  const ChannelRealization c = generate_channel(p, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  REQUIRE(a.size() == p.n_subcarriers);
  CHECK(a.path_gain_lin > 0.0);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.h2[i] >= 0.0);
    CHECK(a.sigma_i_w[i] >= 0.0);
  }
}

TEST_CASE("small-scale fading has unit mean power, interference matches INR") {
  SystemParams p = SystemParams::reference();
  p.n_subcarriers = 1000;
  p.inr_db = 10.0;
  double h = 0.0, s = 0.0;
  const int draws = 100;
  for (int k = 0; k < draws; ++k) {
    const ChannelRealization ch = generate_channel(p, 1000 + k);
    for (int i = 0; i < ch.size(); ++i) {
      h += ch.h2[i];
      s += ch.sigma_i_w[i];
    }
  }
  const double n = 1000.0 * draws;
  CHECK(h / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s / n / (10.0 * p.sigma_zs_w) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("disabled interference and pure line of sight") {
  SystemParams p = SystemParams::reference();
  p.inr_db = -std::numeric_limits<double>::infinity();
  p.rician_k_db = std::numeric_limits<double>::infinity();
  const ChannelRealization ch = generate_channel(p, 5);
  for (int i = 0; i < ch.size(); ++i) {
    CHECK(ch.sigma_i_w[i] == 0.0);
    CHECK(ch.h2[i] == doctest::Approx(1.0));
  }
}
