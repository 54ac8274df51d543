#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "support/oracle.hpp"
#include "swipt/dinkelbach.hpp"
#include "swipt/harness.hpp"

using namespace swipt;

TEST_CASE("rho grid") {
  const auto g = rho_grid(4);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g[1] == 0.25);
  CHECK(g.back() == 1.0);
  CHECK(rho_grid(1) == std::vector<double>{0.0, 1.0});
}

TEST_CASE("rho = 1 is never feasible with a rate requirement") {
  SystemParams p = SystemParams::reference();
  p.p_min_req_w = 0.0;  // rho = 0 harvests nothing
  const ChannelRealization ch = generate_channel(p, 2);
  OuterOptions o;
  o.rho_grid_m = 1;
  const RhoSearchResult r = solve_inner_over_rho(0.0, ch, p, o);
  REQUIRE(r.objectives.size() == 2);
  CHECK(std::isnan(r.objectives[1]));
  CHECK(r.feasible);
  CHECK(r.rho == 0.0);
}

TEST_CASE("infeasible instance reports zeros") {
  SystemParams p = SystemParams::reference();
  p.p_max_w = dbm_to_watt(-10.0);
  const ChannelRealization ch = generate_channel(p, 3);
  const SolveResult r = dinkelbach_solve(ch, p);
  CHECK_FALSE(r.feasible);
  CHECK(r.q_star == 0.0);
  CHECK(r.capacity_bps == 0.0);
  CHECK_FALSE(baseline_capacity_solve(ch, p).feasible);
  CHECK_FALSE(feasibility_check(ch, p));
}

TEST_CASE("feasibility check without harvest or rate demands") {
  SystemParams p = SystemParams::reference();
  p.p_min_req_w = 0.0;
  p.r_min_bps = 0.0;
  p.p_max_w = dbm_to_watt(-30.0);
  for (std::uint64_t s = 1; s <= 5; ++s) CHECK(feasibility_check(generate_channel(p, s), p));
}

TEST_CASE("fixed point and monotone trace on the reference scenario") {
  const SystemParams base = SystemParams::reference();
  const OuterOptions o;
  int solved = 0;
  for (double pmax : {14.0, 22.0, 30.0}) {
    for (double inr : {0.0, 50.0}) {
      const SystemParams p = params_at(base, pmax, inr);
      for (std::uint64_t s = 1; s <= 3; ++s) {
        const ChannelRealization ch = generate_channel(p, s);
        const SolveResult r = dinkelbach_solve(ch, p, o);
        if (!r.feasible) continue;
        ++solved;
        CAPTURE(pmax);
        CAPTURE(inr);
        CHECK(r.converged);
        CHECK(r.outer_iterations <= 5);
        const double u = r.capacity_bps;
        CHECK(std::abs(u - r.q_star * r.u_tp_w) <= o.eps * u);
        for (std::size_t n = 1; n < r.outer_trace.size(); ++n) {
          CHECK(r.outer_trace[n] >= r.outer_trace[n - 1] - 1e-12 * r.outer_trace[n]);
        }
        for (std::size_t n = 1; n < r.ee_trace.size(); ++n) {
          CHECK(r.ee_trace[n] >= r.ee_trace[n - 1]);
        }
        // no rho can beat q* by more than eps
        const RhoSearchResult at = solve_inner_over_rho(r.q_star, ch, p, o);
        REQUIRE(at.feasible);
        CHECK(at.best.objective <= o.eps * u);
        CHECK(at.best.objective >= -o.eps * u);
      }
    }
  }
  CHECK(solved >= 12);
}

TEST_CASE("swapped loop order agrees") {
  const SystemParams p = params_at(SystemParams::reference(), 26.0, 10.0);
  OuterOptions inside;
  inside.rho_grid_m = 20;
  OuterOptions outside = inside;
  outside.loop_order = LoopOrder::kRhoOutside;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const ChannelRealization ch = generate_channel(p, s);
    const SolveResult a = dinkelbach_solve(ch, p, inside);
    const SolveResult b = dinkelbach_solve(ch, p, outside);
    REQUIRE(a.feasible);
    REQUIRE(b.feasible);
    CHECK(std::abs(a.q_star - b.q_star) <= inside.eps * a.q_star);
  }
}

TEST_CASE("capacity baseline dominates in rate and is dominated in efficiency") {
  for (double pmax : {10.0, 22.0, 36.0}) {
    const SystemParams p = params_at(SystemParams::reference(), pmax, 10.0);
    for (std::uint64_t s = 1; s <= 3; ++s) {
      const ChannelRealization ch = generate_channel(p, s);
      const SolveResult ee = dinkelbach_solve(ch, p);
      const SolveResult cap = baseline_capacity_solve(ch, p);
      REQUIRE(ee.feasible == cap.feasible);
      if (!ee.feasible) continue;
      CHECK(cap.capacity_bps >= ee.capacity_bps * (1 - 1e-6));
      CHECK(cap.q_star <= ee.q_star * (1 + 1e-6));
    }
  }
}

TEST_CASE("relaxing demands never lowers the optimum") {
  const SystemParams p = params_at(SystemParams::reference(), 18.0, 10.0);
  SystemParams relaxed = p;
  relaxed.r_min_bps = 0.0;
  relaxed.p_min_req_w = 0.0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const ChannelRealization ch = generate_channel(p, s);
    const SolveResult a = dinkelbach_solve(ch, p);
    const SolveResult b = dinkelbach_solve(ch, relaxed);
    if (!a.feasible) continue;
    CHECK(b.q_star >= a.q_star * (1 - 1e-6));
  }
}

TEST_CASE("two-subcarrier optimum matches an independent joint grid") {
  for (std::uint64_t seed : {3u, 8u, 13u}) {
    const SmallInstance s = random_small_instance(seed, 2);
    OuterOptions o;
    o.rho_grid_m = 10;
    const SolveResult r = dinkelbach_solve(s.channel, s.params, o);
    double best = -1.0;
    for (double rho : rho_grid(10)) {
      const double v = oracle::grid_max_2d(
          [&](const std::vector<double>& x) {
            return oracle::capacity(x, rho, s.channel, s.params) /
                   oracle::u_tp(x, rho, s.channel, s.params);
          },
          [&](const std::vector<double>& x) { return oracle::feasible(x, rho, s.channel, s.params); },
          default_power_cap(s.params), 300);
      best = std::max(best, v);
    }
    CAPTURE(seed);
    REQUIRE(r.feasible == (best > 0.0));
    if (r.feasible) CHECK(std::abs(r.q_star - best) <= 5e-3 * best);
  }
}

TEST_CASE("reference scenario is feasible at 22 dBm with high probability") {
  const SystemParams p = SystemParams::reference();
  int ok = 0;
  const int n = 200;
  for (int s = 0; s < n; ++s) ok += feasibility_check(generate_channel(p, 500 + s), p);
  CHECK(ok > 0.95 * n);
}
