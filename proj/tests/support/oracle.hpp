#pragma once

// Independent re-derivations used as test oracles. Nothing here calls the
// library's objective or solver code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "swipt/sysmodel.hpp"

namespace oracle {

inline double gamma(double rho, const swipt::ChannelRealization& ch,
                    const swipt::SystemParams& p, int i) {
  const double num = (1.0 - rho) * ch.path_gain_lin * ch.h2[i];
  const double den = (1.0 - rho) * (p.sigma_za_w + ch.sigma_i_w[i]) + p.sigma_zs_w;
  return num / den;
}

inline double capacity(const std::vector<double>& pw, double rho,
                       const swipt::ChannelRealization& ch,
                       const swipt::SystemParams& p) {
  double c = 0.0;
  const double w = p.bandwidth_hz / p.n_subcarriers;
  for (std::size_t i = 0; i < pw.size(); ++i) {
    c += w * std::log2(1.0 + pw[i] * gamma(rho, ch, p, static_cast<int>(i)));
  }
  return c;
}

inline double harvest(const std::vector<double>& pw, double rho,
                      const swipt::ChannelRealization& ch,
                      const swipt::SystemParams& p) {
  double h = 0.0;
  for (std::size_t i = 0; i < pw.size(); ++i) {
    h += p.eta * rho * (pw[i] * ch.path_gain_lin * ch.h2[i] + p.sigma_za_w + ch.sigma_i_w[i]);
  }
  return h;
}

inline double u_tp(const std::vector<double>& pw, double rho,
                   const swipt::ChannelRealization& ch,
                   const swipt::SystemParams& p) {
  double sum = 0.0;
  for (double x : pw) sum += x;
  return p.p_c_w + p.epsilon * sum - harvest(pw, rho, ch, p);
}

// Plain feasibility with a relative tolerance per constraint.
inline bool feasible(const std::vector<double>& pw, double rho,
                     const swipt::ChannelRealization& ch,
                     const swipt::SystemParams& p, double tol = 1e-6) {
  double sum = 0.0;
  for (double x : pw) {
    if (x < 0.0) return false;
    sum += x;
  }
  const double h = harvest(pw, rho, ch, p);
  const double c = capacity(pw, rho, ch, p);
  auto ge = [tol](double lhs, double rhs) {
    return lhs - rhs >= -tol * std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  };
  return ge(h, p.p_min_req_w) && ge(p.p_max_req_w, h) && ge(p.p_max_w, sum) &&
         ge(p.p_pg_w, p.p_c_w + p.epsilon * sum) && ge(c, p.r_min_bps);
}

// Best value of f over a uniform 2-D grid of powers in [0, cap]^2 followed by
// a local pattern search, for a fixed rho. Returns -inf when nothing is
// feasible.
inline double grid_max_2d(const std::function<double(const std::vector<double>&)>& f,
                          const std::function<bool(const std::vector<double>&)>& ok,
                          double cap, int steps) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> bp(2, 0.0), p(2);
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; b <= steps; ++b) {
      p = {cap * a / steps, cap * b / steps};
      if (!ok(p)) continue;
      const double v = f(p);
      if (v > best) { best = v; bp = p; }
    }
  }
  if (!std::isfinite(best)) return best;
  for (double h = cap / steps; h > cap * 1e-12; h *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int da = -1; da <= 1; ++da) {
        for (int db = -1; db <= 1; ++db) {
          p = {bp[0] + da * h, bp[1] + db * h};
          if (p[0] < 0 || p[1] < 0 || p[0] > cap || p[1] > cap || !ok(p)) continue;
          const double v = f(p);
          if (v > best * (1 + 1e-15) + 1e-300) { best = v; bp = p; moved = true; }
        }
      }
    }
  }
  return best;
}

}  // namespace oracle
