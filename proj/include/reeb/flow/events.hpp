#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "reeb/flow/ode.hpp"

namespace reeb::flow {

template <int N>
struct CrossingEvent {
  double time = 0.0;
  State<N> location;
  int sign = 0;                 ///< +1 if the section function increases along traversal order
  double transversal_speed = 0; ///< |d/dt g| at the crossing
  bool tangential = false;      ///< speed below the tangency tolerance
  std::string section_id;
};

template <int N>
struct CrossingReport {
  std::vector<CrossingEvent<N>> events;
  std::vector<double> near_misses; ///< node times where |g| < tol without a sign change
  bool degenerate = false;         ///< every sample lies in the zero set
};

struct EventOptions {
  double time_tol = 1e-10;
  double tangency_tol = 1e-6;
  double zero_tol = 1e-9;
};

/// Sign changes of g(t, y) along the dense output, bisected in time.
/// `accept(t, y)` restricts the zero set (e.g. a half-plane of a page).
template <int N, class G, class Accept>
CrossingReport<N> detect_crossings(const Trajectory<N>& traj, const G& g, const Accept& accept,
                                   const std::string& id = "", EventOptions opt = {}) {
  CrossingReport<N> rep;
  const std::size_t n = traj.size();
  if (n == 0) return rep;
  std::vector<double> gv(n);
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    gv[i] = g(traj.t[i], traj.y[i]);
    if (std::abs(gv[i]) > opt.zero_tol) all_zero = false;
  }
  if (all_zero) {
    rep.degenerate = true;
    return rep;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double g0 = gv[i], g1 = gv[i + 1];
    // exact zeros at a node are attributed to the segment ending there
    const bool change = (g0 < 0 && g1 >= 0) || (g0 > 0 && g1 <= 0);
    if (!change) {
      if (std::abs(g1) < opt.zero_tol && i + 2 < n) rep.near_misses.push_back(traj.t[i + 1]);
      continue;
    }
    if (g0 == 0.0) continue;
    double a = traj.t[i], b = traj.t[i + 1];
    double ga = g0;
    while (std::abs(b - a) > opt.time_tol) {
      const double m = 0.5 * (a + b);
      const double gm = g(m, traj.hermite(i, m));
      if ((ga < 0) == (gm < 0) && gm != 0.0) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    const double tc = 0.5 * (a + b);
    State<N> yc = traj.hermite(i, tc);
    if (!accept(tc, yc)) continue;
    CrossingEvent<N> ev;
    ev.time = tc;
    ev.location = yc;
    ev.sign = g1 > g0 ? 1 : -1;
    const double h = std::max(1e-7, 1e-7 * std::abs(tc));
    const double lo = std::max(std::min(traj.t[i], traj.t[i + 1]), tc - h);
    const double hi = std::min(std::max(traj.t[i], traj.t[i + 1]), tc + h);
    ev.transversal_speed =
        hi > lo ? std::abs(g(hi, traj.hermite(i, hi)) - g(lo, traj.hermite(i, lo))) / (hi - lo) : 0.0;
    ev.tangential = ev.transversal_speed < opt.tangency_tol;
    ev.section_id = id;
    rep.events.push_back(ev);
  }
  return rep;
}

template <int N, class G>
CrossingReport<N> detect_crossings(const Trajectory<N>& traj, const G& g, const std::string& id = "",
                                   EventOptions opt = {}) {
  return detect_crossings(traj, g, [](double, const State<N>&) { return true; }, id, opt);
}

} // namespace reeb::flow
