#include "reeb/sections/polar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reeb/util/errors.hpp"
#include "reeb/util/sampling.hpp"

namespace reeb::sections {

namespace {
constexpr double two_pi = 2 * std::numbers::pi;
}

PolarTorus PolarTorus::geodesic_frame(double period, std::function<double(double)> K) {
  PolarTorus t;
  t.period = period;
  t.b = [K = std::move(K)](double vt, double th) {
    const double c = std::cos(th), s = std::sin(th);
    return c * c + K(vt) * s * s;
  };
  return t;
}

flow::Trajectory<2> polar_torus_flow(const PolarTorus& torus, const Eigen::Vector2d& start, double T,
                                     const flow::IntegratorOptions& opt) {
  if (torus.period <= 0) throw PreconditionError("period must be positive");
  auto rhs = [&](double, const flow::State<2>& y) {
    flow::State<2> d;
    d << 1.0 / torus.period, torus.b(y[0] - std::floor(y[0]), y[1]);
    return d;
  };
  return flow::integrate<2>(rhs, 0.0, flow::State<2>(start), T, opt);
}

SectionVerdict boundary_section_check(const PolarTorus& torus, const std::function<double(double)>& g,
                                      const std::function<double(double)>& dg, double time_cap, int n_samples) {
  SectionVerdict v;
  const double cap = time_cap > 0 ? time_cap : 10 * torus.period;
  // transversality along the graph
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 256; ++i) {
    const double vt = i / 256.0;
    const double r = torus.b(vt, g(vt)) - dg(vt) / torus.period;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  v.min_transversality = lo > 0 ? lo : (hi < 0 ? -hi : 0.0);
  flow::IntegratorOptions opt;
  opt.max_step = std::min(0.05, torus.period / 20);
  for (int k = 0; k < n_samples; ++k) {
    const Eigen::Vector2d x0(util::radical_inverse(k + 1, 2), two_pi * util::radical_inverse(k + 1, 3));
    for (double dir : {1.0, -1.0}) {
      auto tr = polar_torus_flow(torus, x0, dir * cap, opt);
      // h = θ − g(ϑ) hits 2πℤ
      auto h = [&](std::size_t i) { return tr.y[i][1] - g(tr.y[i][0] - std::floor(tr.y[i][0])); };
      double hit = -1;
      for (std::size_t i = 1; i < tr.size() && hit < 0; ++i) {
        const double a = std::floor(h(i - 1) / two_pi), b = std::floor(h(i) / two_pi);
        if (a != b && std::abs(tr.t[i]) > 1e-12) hit = std::abs(tr.t[i]);
      }
      if (hit < 0) {
        ++v.misses;
        continue;
      }
      if (dir > 0) v.max_forward_time = std::max(v.max_forward_time, hit);
      else v.max_backward_time = std::max(v.max_backward_time, hit);
    }
  }
  v.section = v.misses == 0 && v.min_transversality > 0;
  if (v.misses > 0) v.reason = "trajectories miss the graph within the time cap";
  else if (!(v.min_transversality > 0)) v.reason = "flow tangent to the graph";
  return v;
}

} // namespace reeb::sections
