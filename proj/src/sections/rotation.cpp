#include "reeb/sections/rotation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "reeb/util/errors.hpp"

namespace reeb::sections {

namespace {
constexpr double two_pi = 2 * std::numbers::pi;
}

Loop orbit_loop(const S3Flow& flow, const PeriodicOrbit& orbit, int n) {
  auto tr = flow.orbit(orbit.start, 0.0, 0.0, orbit.period);
  Loop l;
  for (int k = 0; k < n; ++k) l.push_back(tr.at(orbit.period * k / n).head<4>().normalized());
  return l;
}

Loop pushoff_loop(const S3Flow& flow, const PeriodicOrbit& orbit, double eps, int twist, int n) {
  auto tr = flow.orbit(orbit.start, 0.0, 0.0, orbit.period);
  Loop l;
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector4d p = tr.at(orbit.period * k / n).head<4>().normalized();
    l.push_back(flow.frame_pushoff(p, eps, two_pi * twist * k / n));
  }
  return l;
}

double frame_turns(const S3Flow& flow, const PeriodicOrbit& orbit, int n, double theta0) {
  auto tr = flow.orbit(orbit.start, theta0, 0.0, n * orbit.period);
  return (tr.y.back()[4] - tr.y.front()[4]) / (two_pi * n);
}

RotationNumber rotation_number(const S3Flow& flow, const PeriodicOrbit& orbit, Framing framing,
                               const RotationOptions& opt, double theta0) {
  if (orbit.period <= 0) throw PreconditionError("period must be positive");
  RotationNumber r;
  {
    auto one = flow.orbit(orbit.start, theta0, 0.0, orbit.period);
    r.closure_gap = (one.y.back().head<4>() - one.y.front().head<4>()).norm();
  }
  if (r.closure_gap > opt.closure_tol) {
    std::ostringstream os;
    os << "orbit does not close: gap " << r.closure_gap;
    throw PreconditionError(os.str());
  }
  r.rho_n = frame_turns(flow, orbit, opt.periods, theta0);
  r.rho_2n = frame_turns(flow, orbit, 2 * opt.periods, theta0);
  r.convergence = std::abs(r.rho_2n - r.rho_n);
  r.value = 2 * r.rho_2n - r.rho_n;
  if (r.convergence > opt.convergence_tol) {
    std::ostringstream os;
    os << "rotation average not converged: rho_n=" << r.rho_n << " rho_2n=" << r.rho_2n;
    throw ConvergenceError(os.str());
  }
  if (framing == Framing::seifert) {
    const auto g = linking_gauss(orbit_loop(flow, orbit, opt.loop_points),
                                 pushoff_loop(flow, orbit, opt.pushoff_eps, 0, opt.loop_points));
    r.framing_correction = g.value;
    r.value += g.value;
  }
  return r;
}

CZIndex cz_index(double rho, int n, double tol) {
  if (n <= 0) throw PreconditionError("iterate must be positive");
  CZIndex c;
  const double x = n * rho;
  c.value = 2 * int(std::floor(x)) + 1;
  if (std::abs(x - std::round(x)) < tol) {
    c.degenerate = true;
    c.lower = 2 * int(std::round(x)) - 1;
    c.upper = 2 * int(std::round(x)) + 1;
  } else {
    c.lower = c.upper = c.value;
  }
  return c;
}

std::vector<AdditivityResidual> rotation_additivity_check(const S3Flow& flow, const std::vector<PeriodicOrbit>& orbits,
                                                          const RotationOptions& opt) {
  const std::size_t n = orbits.size();
  std::vector<Loop> loops;
  for (const auto& o : orbits) loops.push_back(orbit_loop(flow, o, opt.loop_points));
  std::vector<AdditivityResidual> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double turns = rotation_number(flow, orbits[i], Framing::model, opt).value;
    // left: pushoff along e₁ measured against the whole collection
    const Loop push = pushoff_loop(flow, orbits[i], opt.pushoff_eps, 0, opt.loop_points);
    int lk_all = 0;
    for (std::size_t j = 0; j < n; ++j) lk_all += linking_gauss(push, loops[j]).value;
    out[i].left = turns + lk_all;
    // right: frame rotated once along γᵢ, its own Seifert correction, then the pairwise links
    const Loop push_b = pushoff_loop(flow, orbits[i], opt.pushoff_eps, 1, opt.loop_points);
    const double turns_b = turns - 1.0;
    double rhs = turns_b + linking_gauss(loops[i], push_b).value;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) rhs += linking_gauss(loops[i], loops[j]).value;
    out[i].right = rhs;
    out[i].residual = std::abs(out[i].left - out[i].right);
  }
  return out;
}

} // namespace reeb::sections
