#include "reeb/certify/thresholds.hpp"

#include <cmath>
#include <numbers>

#include "reeb/util/errors.hpp"

namespace reeb::certify {

double pinching_polynomial(double x) { return (4 * x - 2) * x * x - 1; }

DeltaStar delta_star() {
  DeltaStar r;
  double a = 0.5, b = 1.0;
  double x = 0.85;
  for (int it = 0; it < 100; ++it) {
    r.iterations = it + 1;
    const double p = pinching_polynomial(x);
    if (p == 0) break;
    if (p < 0) a = x;
    else b = x;
    const double dp = 12 * x * x - 4 * x;
    double nx = x - p / dp;
    if (!(nx > a && nx < b)) nx = 0.5 * (a + b);
    if (std::abs(nx - x) < 1e-17) {
      x = nx;
      break;
    }
    x = nx;
  }
  // last-ulp polish: pick the neighbour with the smaller residual
  for (int k = 0; k < 4; ++k) {
    const double up = std::nextafter(x, 2.0), dn = std::nextafter(x, 0.0);
    const double px = std::abs(pinching_polynomial(x));
    if (std::abs(pinching_polynomial(up)) < px) x = up;
    else if (std::abs(pinching_polynomial(dn)) < px) x = dn;
  }
  r.x = x;
  r.delta = x * x;
  r.residual = std::abs(pinching_polynomial(x));
  r.unique = pinching_polynomial(0.0) < 0 && pinching_polynomial(1.0 / 3.0) < 0;
  return r;
}

MuWindow mu_window(double delta) {
  if (!(delta > 0.25) || delta > 1.0) throw PreconditionError("mu window needs δ in (1/4, 1]");
  const double s = std::sqrt(delta);
  MuWindow w;
  w.lower = s / (2 * s - 1);
  w.upper = 2 * delta * s;
  w.feasible = w.upper - w.lower > 1e-12;
  return w;
}

DisplacementWindow displacement_window(double L, double delta) {
  if (!(delta > 0) || delta > 1) throw PreconditionError("δ outside (0, 1]");
  const double w = 2 * std::numbers::pi * (1 / std::sqrt(delta) - 1);
  return {L - w, L + w};
}

double alpha_arc_bound(double L, double delta) {
  if (!(delta > 0.25) || delta > 1) throw PreconditionError("F(δ) needs δ in (1/4, 1]");
  return L / 2 + std::numbers::pi * (1 / std::sqrt(delta) - 1);
}

} // namespace reeb::certify
