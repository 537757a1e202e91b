#include "reeb/flow/winding.hpp"

#include <cmath>
#include <numbers>

#include "reeb/util/errors.hpp"

namespace reeb::flow {

double wrap_pi(double a) {
  a = std::remainder(a, 2 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
  return a;
}

bool AngleUnwrapper::push(Complex z) {
  if (z == Complex(0.0, 0.0)) throw DegeneratePathError("path passes through zero");
  const double raw = std::arg(z);
  if (!started_) {
    angle_ = start_ = last_raw_ = raw;
    started_ = true;
    return true;
  }
  const double d = wrap_pi(raw - last_raw_);
  last_raw_ = raw;
  angle_ += d;
  return std::abs(d) <= max_step_;
}

double winding(const std::vector<Complex>& samples) {
  AngleUnwrapper u;
  for (const auto& z : samples)
    if (!u.push(z)) throw ResolutionError("angular step exceeds pi/2; sample more densely");
  return u.total() / (2 * std::numbers::pi);
}

namespace {

double refine(const std::function<Complex(double)>& z, double a, Complex za, double b, Complex zb,
              int depth, int max_depth) {
  const double d = wrap_pi(std::arg(zb) - std::arg(za));
  if (std::abs(d) <= std::numbers::pi / 2) return d;
  if (depth >= max_depth) throw ResolutionError("angular step exceeds pi/2 after refinement");
  const double m = 0.5 * (a + b);
  const Complex zm = z(m);
  if (zm == Complex(0.0, 0.0)) throw DegeneratePathError("path passes through zero");
  return refine(z, a, za, m, zm, depth + 1, max_depth) + refine(z, m, zm, b, zb, depth + 1, max_depth);
}

} // namespace

double winding(const std::function<Complex(double)>& z, double a, double b, int n, int max_depth) {
  if (n < 1) n = 1;
  double total = 0.0;
  double ta = a;
  Complex za = z(a);
  if (za == Complex(0.0, 0.0)) throw DegeneratePathError("path passes through zero");
  for (int i = 1; i <= n; ++i) {
    const double tb = a + (b - a) * double(i) / n;
    const Complex zb = z(tb);
    if (zb == Complex(0.0, 0.0)) throw DegeneratePathError("path passes through zero");
    total += refine(z, ta, za, tb, zb, 0, max_depth);
    ta = tb;
    za = zb;
  }
  return total / (2 * std::numbers::pi);
}

} // namespace reeb::flow
