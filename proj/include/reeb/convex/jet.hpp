#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace reeb::convex {

/// Second-order jet in four variables: value, gradient, Hessian.
struct Jet {
  double v = 0.0;
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();

  static Jet constant(double c) {
    Jet j;
    j.v = c;
    return j;
  }
  static Jet variable(const Eigen::Vector4d& x, int i) {
    Jet j;
    j.v = x[i];
    j.g[i] = 1.0;
    return j;
  }
};

inline Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.g + b.g, a.H + b.H}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.g - b.g, a.H - b.H}; }
inline Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.g, s * a.H}; }

inline Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.v * b.g + b.v * a.g,
          a.v * b.H + b.v * a.H + a.g * b.g.transpose() + b.g * a.g.transpose()};
}

/// f ∘ a for scalar f with derivatives (f, f′, f″) at a.v.
inline Jet compose(const Jet& a, double f, double df, double ddf) {
  return {f, df * a.g, df * a.H + ddf * a.g * a.g.transpose()};
}

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}

inline Jet reciprocal(const Jet& a) {
  const double r = 1.0 / a.v;
  return compose(a, r, -r * r, 2 * r * r * r);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet pow(const Jet& a, int n) {
  if (n == 0) return Jet::constant(1.0);
  const double p = std::pow(a.v, n);
  const double dp = n * std::pow(a.v, n - 1);
  const double ddp = n >= 2 ? n * (n - 1) * std::pow(a.v, n - 2) : 0.0;
  return compose(a, p, dp, ddp);
}

} // namespace reeb::convex
