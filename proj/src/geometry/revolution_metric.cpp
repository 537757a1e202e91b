#include "reeb/geometry/revolution_metric.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "reeb/util/errors.hpp"

namespace reeb::geometry {

RevolutionMetric::RevolutionMetric(double c) : c_(c) {
  if (!(c > 0) || !std::isfinite(c)) throw PreconditionError("semi-axis c must be positive");
  k_min_ = std::min(c * c, 1.0 / (c * c));
  k_max_ = std::max(c * c, 1.0 / (c * c));
}

double RevolutionMetric::constraint(const Eigen::Vector3d& p) const {
  return p.x() * p.x() + p.y() * p.y() + p.z() * p.z() / (c_ * c_) - 1.0;
}

Eigen::Vector3d RevolutionMetric::constraint_gradient(const Eigen::Vector3d& p) const {
  return {2 * p.x(), 2 * p.y(), 2 * p.z() / (c_ * c_)};
}

Eigen::Vector3d RevolutionMetric::unit_normal(const Eigen::Vector3d& p) const {
  return constraint_gradient(p).normalized();
}

double RevolutionMetric::curvature(const Eigen::Vector3d& p, double tol) const {
  const double f = constraint(p);
  if (std::abs(f) > tol)
    throw ConstraintViolation("point off the surface, |F| = " + std::to_string(std::abs(f)));
  const double c4 = c_ * c_ * c_ * c_;
  const double s = p.x() * p.x() + p.y() * p.y() + p.z() * p.z() / c4;
  return 1.0 / (c_ * c_ * s * s);
}

double RevolutionMetric::normalization_scale() const { return std::sqrt(k_max_); }

Eigen::Vector3d RevolutionMetric::point(double latitude, double longitude) const {
  return {std::cos(latitude) * std::cos(longitude), std::cos(latitude) * std::sin(longitude),
          c_ * std::sin(latitude)};
}

Eigen::Vector3d RevolutionMetric::project_point(Eigen::Vector3d p) const {
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d g = constraint_gradient(p);
    const double f = constraint(p);
    if (std::abs(f) < 1e-15) break;
    p -= f / g.squaredNorm() * g;
  }
  return p;
}

double RevolutionMetric::equator_length() const { return 2 * std::numbers::pi; }

namespace {

template <class F>
double golden_min(const F& f, double a, double b, int iters = 100) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-14; ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1; x1 = b - r * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2; x2 = a + r * (b - a); f2 = f(x2);
    }
  }
  return std::min({f(a), f(b), f1, f2});
}

} // namespace

PinchingResult pinching(const RevolutionMetric& metric, int grid) {
  const double pi = std::numbers::pi;
  double kmin = 1e300, kmax = 0;
  for (int i = 0; i <= grid; ++i) {
    const double lat = -pi / 2 + pi * i / grid;
    for (int j = 0; j < grid; ++j) {
      const double lon = 2 * pi * j / grid;
      const double k = metric.curvature(metric.project_point(metric.point(lat, lon)));
      kmin = std::min(kmin, k);
      kmax = std::max(kmax, k);
    }
  }
  auto k_at = [&](double lat) { return metric.curvature(metric.project_point(metric.point(lat, 0.0))); };
  const double rmin = golden_min(k_at, -pi / 2, pi / 2);
  const double rmax = -golden_min([&](double lat) { return -k_at(lat); }, -pi / 2, pi / 2);
  // endpoints of the meridian are the poles; golden search only sees the interior
  const double refined_min = std::min({rmin, k_at(pi / 2), k_at(0.0)});
  const double refined_max = std::max({rmax, k_at(pi / 2), k_at(0.0)});
  PinchingResult r;
  r.k_min = std::min(kmin, refined_min);
  r.k_max = std::max(kmax, refined_max);
  r.delta = r.k_min / r.k_max;
  r.grid_error = std::max(std::abs(kmin - r.k_min), std::abs(kmax - r.k_max));
  return r;
}

} // namespace reeb::geometry
