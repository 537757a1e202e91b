#pragma once

#include <Eigen/Dense>

namespace reeb::geometry {

/// Ellipsoid of revolution x² + y² + (z/c)² = 1 with the induced metric.
/// c = 1 is the round unit sphere.
class RevolutionMetric {
public:
  explicit RevolutionMetric(double c);

  double c() const { return c_; }

  double constraint(const Eigen::Vector3d& p) const;
  Eigen::Vector3d constraint_gradient(const Eigen::Vector3d& p) const;
  /// Hessian of the constraint function (constant, diagonal).
  Eigen::Vector3d constraint_hessian_diag() const { return {2.0, 2.0, 2.0 / (c_ * c_)}; }
  Eigen::Vector3d unit_normal(const Eigen::Vector3d& p) const;

  /// Gaussian curvature; throws ConstraintViolation if p is off the surface.
  double curvature(const Eigen::Vector3d& p, double tol = 1e-8) const;

  /// Closed-form extrema (pole c², equator 1/c²).
  double k_min() const { return k_min_; }
  double k_max() const { return k_max_; }
  double delta() const { return k_min_ / k_max_; }
  /// Factor turning lengths into units with K_max = 1.
  double normalization_scale() const;

  /// Surface point at latitude φ (from the equator) and longitude ψ.
  Eigen::Vector3d point(double latitude, double longitude) const;
  /// Newton projection along the gradient onto the surface.
  Eigen::Vector3d project_point(Eigen::Vector3d p) const;

  double equator_length() const;

private:
  double c_;
  double k_min_;
  double k_max_;
};

struct PinchingResult {
  double k_min = 0;
  double k_max = 0;
  double delta = 0;
  double grid_error = 0; ///< gap between raw grid extrema and refined extrema
};

/// δ = K_min/K_max from a 64x64 latitude-longitude grid refined by
/// golden-section search along the meridian.
PinchingResult pinching(const RevolutionMetric& metric, int grid = 64);

} // namespace reeb::geometry
