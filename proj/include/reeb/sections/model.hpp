#pragma once

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "reeb/convex/body.hpp"
#include "reeb/flow/ode.hpp"
#include "reeb/geometry/revolution_metric.hpp"

namespace reeb::sections {

/// Components 0..3: point of S³ in (x, y, u, v); component 4: unwrapped
/// transverse angle of the linearized flow in the model's global frame.
using OrbitState = flow::State<5>;

/// A flow on S³ (directly, or through a fixed diffeomorphism) with a global frame of ξ.
class S3Flow {
public:
  virtual ~S3Flow() = default;
  virtual std::string name() const = 0;
  /// Orbit through the S³ point at time t0, integrated to t1 (either direction).
  virtual flow::Trajectory<5> orbit(const Eigen::Vector4d& s3_point, double theta0, double t0, double t1) const = 0;
  /// Lower bound of the frame angle rate if known in closed form (0 otherwise).
  virtual double angle_rate_lower_bound() const { return 0.0; }
  /// S³ point displaced by eps along cos(a)·e₁ + sin(a)·e₂ of the model frame of ξ.
  virtual Eigen::Vector4d frame_pushoff(const Eigen::Vector4d& s3_point, double eps, double angle) const;
  /// Copy with integration tolerances multiplied by factor.
  virtual std::shared_ptr<const S3Flow> with_tolerance(double factor) const = 0;
};

/// Reeb flow on ∂C of a convex body, carried to S³ by radial projection,
/// angle measured in the Salomão frame.
class ConvexS3Flow : public S3Flow {
public:
  explicit ConvexS3Flow(std::shared_ptr<const convex::ConvexBody> body, flow::IntegratorOptions opt = {});
  std::string name() const override;
  flow::Trajectory<5> orbit(const Eigen::Vector4d& s3_point, double theta0, double t0, double t1) const override;
  Eigen::Vector4d frame_pushoff(const Eigen::Vector4d& s3_point, double eps, double angle) const override;
  std::shared_ptr<const S3Flow> with_tolerance(double factor) const override;
  const convex::ConvexBody& body() const { return *body_; }
  /// ∂C point (state coordinates) over an S³ point.
  convex::Vec4 to_body(const Eigen::Vector4d& s3_point) const;

private:
  std::shared_ptr<const convex::ConvexBody> body_;
  flow::IntegratorOptions opt_;
};

/// Geodesic flow of an ellipsoid of revolution lifted to S³ through D_g,
/// angle measured in the geodesic frame. Time is geodesic arclength.
class LiftedGeodesicS3Flow : public S3Flow {
public:
  explicit LiftedGeodesicS3Flow(geometry::RevolutionMetric metric, flow::IntegratorOptions opt = {});
  std::string name() const override;
  flow::Trajectory<5> orbit(const Eigen::Vector4d& s3_point, double theta0, double t0, double t1) const override;
  double angle_rate_lower_bound() const override;
  std::shared_ptr<const S3Flow> with_tolerance(double factor) const override;
  const geometry::RevolutionMetric& metric() const { return metric_; }

private:
  geometry::RevolutionMetric metric_;
  flow::IntegratorOptions opt_;
};

/// The same orbits traversed with speed factor 1/k (Reeb flow of k·λ for the Reeb flow of λ).
class ScaledS3Flow : public S3Flow {
public:
  ScaledS3Flow(std::shared_ptr<const S3Flow> inner, double factor);
  std::string name() const override;
  flow::Trajectory<5> orbit(const Eigen::Vector4d& s3_point, double theta0, double t0, double t1) const override;
  double angle_rate_lower_bound() const override { return inner_->angle_rate_lower_bound() / k_; }
  Eigen::Vector4d frame_pushoff(const Eigen::Vector4d& s3_point, double eps, double angle) const override {
    return inner_->frame_pushoff(s3_point, eps, angle);
  }
  std::shared_ptr<const S3Flow> with_tolerance(double factor) const override {
    return std::make_shared<ScaledS3Flow>(inner_->with_tolerance(factor), k_);
  }

private:
  std::shared_ptr<const S3Flow> inner_;
  double k_;
};

} // namespace reeb::sections
