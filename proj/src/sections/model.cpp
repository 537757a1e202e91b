#include "reeb/sections/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reeb/convex/reeb_flow.hpp"
#include "reeb/geometry/geodesic.hpp"
#include "reeb/lift/s3.hpp"
#include "reeb/util/errors.hpp"

namespace reeb::sections {

namespace {
flow::IntegratorOptions scaled(flow::IntegratorOptions o, double f) {
  o.abs_tol *= f;
  o.rel_tol *= f;
  return o;
}
} // namespace

Eigen::Vector4d S3Flow::frame_pushoff(const Eigen::Vector4d&, double, double) const {
  throw PreconditionError("model has no pushoff frame");
}

ConvexS3Flow::ConvexS3Flow(std::shared_ptr<const convex::ConvexBody> body, flow::IntegratorOptions opt)
    : body_(std::move(body)), opt_(opt) {
  opt_.max_step = std::min(opt_.max_step, 0.1);
}

std::string ConvexS3Flow::name() const { return "convex:" + body_->family(); }

convex::Vec4 ConvexS3Flow::to_body(const Eigen::Vector4d& s3) const {
  return body_->boundary_point(convex::from_complex_coords(s3));
}

flow::Trajectory<5> ConvexS3Flow::orbit(const Eigen::Vector4d& s3, double theta0, double t0, double t1) const {
  const convex::Vec4 z0 = to_body(s3);
  auto lin = convex::evolve_linearized(*body_, z0, {std::cos(theta0), std::sin(theta0)}, t1 - t0, opt_);
  flow::Trajectory<5> out;
  out.options = lin.options;
  out.stats = lin.stats;
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const Eigen::Vector4d x = convex::to_complex_coords(lin.y[i].head<4>());
    const Eigen::Vector4d dx = convex::to_complex_coords(lin.dy[i].head<4>());
    const double r = x.norm();
    const Eigen::Vector4d s = x / r;
    OrbitState y, dy;
    y << s, lin.y[i][6];
    dy << (dx - s.dot(dx) * s) / r, lin.dy[i][6];
    out.push(t0 + lin.t[i], y, dy);
  }
  return out;
}

Eigen::Vector4d ConvexS3Flow::frame_pushoff(const Eigen::Vector4d& s3, double eps, double angle) const {
  const convex::Vec4 z = to_body(s3);
  const auto f = convex::salomao_frame(*body_, z);
  return convex::to_complex_coords(z + eps * (std::cos(angle) * f.X1 + std::sin(angle) * f.X2)).normalized();
}

std::shared_ptr<const S3Flow> ConvexS3Flow::with_tolerance(double f) const {
  return std::make_shared<ConvexS3Flow>(body_, scaled(opt_, f));
}

std::shared_ptr<const S3Flow> LiftedGeodesicS3Flow::with_tolerance(double f) const {
  return std::make_shared<LiftedGeodesicS3Flow>(metric_, scaled(opt_, f));
}

LiftedGeodesicS3Flow::LiftedGeodesicS3Flow(geometry::RevolutionMetric metric, flow::IntegratorOptions opt)
    : metric_(metric), opt_(opt) {
  opt_.max_step = std::min(opt_.max_step, 0.1);
}

std::string LiftedGeodesicS3Flow::name() const {
  std::ostringstream os;
  os << "lifted_geodesic:c=" << metric_.c();
  return os.str();
}

double LiftedGeodesicS3Flow::angle_rate_lower_bound() const { return std::min(1.0, metric_.k_min()); }

flow::Trajectory<5> LiftedGeodesicS3Flow::orbit(const Eigen::Vector4d& s3, double theta0, double t0,
                                                double t1) const {
  const lift::Quaternion Z0 = s3.normalized();
  const geometry::UnitTangent x0 = lift::double_cover(metric_, Z0);
  auto down = geometry::geodesic_jacobi_flow(metric_, x0, 0.0, 1.0, theta0, t1 - t0, opt_);
  flow::Trajectory<5> out;
  out.options = down.options;
  out.stats = down.stats;
  lift::Quaternion prev = Z0;
  const double h = 1e-5;
  auto lift_at = [&](double s, const lift::Quaternion& ref) {
    flow::State<6> st = down.at(s).head<6>();
    geometry::project_state(metric_, st);
    return lift::lift_near(metric_, geometry::UnitTangent::from_state(st), ref);
  };
  for (std::size_t i = 0; i < down.size(); ++i) {
    flow::State<6> st = down.y[i].head<6>();
    const lift::Quaternion Z = lift::lift_near(metric_, geometry::UnitTangent::from_state(st), prev);
    if (i > 0 && (Z - prev).norm() > 0.5)
      throw LiftDiscontinuity("lift jumped between integrator nodes; reduce max_step");
    // one-sided differences at the ends of the interval
    const double a = std::min(down.t.front(), down.t.back()), b = std::max(down.t.front(), down.t.back());
    const double lo = std::max(a, down.t[i] - h), hi = std::min(b, down.t[i] + h);
    const Eigen::Vector4d dZ = (lift_at(hi, Z) - lift_at(lo, Z)) / (hi - lo);
    OrbitState y, dy;
    y << Z, down.y[i][8];
    dy << dZ, down.dy[i][8];
    out.push(t0 + down.t[i], y, dy);
    prev = Z;
  }
  return out;
}

ScaledS3Flow::ScaledS3Flow(std::shared_ptr<const S3Flow> inner, double factor) : inner_(std::move(inner)), k_(factor) {
  if (!(factor > 0)) throw PreconditionError("scale factor must be positive");
}

std::string ScaledS3Flow::name() const {
  std::ostringstream os;
  os << inner_->name() << "/scaled=" << k_;
  return os.str();
}

flow::Trajectory<5> ScaledS3Flow::orbit(const Eigen::Vector4d& s3, double theta0, double t0, double t1) const {
  auto tr = inner_->orbit(s3, theta0, 0.0, (t1 - t0) / k_);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    tr.t[i] = t0 + k_ * tr.t[i];
    tr.dy[i] /= k_;
  }
  return tr;
}

} // namespace reeb::sections
