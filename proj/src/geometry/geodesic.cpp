#include "reeb/geometry/geodesic.hpp"

#include <cmath>
#include <ostream>

namespace reeb::geometry {

GeoState UnitTangent::state() const {
  GeoState s;
  s << p, v;
  return s;
}

UnitTangent UnitTangent::from_state(const GeoState& s) { return {s.head<3>(), s.tail<3>()}; }

UnitTangent unit_tangent(const RevolutionMetric& m, double latitude, double longitude, double heading) {
  const Eigen::Vector3d p = m.project_point(m.point(latitude, longitude));
  const Eigen::Vector3d n = m.unit_normal(p);
  Eigen::Vector3d east(-std::sin(longitude), std::cos(longitude), 0.0);
  east = (east - east.dot(n) * n).normalized();
  const Eigen::Vector3d north = n.cross(east);
  return {p, (std::cos(heading) * east + std::sin(heading) * north).normalized()};
}

Eigen::Vector3d rotate_tangent(const RevolutionMetric& m, const Eigen::Vector3d& p,
                               const Eigen::Vector3d& v) {
  return m.unit_normal(p).cross(v);
}

GeoState geodesic_rhs(const RevolutionMetric& m, const GeoState& s) {
  const Eigen::Vector3d p = s.head<3>(), v = s.tail<3>();
  const Eigen::Vector3d g = m.constraint_gradient(p);
  const double vhv = v.dot(m.constraint_hessian_diag().cwiseProduct(v));
  GeoState d;
  d << v, -(vhv / g.squaredNorm()) * g;
  return d;
}

void project_state(const RevolutionMetric& m, Eigen::Ref<flow::State<6>> s) {
  Eigen::Vector3d p = m.project_point(s.head<3>());
  Eigen::Vector3d v = s.tail<3>();
  const Eigen::Vector3d n = m.unit_normal(p);
  v -= v.dot(n) * n;
  v.normalize();
  s << p, v;
}

double clairaut(const GeoState& s) { return s[0] * s[4] - s[1] * s[3]; }

flow::Trajectory<6> geodesic_flow(const RevolutionMetric& m, const UnitTangent& x0, double T,
                                  const flow::IntegratorOptions& opt) {
  auto rhs = [&m](double, const GeoState& s) { return geodesic_rhs(m, s); };
  auto proj = [&m](GeoState& s) { project_state(m, s); };
  return flow::integrate<6>(rhs, 0.0, x0.state(), T, opt, proj);
}

double frame_angle_rate(double K, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return c * c + K * s * s;
}

GeoJacobiState geodesic_jacobi_rhs(const RevolutionMetric& m, const GeoJacobiState& s) {
  GeoJacobiState d;
  d.head<6>() = geodesic_rhs(m, s.head<6>());
  // RK stages sit slightly off the surface; evaluate at the nearest surface point
  const double K = m.curvature(m.project_point(s.head<3>()));
  d[6] = s[7];
  d[7] = -K * s[6];
  d[8] = frame_angle_rate(K, s[8]);
  return d;
}

flow::Trajectory<9> geodesic_jacobi_flow(const RevolutionMetric& m, const UnitTangent& x0,
                                         double b0, double db0, double theta0, double T,
                                         const flow::IntegratorOptions& opt) {
  GeoJacobiState s0;
  s0 << x0.p, x0.v, b0, db0, theta0;
  auto rhs = [&m](double, const GeoJacobiState& s) { return geodesic_jacobi_rhs(m, s); };
  auto proj = [&m](GeoJacobiState& s) { project_state(m, s.head<6>()); };
  return flow::integrate<9>(rhs, 0.0, s0, T, opt, proj);
}

Eigen::Vector2d jacobi_evolve(const std::function<double(double)>& K, Eigen::Vector2d b0, double T,
                              const flow::IntegratorOptions& opt) {
  auto rhs = [&K](double t, const flow::State<2>& b) {
    return flow::State<2>(b[1], -K(t) * b[0]);
  };
  auto traj = flow::integrate<2>(rhs, 0.0, b0, T, opt);
  return traj.y.back();
}

void write_trajectory_csv(std::ostream& os, const flow::Trajectory<6>& traj) {
  os << "t,px,py,pz,vx,vy,vz\n";
  os.precision(17);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << traj.t[i];
    for (int k = 0; k < 6; ++k) os << ',' << traj.y[i][k];
    os << '\n';
  }
}

} // namespace reeb::geometry
