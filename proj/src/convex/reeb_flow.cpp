#include "reeb/convex/reeb_flow.hpp"

#include <cmath>
#include <string>

namespace reeb::convex {

Mat4 J0_qqpp() {
  Mat4 J;
  J << 0, 0, -1, 0,
       0, 0, 0, -1,
       1, 0, 0, 0,
       0, 1, 0, 0;
  return J;
}

Mat4 J1_qqpp() {
  Mat4 J;
  J << 0, -1, 0, 0,
       1, 0, 0, 0,
       0, 0, 0, 1,
       0, 0, -1, 0;
  return J;
}

Mat4 J2_qqpp() {
  Mat4 J;
  J << 0, 0, 0, -1,
       0, 0, 1, 0,
       0, -1, 0, 0,
       1, 0, 0, 0;
  return J;
}

Mat4 state_to_qqpp() {
  Mat4 P = Mat4::Zero();
  P(0, 0) = 1; // q₁
  P(1, 2) = 1; // q₂
  P(2, 1) = 1; // p₁
  P(3, 3) = 1; // p₂
  return P;
}

Mat4 J0() { return state_to_qqpp().transpose() * J0_qqpp() * state_to_qqpp(); }
Mat4 J1() { return state_to_qqpp().transpose() * J1_qqpp() * state_to_qqpp(); }
Mat4 J2() { return state_to_qqpp().transpose() * J2_qqpp() * state_to_qqpp(); }

double omega0(const Vec4& u, const Vec4& v) { return u.dot(J0() * v); }

double lambda0(const Vec4& z, const Vec4& v) {
  return 0.5 * (z[1] * v[0] - z[0] * v[1] + z[3] * v[2] - z[2] * v[3]);
}

Eigen::Vector4d to_complex_coords(const Vec4& s) { return {s[1], s[0], s[3], s[2]}; }
Vec4 from_complex_coords(const Eigen::Vector4d& c) { return {c[1], c[0], c[3], c[2]}; }

Frame salomao_frame(const ConvexBody& body, const Vec4& z) {
  Frame f;
  f.X0 = body.gradient(z).normalized();
  f.X1 = J2() * f.X0;
  f.X2 = J1() * f.X0;
  f.X3 = -(J0() * f.X0);
  return f;
}

Vec4 hamiltonian_rhs(const ConvexBody& body, const Vec4& z, double tol) {
  const double nu = body.gauge(z);
  if (std::abs(nu - 1) > tol)
    throw ConstraintViolation("state off the energy level, |nu - 1| = " + std::to_string(std::abs(nu - 1)));
  return -(J0() * body.gradient(z));
}

Eigen::Matrix2d salomao_matrix(const ConvexBody& body, const Vec4& z) {
  const Frame f = salomao_frame(body, z);
  const Mat4 H = body.hessian(z);
  Eigen::Matrix2d M;
  M << f.X1.dot(H * f.X1), f.X1.dot(H * f.X2), f.X2.dot(H * f.X1), f.X2.dot(H * f.X2);
  M += f.X3.dot(H * f.X3) * Eigen::Matrix2d::Identity();
  return M;
}

double linearized_angle_rate(const ConvexBody& body, const Vec4& z, const Eigen::Vector2d& a) {
  return a.dot(salomao_matrix(body, z) * a) / a.squaredNorm();
}

flow::Trajectory<4> reeb_flow(const ConvexBody& body, const Vec4& z0, double T,
                              const flow::IntegratorOptions& opt) {
  // RK stages leave ∂C slightly; X_H is evaluated without the level check there
  auto rhs = [&body](double, const flow::State<4>& z) { return Vec4(-(J0() * body.gradient(z))); };
  auto proj = [&body](flow::State<4>& z) { z = body.boundary_point(z); };
  hamiltonian_rhs(body, z0);
  return flow::integrate<4>(rhs, 0.0, z0, T, opt, proj);
}

flow::Trajectory<7> evolve_linearized(const ConvexBody& body, const Vec4& z0, const Eigen::Vector2d& alpha0,
                                      double T, const flow::IntegratorOptions& opt) {
  hamiltonian_rhs(body, z0);
  auto rhs = [&body](double, const LinState& s) {
    const Vec4 z = s.head<4>();
    const Eigen::Vector2d a = s.segment<2>(4);
    const Eigen::Matrix2d M = salomao_matrix(body, z);
    const Eigen::Vector2d Ma = M * a;
    LinState d;
    d.head<4>() = -(J0() * body.gradient(z));
    d[4] = -Ma[1];
    d[5] = Ma[0];
    d[6] = a.dot(Ma) / a.squaredNorm();
    return d;
  };
  // the angle is 0-homogeneous in α, so α may be renormalized freely
  auto proj = [&body](LinState& s) {
    s.head<4>() = body.boundary_point(s.head<4>());
    s.segment<2>(4).normalize();
  };
  LinState s0;
  s0 << z0, alpha0, std::atan2(alpha0[1], alpha0[0]);
  return flow::integrate<7>(rhs, 0.0, s0, T, opt, proj);
}

} // namespace reeb::convex
