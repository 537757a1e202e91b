#include "reeb/lift/s3.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "reeb/util/errors.hpp"

namespace reeb::lift {

using geometry::RevolutionMetric;
using geometry::UnitTangent;

Quaternion qmul(const Quaternion& a, const Quaternion& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quaternion qconj(const Quaternion& a) { return {a[0], -a[1], -a[2], -a[3]}; }

Quaternion qinv(const Quaternion& a) { return qconj(a) / a.squaredNorm(); }

Quaternion normalized(const Quaternion& a) { return a / a.norm(); }

Quaternion pure(const Eigen::Vector3d& p) { return {0.0, p[0], p[1], p[2]}; }

Eigen::Vector3d imag(const Quaternion& q) { return q.tail<3>(); }

Eigen::Matrix3d rotation_matrix(const Quaternion& q0) {
  const Quaternion q = normalized(q0);
  const double a = q[0], b = q[1], c = q[2], d = q[3];
  Eigen::Matrix3d R;
  R << a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c),
      2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b),
      2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d;
  return R;
}

Quaternion quaternion_from_rotation(const Eigen::Matrix3d& R) {
  // Shepperd: pick the largest diagonal combination for stability
  const double tr = R.trace();
  Quaternion q;
  if (tr >= R(0, 0) && tr >= R(1, 1) && tr >= R(2, 2)) {
    const double s = std::sqrt(1 + tr) * 2;
    q << 0.25 * s, (R(2, 1) - R(1, 2)) / s, (R(0, 2) - R(2, 0)) / s, (R(1, 0) - R(0, 1)) / s;
  } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
    const double s = std::sqrt(1 + R(0, 0) - R(1, 1) - R(2, 2)) * 2;
    q << (R(2, 1) - R(1, 2)) / s, 0.25 * s, (R(0, 1) + R(1, 0)) / s, (R(0, 2) + R(2, 0)) / s;
  } else if (R(1, 1) >= R(2, 2)) {
    const double s = std::sqrt(1 + R(1, 1) - R(0, 0) - R(2, 2)) * 2;
    q << (R(0, 2) - R(2, 0)) / s, (R(0, 1) + R(1, 0)) / s, 0.25 * s, (R(1, 2) + R(2, 1)) / s;
  } else {
    const double s = std::sqrt(1 + R(2, 2) - R(0, 0) - R(1, 1)) * 2;
    q << (R(1, 0) - R(0, 1)) / s, (R(0, 2) + R(2, 0)) / s, (R(1, 2) + R(2, 1)) / s, 0.25 * s;
  }
  if (q[0] < 0) q = -q;
  return normalized(q);
}

double lambda0(const Quaternion& Z, const Eigen::Vector4d& d) {
  return 0.5 * (Z[0] * d[1] - Z[1] * d[0] + Z[2] * d[3] - Z[3] * d[2]);
}

Eigen::Vector4d times_i(const Eigen::Vector4d& a) { return {-a[1], a[0], -a[3], a[2]}; }

Eigen::Vector4d reeb_lambda0(const Quaternion& Z) { return 2.0 * times_i(Z); }

std::pair<Eigen::Vector4d, Eigen::Vector4d> contact_basis(const Quaternion& Z) {
  // (−w̄, z̄) and i(−w̄, z̄)
  Eigen::Vector4d e1(-Z[2], Z[3], Z[0], -Z[1]);
  return {e1, times_i(e1)};
}

namespace {
const Quaternion kJ(0, 0, 1, 0);
const Quaternion kK(0, 0, 0, 1);
} // namespace

UnitTangent double_cover_round(const Quaternion& Z) {
  const Quaternion Zi = qinv(Z);
  return {imag(qmul(qmul(Zi, kJ), Z)), -imag(qmul(qmul(Zi, kK), Z))};
}

Quaternion double_cover_round_inverse(const UnitTangent& x) {
  // Z⁻¹ (·) Z = R_{Z̄}: j ↦ q, k ↦ −v, i ↦ q × (−v)
  const Eigen::Vector3d q = x.p.normalized();
  Eigen::Vector3d v = x.v - x.v.dot(q) * q;
  v.normalize();
  Eigen::Matrix3d R;
  R.col(0) = q.cross(-v);
  R.col(1) = q;
  R.col(2) = -v;
  return qconj(quaternion_from_rotation(R));
}

double round_liouville_pushforward(const Quaternion& Z, const Eigen::Vector4d& zeta, double h) {
  const UnitTangent x = double_cover_round(Z);
  const Eigen::Vector3d dq =
      (double_cover_round(Z + h * zeta).p - double_cover_round(Z - h * zeta).p) / (2 * h);
  return x.v.dot(dq);
}

double pullback_factor_round(const Quaternion& Z, const Eigen::Vector4d& zeta, double h) {
  return round_liouville_pushforward(Z, zeta, h) - 4.0 * lambda0(Z, zeta);
}

namespace {

std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& q) {
  Eigen::Vector3d a = std::abs(q.x()) < 0.6 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d t1 = (a - a.dot(q) * q).normalized();
  return {t1, q.cross(t1)};
}

} // namespace

UnitTangent round_to_metric(const RevolutionMetric& m, const UnitTangent& x) {
  const Eigen::Vector3d D(1.0, 1.0, m.c());
  const Eigen::Vector3d q = x.p;
  auto [t1, t2] = tangent_basis(q);
  const Eigen::Vector3d Dt1 = D.cwiseProduct(t1), Dt2 = D.cwiseProduct(t2);
  Eigen::Matrix2d G;
  G << Dt1.dot(Dt1), Dt1.dot(Dt2), Dt2.dot(Dt1), Dt2.dot(Dt2);
  const Eigen::Vector2d r(x.v.dot(t1), x.v.dot(t2));
  const Eigen::Vector2d cf = G.ldlt().solve(r);
  const Eigen::Vector3d V = cf[0] * Dt1 + cf[1] * Dt2;
  return {D.cwiseProduct(q), V.normalized()};
}

UnitTangent metric_to_round(const RevolutionMetric& m, const UnitTangent& x) {
  const Eigen::Vector3d D(1.0, 1.0, m.c());
  const Eigen::Vector3d q = x.p.cwiseQuotient(D).normalized();
  Eigen::Vector3d v = D.cwiseProduct(x.v);
  v -= v.dot(q) * q;
  return {q, v.normalized()};
}

UnitTangent double_cover(const RevolutionMetric& m, const Quaternion& Z) {
  return round_to_metric(m, double_cover_round(Z));
}

Quaternion double_cover_inverse(const RevolutionMetric& m, const UnitTangent& x) {
  return double_cover_round_inverse(metric_to_round(m, x));
}

Quaternion lift_near(const RevolutionMetric& m, const UnitTangent& x, const Quaternion& reference,
                     double* jump) {
  Quaternion Z = double_cover_inverse(m, x);
  if ((Z - reference).norm() > (Z + reference).norm()) Z = -Z;
  if (jump) *jump = (Z - reference).norm();
  return Z;
}

Quaternion LiftedPath::at(double s) const {
  if (t.size() == 1) return Z.front();
  const bool fw = t.back() >= t.front();
  std::size_t i;
  if (fw) {
    auto it = std::upper_bound(t.begin(), t.end(), s);
    i = it == t.begin() ? 0 : std::size_t(it - t.begin()) - 1;
  } else {
    auto it = std::upper_bound(t.begin(), t.end(), s, [](double a, double b) { return a > b; });
    i = it == t.begin() ? 0 : std::size_t(it - t.begin()) - 1;
  }
  i = std::min(i, t.size() - 2);
  const double u = (s - t[i]) / (t[i + 1] - t[i]);
  return normalized((1 - u) * Z[i] + u * Z[i + 1]);
}

LiftedPath lift_path(const RevolutionMetric& m, const flow::Trajectory<6>& down, const Quaternion& Z0,
                     const LiftOptions& opt) {
  LiftedPath out;
  const UnitTangent x0 = UnitTangent::from_state(down.y.front());
  const UnitTangent d0 = double_cover(m, Z0);
  const double gap0 = std::max((d0.p - x0.p).norm(), (d0.v - x0.v).norm());
  if (gap0 > 1e-6)
    throw PreconditionError("initial lift does not cover the trajectory start (gap " +
                            std::to_string(gap0) + ")");
  Quaternion prev = normalized(Z0);
  auto push = [&](double t, flow::State<6> s) {
    geometry::project_state(m, s);
    const UnitTangent x = UnitTangent::from_state(s);
    double jump = 0;
    const Quaternion Z = lift_near(m, x, prev, &jump);
    if (!out.Z.empty() && jump > opt.max_jump)
      throw LiftDiscontinuity("lift jumped by " + std::to_string(jump) + " at t=" + std::to_string(t) +
                              "; use a smaller max_dt");
    const UnitTangent back = double_cover(m, Z);
    out.max_mismatch = std::max({out.max_mismatch, (back.p - x.p).norm(), (back.v - x.v).norm()});
    if (!out.Z.empty()) out.max_step = std::max(out.max_step, jump);
    out.t.push_back(t);
    out.Z.push_back(Z);
    prev = Z;
  };
  out.t.reserve(down.size());
  out.Z.reserve(down.size());
  out.Z.push_back(prev);
  out.t.push_back(down.t.front());
  for (std::size_t i = 0; i + 1 < down.size(); ++i) {
    const double a = down.t[i], b = down.t[i + 1];
    const int sub = std::max(1, int(std::ceil(std::abs(b - a) / opt.max_dt)));
    for (int k = 1; k <= sub; ++k) {
      const double s = a + (b - a) * k / sub;
      push(s, k == sub ? down.y[i + 1] : down.hermite(i, s));
    }
  }
  if (out.max_mismatch > opt.match_tol)
    throw LiftDiscontinuity("lift mismatch " + std::to_string(out.max_mismatch) + " exceeds tolerance");
  return out;
}

double frame_angle_rate(const RevolutionMetric& m, const UnitTangent& x, double theta) {
  return geometry::frame_angle_rate(m.curvature(x.p), theta);
}

void write_lifted_csv(std::ostream& os, const LiftedPath& path) {
  os << "t,x,y,u,v\n";
  os.precision(17);
  for (std::size_t i = 0; i < path.t.size(); ++i)
    os << path.t[i] << ',' << path.Z[i][0] << ',' << path.Z[i][1] << ',' << path.Z[i][2] << ','
       << path.Z[i][3] << '\n';
}

} // namespace reeb::lift
