#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "reeb/geometry/geodesic.hpp"
#include "reeb/lift/s3.hpp"
#include "reeb/util/errors.hpp"
#include "reeb/util/sampling.hpp"

using namespace reeb;
using namespace reeb::lift;
using geometry::RevolutionMetric;
using geometry::UnitTangent;
using std::numbers::pi;

namespace {

using C = std::complex<double>;
using M2 = Eigen::Matrix<C, 2, 2>;

M2 su2(const Quaternion& Z) {
  const C z(Z[0], Z[1]), w(Z[2], Z[3]);
  M2 m;
  m << z, w, -std::conj(w), std::conj(z);
  return m;
}

// D₀ by explicit 2x2 complex matrices; trace-free part read as (y, u, v).
UnitTangent d0_matrix(const Quaternion& Z) {
  M2 j, k;
  j << 0, 1, -1, 0;
  k << 0, C(0, 1), C(0, 1), 0;
  const M2 Zi = su2(Z).inverse();
  const M2 P = Zi * j * su2(Z), V = -(Zi * k * su2(Z));
  auto read = [](const M2& m) { return Eigen::Vector3d(m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag()); };
  return {read(P), read(V)};
}

Quaternion random_unit(const util::CounterRng& rng, std::uint64_t i) {
  return util::sphere3_from_unit_cube(rng.uniform(3 * i), rng.uniform(3 * i + 1), rng.uniform(3 * i + 2));
}

Eigen::Vector4d random_tangent(const util::CounterRng& rng, std::uint64_t i, const Quaternion& Z) {
  Eigen::Vector4d a(rng.uniform(10 * i) - 0.5, rng.uniform(10 * i + 1) - 0.5, rng.uniform(10 * i + 2) - 0.5,
                    rng.uniform(10 * i + 3) - 0.5);
  return a - a.dot(Z) * Z;
}

} // namespace

TEST_CASE("quaternion algebra matches SU(2)") {
  util::CounterRng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Quaternion a = random_unit(rng, 2 * i), b = random_unit(rng, 2 * i + 1);
    const M2 prod = su2(a) * su2(b);
    CHECK((su2(qmul(a, b)) - prod).norm() < 1e-13);
  }
}

TEST_CASE("double cover of the identity") {
  auto x = double_cover_round(Quaternion(1, 0, 0, 0));
  CHECK((x.p - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);
  CHECK((x.v - Eigen::Vector3d(0, 0, -1)).norm() < 1e-15);
  auto y = d0_matrix(Quaternion(1, 0, 0, 0));
  CHECK((y.p - x.p).norm() < 1e-15);
  CHECK((y.v - x.v).norm() < 1e-15);
}

TEST_CASE("double cover properties") {
  util::CounterRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Quaternion Z = random_unit(rng, i);
    const auto x = double_cover_round(Z), xm = double_cover_round(-Z), o = d0_matrix(Z);
    CHECK((x.p - xm.p).norm() < 1e-14);
    CHECK((x.v - xm.v).norm() < 1e-14);
    CHECK((x.p - o.p).norm() < 1e-12);
    CHECK((x.v - o.v).norm() < 1e-12);
    CHECK(std::abs(x.p.norm() - 1) < 1e-12);
    CHECK(std::abs(x.v.norm() - 1) < 1e-12);
    CHECK(std::abs(x.p.dot(x.v)) < 1e-12);
    const Quaternion W = double_cover_round_inverse(x);
    CHECK(std::min((W - Z).norm(), (W + Z).norm()) < 1e-12);
  }
}

TEST_CASE("factor four") {
  util::CounterRng rng(5);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const Quaternion Z = random_unit(rng, i);
    worst = std::max(worst, std::abs(pullback_factor_round(Z, random_tangent(rng, i, Z))));
  }
  CHECK(worst < 1e-6);
  for (int i = 0; i < 50; ++i) {
    const Quaternion Z = random_unit(rng, 5000 + i);
    const Eigen::Vector4d R = reeb_lambda0(Z) / 4.0; // Reeb field of 4λ₀
    CHECK(std::abs(round_liouville_pushforward(Z, R) - 1) < 1e-6);
    auto [e1, e2] = contact_basis(Z);
    CHECK(std::abs(lambda0(Z, e1)) < 1e-15);
    CHECK(std::abs(round_liouville_pushforward(Z, e1)) < 1e-6);
    CHECK(std::abs(round_liouville_pushforward(Z, e2)) < 1e-6);
    // dλ₀(e₁, e₂) = dx∧dy + du∧dv
    const double dl = e1[0] * e2[1] - e1[1] * e2[0] + e1[2] * e2[3] - e1[3] * e2[2];
    CHECK(dl == doctest::Approx(1.0));
    CHECK(std::abs(e1.dot(Z)) < 1e-15);
    CHECK(std::abs(e2.dot(Z)) < 1e-15);
  }
}

TEST_CASE("legendre chain") {
  RevolutionMetric round(1.0), m(0.95);
  util::CounterRng rng(9);
  for (int i = 0; i < 100; ++i) {
    const UnitTangent x = double_cover_round(random_unit(rng, i));
    const UnitTangent y = round_to_metric(round, x);
    CHECK((y.p - x.p).norm() < 1e-14);
    CHECK((y.v - x.v).norm() < 1e-14);
    const UnitTangent e = round_to_metric(m, x);
    CHECK(std::abs(m.constraint(e.p)) < 1e-14);
    CHECK(std::abs(e.v.dot(m.constraint_gradient(e.p))) < 1e-13);
    CHECK(std::abs(e.v.norm() - 1) < 1e-14);
    const UnitTangent back = metric_to_round(m, e);
    CHECK((back.p - x.p).norm() < 1e-13);
    CHECK((back.v - x.v).norm() < 1e-13);
  }
}

TEST_CASE("equator lifts") {
  RevolutionMetric round(1.0);
  UnitTangent eq{{1, 0, 0}, {0, 1, 0}};
  const Quaternion Z0 = double_cover_inverse(round, eq);
  auto once = lift_path(round, geometry::geodesic_flow(round, eq, 2 * pi), Z0);
  CHECK((once.Z.back() + Z0).norm() < 1e-8);
  auto twice = lift_path(round, geometry::geodesic_flow(round, eq, 4 * pi), Z0);
  CHECK(twice.closure_gap() < 1e-8);
  // a Hopf fibre: the lift moves along the Reeb field of λ₀ at a quarter speed
  for (std::size_t i = 1; i + 1 < twice.Z.size(); i += 17) {
    const Eigen::Vector4d vel = (twice.Z[i + 1] - twice.Z[i - 1]) / (twice.t[i + 1] - twice.t[i - 1]);
    CHECK((vel - reeb_lambda0(twice.Z[i]) / 4).norm() < 1e-3);
  }

  RevolutionMetric m(0.95);
  auto lift95 = lift_path(m, geometry::geodesic_flow(m, eq, 2 * m.equator_length()),
                          double_cover_inverse(m, eq));
  CHECK(lift95.closure_gap() < 1e-6);
  CHECK(lift95.max_mismatch < 1e-7);
}

TEST_CASE("lifted flow is positively transverse to the contact planes") {
  RevolutionMetric m(0.9);
  auto x0 = geometry::unit_tangent(m, 0.4, 0.2, 1.0);
  auto path = lift_path(m, geometry::geodesic_flow(m, x0, 20.0), double_cover_inverse(m, x0));
  for (std::size_t i = 1; i + 1 < path.Z.size(); i += 7) {
    const Eigen::Vector4d vel = (path.Z[i + 1] - path.Z[i - 1]) / (path.t[i + 1] - path.t[i - 1]);
    CHECK(lambda0(path.Z[i], vel) > 0.1);
  }
}

TEST_CASE("deck equivariance") {
  RevolutionMetric m(0.95);
  auto x0 = geometry::unit_tangent(m, -0.3, 1.0, 2.0);
  auto down = geometry::geodesic_flow(m, x0, 30.0);
  const Quaternion Z0 = double_cover_inverse(m, x0);
  auto a = lift_path(m, down, Z0), b = lift_path(m, down, -Z0);
  double dev = 0;
  for (std::size_t i = 0; i < a.Z.size(); ++i) dev = std::max(dev, (a.Z[i] + b.Z[i]).norm());
  CHECK(dev < 1e-8);
}

TEST_CASE("discontinuity monitor") {
  RevolutionMetric m(1.0);
  UnitTangent eq{{1, 0, 0}, {0, 1, 0}};
  // two nodes three time units apart: the fibre turns by 1.5 rad between samples
  flow::Trajectory<6> sparse;
  for (double t : {0.0, 3.0}) {
    UnitTangent x{{std::cos(t), std::sin(t), 0}, {-std::sin(t), std::cos(t), 0}};
    sparse.push(t, x.state(), geometry::geodesic_rhs(m, x.state()));
  }
  LiftOptions coarse;
  coarse.max_dt = 3.0;
  CHECK_THROWS_AS(lift_path(m, sparse, double_cover_inverse(m, eq), coarse), LiftDiscontinuity);
  LiftOptions fine;
  CHECK_NOTHROW(lift_path(m, sparse, double_cover_inverse(m, eq), fine));
  UnitTangent other{{0, 1, 0}, {1, 0, 0}};
  CHECK_THROWS_AS(lift_path(m, geometry::geodesic_flow(m, eq, 1.0), double_cover_inverse(m, other)),
                  PreconditionError);
}

TEST_CASE("frame angle in the geodesic frame") {
  RevolutionMetric round(1.0);
  auto x0 = geometry::unit_tangent(round, 0.2, 0.1, 0.5);
  auto tr = geometry::geodesic_jacobi_flow(round, x0, 0, 1, 0.3, 25.0);
  CHECK(std::abs(tr.y.back()[8] - 0.3 - 25.0) < 1e-6);

  // restart additivity
  RevolutionMetric m(0.9);
  auto full = geometry::geodesic_jacobi_flow(m, x0, 0, 1, 0.0, 20.0);
  auto first = geometry::geodesic_jacobi_flow(m, x0, 0, 1, 0.0, 8.0);
  auto s8 = first.y.back();
  auto second = geometry::geodesic_jacobi_flow(m, UnitTangent{s8.head<3>(), s8.segment<3>(3)}, s8[6], s8[7], s8[8], 12.0);
  CHECK(std::abs(full.y.back()[8] - second.y.back()[8]) < 1e-8);

  util::CounterRng rng(21);
  for (int i = 0; i < 100; ++i) {
    auto x = geometry::unit_tangent(m, pi * (rng.uniform(3 * i) - 0.5), 2 * pi * rng.uniform(3 * i + 1),
                                    2 * pi * rng.uniform(3 * i + 2));
    const double r = frame_angle_rate(m, x, 2 * pi * rng.uniform(1000 + i));
    CHECK(r >= std::min(1.0, m.k_min()) - 1e-6);
    CHECK(r <= std::max(1.0, m.k_max()) + 1e-6);
  }
}
