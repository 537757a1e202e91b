#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reeb/convex/body.hpp"
#include "reeb/convex/reeb_flow.hpp"
#include "reeb/flow/winding.hpp"
#include "reeb/util/sampling.hpp"

using namespace reeb;
using namespace reeb::convex;
using std::numbers::pi;

namespace {

PerturbedBall sample_perturbed() {
  return PerturbedBall({{0.05, {4, 0, 0, 0}}, {-0.05, {0, 4, 0, 0}}});
}

Vec4 random_boundary_point(const ConvexBody& b, const util::CounterRng& rng, std::uint64_t i) {
  return b.boundary_point(util::sphere3_from_unit_cube(rng.uniform(3 * i), rng.uniform(3 * i + 1), rng.uniform(3 * i + 2)));
}

// Hessian of ν² for the perturbed ball by nested central differences of the value.
Mat4 fd_hessian(const ConvexBody& b, const Vec4& x) {
  const double h = 1e-4;
  Mat4 H;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Vec4 ei = h * Vec4::Unit(i), ej = h * Vec4::Unit(j);
      H(i, j) = (b.hamiltonian(x + ei + ej) - b.hamiltonian(x + ei - ej) - b.hamiltonian(x - ei + ej) +
                 b.hamiltonian(x - ei - ej)) / (4 * h * h);
    }
  return H;
}

} // namespace

TEST_CASE("J matrices") {
  const Mat4 I = Mat4::Identity();
  for (const Mat4& J : {J0_qqpp(), J1_qqpp(), J2_qqpp(), J0(), J1(), J2()}) {
    CHECK((J * J + I).norm() == 0.0);
    CHECK((J.transpose() + J).norm() == 0.0);
  }
  CHECK((J0_qqpp() * J1_qqpp() - J2_qqpp()).norm() == 0.0);
  CHECK((J1_qqpp() * J2_qqpp() - J0_qqpp()).norm() == 0.0);
  CHECK((J2_qqpp() * J0_qqpp() - J1_qqpp()).norm() == 0.0);
  // ω₀ = Σ dpᵢ∧dqᵢ in the (q₁,q₂,p₁,p₂) basis, so that dλ₀ = ω₀ for λ₀ = ½(p dq − q dp)
  util::CounterRng rng(1);
  for (int k = 0; k < 20; ++k) {
    Vec4 u, v;
    for (int i = 0; i < 4; ++i) { u[i] = rng.uniform(8 * k + i) - 0.5; v[i] = rng.uniform(8 * k + 4 + i) - 0.5; }
    const Vec4 up = state_to_qqpp() * u, vp = state_to_qqpp() * v;
    const double expect = up[2] * vp[0] - up[0] * vp[2] + up[3] * vp[1] - up[1] * vp[3];
    CHECK(up.dot(J0_qqpp() * vp) == doctest::Approx(expect));
    CHECK(omega0(u, v) == doctest::Approx(expect));
  }
}

TEST_CASE("gauge invariants") {
  Ellipsoid e(1.0, 1.5);
  auto pb = sample_perturbed();
  util::CounterRng rng(2);
  for (const ConvexBody* b : {static_cast<const ConvexBody*>(&e), static_cast<const ConvexBody*>(&pb)}) {
    for (int i = 0; i < 100; ++i) {
      const Vec4 x = util::sphere3_from_unit_cube(rng.uniform(3 * i), rng.uniform(3 * i + 1), rng.uniform(3 * i + 2)) * 1.3;
      CHECK(b->gauge(3.7 * x) == doctest::Approx(3.7 * b->gauge(x)).epsilon(1e-10));
      const Jet j = b->hamiltonian_jet(x);
      CHECK(std::abs(j.g.dot(x) - 2 * j.v) < 1e-9);
      CHECK((j.H - j.H.transpose()).norm() < 1e-12);
      CHECK(min_eigenvalue(j.H) > 0);
      CHECK((j.H - fd_hessian(*b, x)).norm() < 1e-5);
    }
  }
}

TEST_CASE("kmin") {
  CHECK(kmin(*unit_ball()).value == 2.0);
  CHECK(kmin(Ellipsoid(1, 1.5)).value == doctest::Approx(2 / 1.5).epsilon(1e-14));
  auto pb = sample_perturbed();
  auto r = kmin(pb);
  // brute force over 10⁵ pseudo-random directions
  util::CounterRng rng(99);
  double brute = 1e300;
  for (int i = 0; i < 100000; ++i) {
    const Vec4 d = util::sphere3_from_unit_cube(rng.uniform(3 * i), rng.uniform(3 * i + 1), rng.uniform(3 * i + 2));
    brute = std::min(brute, min_eigenvalue(pb.hessian(d)));
  }
  CHECK(r.value > 0);
  CHECK(r.value <= brute + 1e-12);
  CHECK(brute - r.value < 1e-4);
  CHECK(r.error_bound >= 0);
  CHECK_THROWS_AS(kmin(PerturbedBall({{0.9, {4, 0, 0, 0}}, {-0.9, {0, 0, 4, 0}}})), NotStrictlyConvexError);
}

TEST_CASE("hamiltonian flow") {
  auto ball = unit_ball();
  const Vec4 z0(1, 0, 0, 0);
  auto tr = reeb_flow(*ball, z0, pi);
  CHECK((tr.y.back() - z0).norm() < 1e-8);
  CHECK_THROWS_AS(hamiltonian_rhs(*ball, Vec4(2, 0, 0, 0)), ConstraintViolation);

  Ellipsoid e(1.0, 1.5);
  const Vec4 x0 = e.boundary_point(Vec4(0.3, 0.5, -0.2, 0.7));
  auto te = reeb_flow(e, x0, 100.0);
  double drift = 0;
  for (auto& s : te.y) drift = std::max(drift, std::abs(e.hamiltonian(s) - 1));
  CHECK(drift < 1e-8);
  // closed form: q₁ + i p₁ rotates with period π a₁, q₂ + i p₂ with period π a₂
  for (double t : {0.7, 3.0, 10.0}) {
    const auto s = te.at(t);
    const std::complex<double> u0(x0[0], x0[1]), v0(x0[2], x0[3]);
    const auto u = u0 * std::polar(1.0, -2 * t / 1.0), v = v0 * std::polar(1.0, -2 * t / 1.5);
    CHECK(std::abs(std::complex<double>(s[0], s[1]) - u) < 1e-6);
    CHECK(std::abs(std::complex<double>(s[2], s[3]) - v) < 1e-6);
  }
}

TEST_CASE("frame and reeb compatibility") {
  Ellipsoid e(1.0, 1.5);
  auto pb = sample_perturbed();
  util::CounterRng rng(4);
  for (const ConvexBody* b : {static_cast<const ConvexBody*>(&e), static_cast<const ConvexBody*>(&pb)}) {
    for (int i = 0; i < 1000; ++i) {
      const Vec4 z = random_boundary_point(*b, rng, i);
      const Frame f = salomao_frame(*b, z);
      Eigen::Matrix<double, 4, 3> X;
      X << f.X1, f.X2, f.X3;
      CHECK((X.transpose() * X - Eigen::Matrix3d::Identity()).norm() < 1e-10);
      const Vec4 XH = hamiltonian_rhs(*b, z);
      CHECK(std::abs(lambda0(z, XH) - 1) < 1e-8);
      CHECK(XH.normalized().dot(f.X3) > 1 - 1e-12);
      CHECK(std::abs(f.X1.dot(f.X0)) < 1e-12);
    }
  }
}

TEST_CASE("salomao bound") {
  Ellipsoid e(1.0, 1.5);
  auto pb = sample_perturbed();
  auto ball = unit_ball();
  util::CounterRng rng(8);
  for (const ConvexBody* b : {static_cast<const ConvexBody*>(ball.get()), static_cast<const ConvexBody*>(&e), static_cast<const ConvexBody*>(&pb)}) {
    const double km = kmin(*b).value;
    double worst = 1e300;
    for (int i = 0; i < 2000; ++i) {
      const Vec4 z = random_boundary_point(*b, rng, i);
      const double th = 2 * pi * rng.uniform(50000 + i);
      const double r = linearized_angle_rate(*b, z, {std::cos(th), std::sin(th)});
      worst = std::min(worst, r);
      CHECK(linearized_angle_rate(*b, z, {7 * std::cos(th), 7 * std::sin(th)}) == doctest::Approx(r).epsilon(1e-14));
    }
    CHECK(worst >= 2 * km - 1e-5);
  }
  const Vec4 z(0.1, 0.2, 0.3, 0.4);
  CHECK(linearized_angle_rate(*ball, z.normalized(), {0.3, -2}) == doctest::Approx(4.0));
}

TEST_CASE("linearized evolution") {
  auto ball = unit_ball();
  auto tr = evolve_linearized(*ball, Vec4(0, 1, 0, 0), {1, 0}, pi);
  CHECK(std::abs(tr.y.back()[6] - tr.y.front()[6] - 4 * pi) < 1e-6);

  Ellipsoid e(1.0, 1.5);
  const Vec4 z0 = e.boundary_point(Vec4(0.2, 0.9, -0.4, 0.1));
  // eigenvalues of M for E(1,1.5) lie in [2K_min, 2K_max]
  const double lo = 2 * (2 / 1.5), hi = 2 * 2.0;
  auto te = evolve_linearized(e, z0, {1, 0}, 10.0);
  const double gain = te.y.back()[6] - te.y.front()[6];
  CHECK(gain >= 10 * lo - 1e-6);
  CHECK(gain <= 10 * hi + 1e-6);

  // order preservation of the projectivized linear flow
  for (double phi : {0.3, 1.0, 2.5}) {
    auto tp = evolve_linearized(e, z0, {std::cos(phi), std::sin(phi)}, 10.0);
    const double d = tp.y.back()[6] - te.y.back()[6];
    CHECK(d > 0);
    CHECK(d < pi);
    auto bp = evolve_linearized(*ball, Vec4(0, 1, 0, 0), {std::cos(phi), std::sin(phi)}, 5.0);
    auto b0 = evolve_linearized(*ball, Vec4(0, 1, 0, 0), {1, 0}, 5.0);
    CHECK(std::abs(bp.y.back()[6] - b0.y.back()[6] - phi) < 1e-8);
  }
}

TEST_CASE("alpha system agrees with the variational equation") {
  // v̇ = −J₀ D²H v projected on (X₁, X₂) must rotate like the α system
  auto pb = sample_perturbed();
  const Vec4 z0 = pb.boundary_point(Vec4(0.5, -0.3, 0.2, 0.8));
  const Frame f0 = salomao_frame(pb, z0);
  auto rhs = [&pb](double, const flow::State<8>& s) {
    const Vec4 z = s.head<4>(), v = s.tail<4>();
    flow::State<8> d;
    d << -(J0() * pb.gradient(z)), -(J0() * pb.hessian(z) * v);
    return d;
  };
  flow::State<8> s0;
  s0 << z0, f0.X1;
  auto var = flow::integrate<8>(rhs, 0.0, s0, 6.0);
  auto lin = evolve_linearized(pb, z0, {1, 0}, 6.0);
  flow::AngleUnwrapper unwrap;
  for (double t = 0; t <= 6.0 + 1e-12; t += 0.01) {
    const auto s = var.at(t);
    const Frame f = salomao_frame(pb, s.head<4>());
    // components modulo X₃ and the normal direction
    Eigen::Matrix4d B;
    B << f.X0, f.X1, f.X2, f.X3;
    const Vec4 c = B.transpose() * s.tail<4>();
    unwrap.push({c[1], c[2]});
  }
  CHECK(std::abs(unwrap.total() - (lin.y.back()[6] - lin.y.front()[6])) < 1e-5);
}
