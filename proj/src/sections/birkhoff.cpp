#include "reeb/sections/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "reeb/flow/events.hpp"
#include "reeb/lift/s3.hpp"
#include "reeb/util/errors.hpp"
#include "reeb/util/parallel.hpp"

namespace reeb::sections {

namespace {
constexpr double pi = std::numbers::pi;

double pos_mod(double x, double L) {
  double r = std::fmod(x, L);
  if (r < 0) r += L;
  return r;
}
} // namespace

BirkhoffAnnulus::BirkhoffAnnulus(geometry::RevolutionMetric metric) : metric_(metric) {}

geometry::UnitTangent BirkhoffAnnulus::point(double s, double theta) const {
  geometry::UnitTangent x;
  x.p = Eigen::Vector3d(std::cos(s), std::sin(s), 0.0);
  x.v = std::cos(theta) * Eigen::Vector3d(-std::sin(s), std::cos(s), 0.0) + std::sin(theta) * Eigen::Vector3d::UnitZ();
  return x;
}

Eigen::Vector2d BirkhoffAnnulus::chart(const geometry::UnitTangent& x) const {
  const double s = pos_mod(std::atan2(x.p.y(), x.p.x()), 2 * pi);
  const Eigen::Vector3d cdot(-std::sin(s), std::cos(s), 0.0);
  return {s, std::atan2(x.v.z(), x.v.dot(cdot))};
}

Eigen::Vector4d BirkhoffAnnulus::lifted_point(double s, double theta) const {
  // continue the lift from s = 0 in small steps so that s ∈ [L, 2L) lands on the other sheet
  lift::Quaternion Z = lift::double_cover_inverse(metric_, point(0.0, theta));
  const int n = std::max(1, int(std::ceil(std::abs(s) / 0.05)));
  for (int k = 1; k <= n; ++k) Z = lift::lift_near(metric_, point(s * k / n, theta), Z);
  return Z;
}

Loop BirkhoffAnnulus::boundary_loop(bool reversed, int n) const {
  const double th = reversed ? pi : 0.0;
  lift::Quaternion Z = lift::double_cover_inverse(metric_, point(0.0, th));
  Loop l;
  const int sub = 8;
  l.push_back(Z);
  for (int k = 1; k < n; ++k) {
    // sub-steps keep the continuation on one sheet
    for (int j = 1; j <= sub; ++j)
      Z = lift::lift_near(metric_, point(2 * length() * (k - 1 + double(j) / sub) / n, th), Z);
    l.push_back(Z);
  }
  // γ̂_c is traversed along −ċ
  if (reversed) std::reverse(l.begin() + 1, l.end());
  return l;
}

namespace {

ReturnSample boundary_return(const BirkhoffAnnulus& a, double s, double theta, const ReturnOptions& opt,
                             double cap) {
  const auto& m = a.metric();
  const double L = a.length();
  const auto x0 = a.point(s, theta);
  auto tr = geometry::geodesic_jacobi_flow(m, x0, 0.0, 1.0, 0.0, cap, opt.integrator);
  auto rep = flow::detect_crossings(tr, [](double, const flow::State<9>& y) { return y[6]; },
                                    [](double, const flow::State<9>&) { return true; }, "jacobi");
  std::vector<double> zeros;
  for (const auto& e : rep.events)
    if (e.time > 1e-8) zeros.push_back(e.time);
  if (zeros.size() < 2) throw NotASectionError("fewer than two conjugate points within the time cap");
  ReturnSample r;
  r.s = s;
  r.theta = theta;
  r.tau = zeros[1];
  const double sgn = theta < pi / 2 ? 1.0 : -1.0;
  const double s1 = s + sgn * zeros[0], s2 = s + sgn * zeros[1];
  r.eta = pos_mod(s1 - s, L);
  r.nu = pos_mod(s2 - s1, L);
  r.delta_s = r.eta + r.nu;
  r.s1 = s + r.delta_s;
  r.theta1 = theta;
  const auto end = geometry::UnitTangent::from_state(tr.at(zeros[1]).head<6>());
  r.on_annulus_error = std::abs(end.p.z()) + std::abs(end.v.z());
  return r;
}

} // namespace

ReturnSample return_map(const BirkhoffAnnulus& a, double s, double theta, const ReturnOptions& opt) {
  const auto& m = a.metric();
  const double cap = opt.time_cap > 0 ? opt.time_cap
                                      : 10 * 2 * pi / std::sqrt(m.delta()) / m.normalization_scale();
  if (theta < 0 || theta > pi) throw PreconditionError("θ outside [0, π]");
  if (theta == 0 || theta == pi) return boundary_return(a, s, theta, opt, cap);
  const double L = a.length();
  // integrate in chunks until the second equator crossing is found
  double span = std::min(cap, 1.5 * L / std::sqrt(m.delta()));
  for (;;) {
    auto tr = geometry::geodesic_flow(m, a.point(s, theta), span, opt.integrator);
    auto rep = flow::detect_crossings(tr, [](double, const flow::State<6>& y) { return y[2]; },
                                      [](double, const flow::State<6>&) { return true; }, "equator");
    std::vector<flow::CrossingEvent<6>> ev;
    for (const auto& e : rep.events)
      if (e.time > 1e-8) ev.push_back(e);
    if (ev.size() >= 2) {
      const auto x1 = geometry::UnitTangent::from_state(ev[0].location);
      auto y2 = ev[1].location;
      geometry::project_state(m, y2);
      const auto x2 = geometry::UnitTangent::from_state(y2);
      const double psi1 = std::atan2(x1.p.y(), x1.p.x()), psi2 = std::atan2(x2.p.y(), x2.p.x());
      ReturnSample r;
      r.s = s;
      r.theta = theta;
      r.tau = ev[1].time;
      r.eta = pos_mod(psi1 - s, L);
      r.nu = pos_mod(psi2 - psi1, L);
      r.delta_s = r.eta + r.nu;
      r.s1 = s + r.delta_s;
      r.theta1 = a.chart(x2)[1];
      r.on_annulus_error = std::abs(x2.p.z()) + std::abs(pos_mod(psi2 - r.s1 + pi, 2 * pi) - pi);
      if (!(r.theta1 > 0 && r.theta1 < pi)) throw NotASectionError("return landed outside the annulus interior");
      return r;
    }
    if (span >= cap) throw NotASectionError("no return to the annulus within the time cap");
    span = std::min(2 * span, cap);
  }
}

std::vector<ReturnSample> return_grid(const BirkhoffAnnulus& a, int ns, int ntheta, const ReturnOptions& opt) {
  const std::size_t n = std::size_t(ns) * std::size_t(ntheta);
  return util::parallel_map<ReturnSample>(n, [&](std::size_t k) {
    const int i = int(k) / ntheta, j = int(k) % ntheta;
    return return_map(a, a.length() * i / ns, pi * (j + 0.5) / ntheta, opt);
  });
}

std::vector<double> canonical_lift_displacement(const BirkhoffAnnulus& a, const std::vector<ReturnSample>& samples) {
  if (a.metric().delta() <= 4.0 / 9.0) throw PreconditionError("canonical lift needs δ > 4/9");
  const double L = a.length();
  std::vector<double> out;
  for (const auto& r : samples) {
    // representative of s′ − s mod L inside (2L/3, 3L/2); at most two candidates
    const double base = pos_mod(r.s1 - r.s, L);
    std::vector<double> cands;
    for (int k = 0; k <= 2; ++k) {
      const double d = base + k * L;
      if (d > 2 * L / 3 && d < 1.5 * L) cands.push_back(d);
    }
    if (cands.empty()) throw ResolutionError("no displacement representative in (2L/3, 3L/2)");
    // with two candidates take the one continuous with η + ν
    double best = cands[0];
    for (double d : cands)
      if (std::abs(d - r.delta_s) < std::abs(best - r.delta_s)) best = d;
    out.push_back(best);
  }
  return out;
}

AnnulusTau tau_stats(const BirkhoffAnnulus& a, int ns, int ntheta, const ReturnOptions& opt) {
  auto mm = [](const std::vector<ReturnSample>& g) {
    double lo = 1e300, hi = -1e300;
    for (const auto& r : g) {
      lo = std::min(lo, r.tau);
      hi = std::max(hi, r.tau);
    }
    return std::pair{lo, hi};
  };
  auto fine = return_grid(a, ns, ntheta, opt);
  for (double th : {0.0, pi})
    for (int i = 0; i < ns; ++i) fine.push_back(return_map(a, a.length() * i / ns, th, opt));
  auto coarse = return_grid(a, std::max(1, ns / 2), std::max(1, ntheta / 2), opt);
  AnnulusTau t;
  std::tie(t.tau_min, t.tau_max) = mm(fine);
  const auto [cl, ch] = mm(coarse);
  t.refinement_gap = std::max(std::abs(cl - t.tau_min), std::abs(ch - t.tau_max));
  t.samples = fine.size();
  return t;
}

int annulus_intersection(const BirkhoffAnnulus& a, const Loop& beta) {
  const auto& m = a.metric();
  const std::size_t n = beta.size();
  std::vector<geometry::UnitTangent> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lift::double_cover(m, beta[i].normalized());
  int count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = xs[i];
    const auto& q = xs[(i + 1) % n];
    const double z0 = p.p.z(), z1 = q.p.z();
    if ((z0 < 0) == (z1 < 0)) continue;
    // linear interpolation of the vertical velocity at the crossing
    const double u = z0 / (z0 - z1);
    const double vz = (1 - u) * p.v.z() + u * q.v.z();
    if (vz <= 0) continue;
    count += z1 > z0 ? 1 : -1;
  }
  return count;
}

AnnulusIdentity annulus_disk_identity_check(const BirkhoffAnnulus& a, const Loop& beta, int boundary_points) {
  AnnulusIdentity r;
  const auto g1 = linking_gauss(beta, a.boundary_loop(false, boundary_points));
  const auto g2 = linking_gauss(beta, a.boundary_loop(true, boundary_points));
  r.link_gamma = g1.value;
  r.link_gamma_hat = g2.value;
  r.gauss_gap = std::max(g1.gap, g2.gap);
  r.intersection = annulus_intersection(a, beta);
  r.residual = r.link_gamma + r.link_gamma_hat - r.intersection;
  return r;
}

void write_return_csv(std::ostream& os, const std::vector<ReturnSample>& samples) {
  os << "s,theta,s1,theta1,tau,delta_s\n" << std::setprecision(12);
  for (const auto& r : samples)
    os << r.s << ',' << r.theta << ',' << r.s1 << ',' << r.theta1 << ',' << r.tau << ',' << r.delta_s << '\n';
}

} // namespace reeb::sections
