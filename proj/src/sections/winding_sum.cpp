#include "reeb/sections/winding_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "reeb/flow/winding.hpp"
#include "reeb/util/errors.hpp"

namespace reeb::sections {

namespace {
constexpr double two_pi = 2 * std::numbers::pi;
}

PageSteps::PageSteps(const S3Flow& flow, const DiskPage& page, const Eigen::Vector4d& start, int m)
    : page_(&page), m_(m) {
  if (m < 1) throw PreconditionError("need at least one step");
  if (std::abs(page.section_function(start)) > 1e-9 || !page.on_page_side(start))
    throw PreconditionError("start point is not on the page");
  double span = 4.0 * m;
  for (;;) {
    traj_ = flow.orbit(start, 0.0, 0.0, span);
    hits_ = {0.0};
    for (const auto& e : page_crossings(traj_, page).events)
      if (e.time > 1e-9) hits_.push_back(e.time);
    if (int(hits_.size()) > m) break;
    if (span > 1e4) throw NotASectionError("too few page returns");
    span *= 2;
  }
  hits_.resize(std::size_t(m) + 1);
  flow::AngleUnwrapper uw;
  for (std::size_t i = 0; i < traj_.size(); ++i) {
    if (traj_.t[i] > hits_.back() + 1.0) break;
    if (!uw.push(page.coords(traj_.y[i].head<4>()).second)) throw ResolutionError("page angle jumps between integrator nodes");
    node_t_.push_back(traj_.t[i]);
    node_angle_.push_back(uw.angle());
  }
  // the start lies on the page, so its angle is 0 mod 2π; shift to exactly 0
  const double a0 = node_angle_.front();
  const double shift = std::round(a0 / two_pi) * two_pi;
  for (double& a : node_angle_) a -= shift;
}

double PageSteps::angle_at(double t, std::size_t node) const {
  const auto wc = page_->coords(traj_.at(t).head<4>()).second;
  const auto wn = page_->coords(traj_.y[node].head<4>()).second;
  return node_angle_[node] + flow::wrap_pi(std::arg(wc) - std::arg(wn));
}

Complex PageSteps::z(int i) const {
  const int j = ((i % m_) + m_) % m_;
  return page_->chart(traj_.at(hits_[std::size_t(j)]).head<4>());
}

Complex PageSteps::k(int i, double s) const {
  const int j = ((i % m_) + m_) % m_;
  if (s <= 0) return page_->chart(traj_.at(hits_[std::size_t(j)]).head<4>());
  if (s >= 1) return page_->chart(traj_.at(hits_[std::size_t(j) + 1]).head<4>());
  const double target = two_pi * (j + s);
  // bracket on the nodes, then bisect
  auto it = std::lower_bound(node_angle_.begin(), node_angle_.end(), target);
  const std::size_t hi = std::size_t(std::clamp<long>(it - node_angle_.begin(), 1, long(node_angle_.size()) - 1));
  const std::size_t lo = hi - 1;
  double a = node_t_[lo], b = node_t_[hi];
  for (int it2 = 0; it2 < 60 && b - a > 1e-13; ++it2) {
    const double mid = 0.5 * (a + b);
    if (angle_at(mid, lo) < target) a = mid;
    else b = mid;
  }
  return page_->chart(traj_.at(0.5 * (a + b)).head<4>());
}

Complex PageSteps::k_hat(int i, double s, double delta) const {
  const int j = ((i % m_) + m_) % m_;
  if (s <= 1 - delta) return k(j, s / (1 - delta));
  const double u = (s - 1 + delta) / delta;
  if (j < m_ - 1) return z(j + 1);
  // chord from z_m back to z₀
  const Complex zm = k(j, 1.0), z0 = z(0);
  return zm + u * (z0 - zm);
}

Loop PageSteps::loop(int repeat, double dt, int chord_points) const {
  Loop one;
  const double T = hits_.back();
  const int n = std::max(8, int(std::ceil(T / dt)));
  for (int i = 0; i <= n; ++i) one.push_back(traj_.at(T * i / n).head<4>().normalized());
  const Complex zm = page_->chart(one.back()), z0 = page_->chart(one.front());
  for (int k = 1; k < chord_points; ++k) one.push_back(page_->embed(zm + (z0 - zm) * (double(k) / chord_points)));
  Loop out;
  for (int r = 0; r < repeat; ++r) out.insert(out.end(), one.begin(), one.end());
  return out;
}

WindingSumResult winding_sum_identity(const S3Flow& flow, const DiskPage& page, const Eigen::Vector4d& p, int m_p,
                                      const Eigen::Vector4d& q, int m_q, double delta) {
  const PageSteps P(flow, page, p, m_p), Q(flow, page, q, m_q);
  WindingSumResult r;
  r.lcm = std::lcm(m_p, m_q);
  r.r_p = r.lcm / m_p;
  r.r_q = r.lcm / m_q;
  const Loop lp = P.loop(r.r_p), lq = Q.loop(r.r_q);
  const auto g = linking_gauss(lp, lq);
  r.gauss = g.value;
  r.gauss_gap = g.gap;
  r.min_distance = g.min_distance;
  double sum = 0;
  for (int i = 0; i < r.lcm; ++i)
    for (int j = 0; j < r.lcm; ++j)
      sum += flow::winding([&](double s) { return P.k_hat(i, s, delta) - Q.k_hat(j, s, delta); }, 0.0, 1.0, 64);
  r.winding_sum = sum;
  return r;
}

} // namespace reeb::sections
