#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "reeb/util/errors.hpp"

namespace reeb::flow {

template <int N>
using State = Eigen::Matrix<double, N, 1>;

struct IntegratorOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  double max_step = 0.25;
  double min_step = 1e-13;
  std::size_t max_steps = 20'000'000;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// No-op projection hook.
struct NoProjection {
  template <class S>
  void operator()(S&) const {}
};

/// Samples of an integrated curve with cubic Hermite dense output.
/// Times are monotone in the direction of integration.
template <int N>
class Trajectory {
public:
  std::vector<double> t;
  std::vector<State<N>> y;
  std::vector<State<N>> dy;
  IntegratorOptions options;
  IntegrationStats stats;

  std::size_t size() const { return t.size(); }
  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }
  bool forward() const { return t.size() < 2 || t.back() >= t.front(); }

  void push(double ti, const State<N>& yi, const State<N>& dyi) {
    t.push_back(ti);
    y.push_back(yi);
    dy.push_back(dyi);
  }

  /// Index i with time in [t[i], t[i+1]] (direction aware).
  std::size_t segment(double s) const {
    if (t.size() < 2) return 0;
    if (forward()) {
      auto it = std::upper_bound(t.begin(), t.end(), s);
      std::size_t i = it == t.begin() ? 0 : std::size_t(it - t.begin()) - 1;
      return std::min(i, t.size() - 2);
    }
    auto it = std::upper_bound(t.begin(), t.end(), s, [](double a, double b) { return a > b; });
    std::size_t i = it == t.begin() ? 0 : std::size_t(it - t.begin()) - 1;
    return std::min(i, t.size() - 2);
  }

  State<N> hermite(std::size_t i, double s) const {
    const double h = t[i + 1] - t[i];
    if (h == 0.0) return y[i];
    const double u = (s - t[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    return h00 * y[i] + h10 * h * dy[i] + h01 * y[i + 1] + h11 * h * dy[i + 1];
  }

  State<N> at(double s) const {
    if (t.size() == 1) return y.front();
    return hermite(segment(s), s);
  }
};

/// Dormand-Prince 5(4) stepper with an optional projection applied after
/// every accepted step. The derivative stored at a node is re-evaluated
/// at the projected state so the Hermite interpolant stays consistent.
template <int N, class Rhs, class Project = NoProjection>
class DormandPrince {
public:
  DormandPrince(const Rhs& rhs, double t0, State<N> y0, double direction,
                IntegratorOptions opt = {}, Project project = {})
      : rhs_(rhs), project_(project), opt_(opt), t_(t0), y_(std::move(y0)),
        dir_(direction >= 0 ? 1.0 : -1.0), h_(opt.initial_step) {
    project_(y_);
    f_ = rhs_(t_, y_);
    ++stats_.rhs_evals;
  }

  double t() const { return t_; }
  const State<N>& y() const { return y_; }
  const State<N>& f() const { return f_; }
  const IntegrationStats& stats() const { return stats_; }

  /// Take one accepted step, never passing t_stop. Returns false once t_stop is reached.
  bool step(double t_stop) {
    const double remaining = (t_stop - t_) * dir_;
    if (remaining <= 0) return false;
    for (;;) {
      double h = std::min({h_, opt_.max_step, remaining});
      if (h < opt_.min_step && h < remaining)
        throw IntegrationError("step size underflow at t=" + std::to_string(t_));
      if (stats_.accepted + stats_.rejected > opt_.max_steps)
        throw IntegrationError("maximum number of steps exceeded");
      const double hs = dir_ * h;

      static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
      static constexpr double a21 = 1.0 / 5;
      static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
      static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
      static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                              a54 = -212.0 / 729;
      static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                              a64 = 49.0 / 176, a65 = -5103.0 / 18656;
      static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                              b5 = -2187.0 / 6784, b6 = 11.0 / 84;
      static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                              e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

      const State<N>& k1 = f_;
      State<N> k2 = rhs_(t_ + c2 * hs, State<N>(y_ + hs * a21 * k1));
      State<N> k3 = rhs_(t_ + c3 * hs, State<N>(y_ + hs * (a31 * k1 + a32 * k2)));
      State<N> k4 = rhs_(t_ + c4 * hs, State<N>(y_ + hs * (a41 * k1 + a42 * k2 + a43 * k3)));
      State<N> k5 = rhs_(t_ + c5 * hs,
                         State<N>(y_ + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
      State<N> k6 = rhs_(t_ + hs,
                         State<N>(y_ + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
      State<N> ynew = y_ + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      State<N> k7 = rhs_(t_ + hs, ynew);
      stats_.rhs_evals += 6;

      State<N> err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double en = 0.0;
      for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
        en = std::max(en, std::abs(err[i]) / sc);
      }
      if (!std::isfinite(en)) throw IntegrationError("non-finite state during integration");

      if (en <= 1.0) {
        const bool last = h >= remaining;
        t_ = last ? t_stop : t_ + hs;
        y_ = ynew;
        project_(y_);
        f_ = rhs_(t_, y_);
        ++stats_.rhs_evals;
        ++stats_.accepted;
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        h_ = h * fac;
        return true;
      }
      ++stats_.rejected;
      h_ = h * std::max(0.2, 0.9 * std::pow(en, -0.2));
    }
  }

private:
  Rhs rhs_;
  Project project_;
  IntegratorOptions opt_;
  double t_;
  State<N> y_;
  State<N> f_;
  double dir_;
  double h_;
  IntegrationStats stats_;
};

/// Integrate from t0 to t1 (either direction) and keep every accepted node.
template <int N, class Rhs, class Project = NoProjection>
Trajectory<N> integrate(const Rhs& rhs, double t0, const State<N>& y0, double t1,
                        const IntegratorOptions& opt = {}, Project project = {}) {
  DormandPrince<N, Rhs, Project> dp(rhs, t0, y0, t1 - t0, opt, project);
  Trajectory<N> traj;
  traj.options = opt;
  traj.push(dp.t(), dp.y(), dp.f());
  while (dp.step(t1)) traj.push(dp.t(), dp.y(), dp.f());
  traj.stats = dp.stats();
  return traj;
}

} // namespace reeb::flow
