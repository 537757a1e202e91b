#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "reeb/sections/linking.hpp"
#include "reeb/sections/model.hpp"
#include "reeb/sections/pages.hpp"

namespace reeb::sections {

/// m page-to-page steps of the orbit of a page point, with the chart traces k_i(s).
class PageSteps {
public:
  PageSteps(const S3Flow& flow, const DiskPage& page, const Eigen::Vector4d& start, int m);
  int steps() const { return m_; }
  /// Chart point when the page angle has advanced by 2π(i + s) from the start, s ∈ [0, 1].
  Complex k(int i, double s) const;
  /// k̂_i: k_i squeezed to [0, 1 − δ], then constant z_{i+1} or, on the last step, the chord back to z₀.
  Complex k_hat(int i, double s, double delta) const;
  Complex z(int i) const;
  /// Closed-up loop: orbit over m steps plus the chart chord, repeated r times.
  Loop loop(int repeat = 1, double dt = 0.02, int chord_points = 64) const;
  const std::vector<double>& hit_times() const { return hits_; }

private:
  const DiskPage* page_;
  flow::Trajectory<5> traj_;
  std::vector<double> hits_;
  std::vector<double> node_t_, node_angle_;  // unwrapped page angle at the nodes
  int m_;
  double angle_at(double t, std::size_t node) const;
};

struct WindingSumResult {
  int gauss = 0;
  double gauss_gap = 0;
  double winding_sum = 0;
  int lcm = 0, r_p = 0, r_q = 0;
  double min_distance = 0;
};

/// Σ_{i,j<L} wind(k̂ᵖᵢ − k̂ᵠⱼ) against the Gauss link of the r_p- and r_q-fold iterated loops.
WindingSumResult winding_sum_identity(const S3Flow& flow, const DiskPage& page, const Eigen::Vector4d& p, int m_p,
                                      const Eigen::Vector4d& q, int m_q, double delta = 0.05);

} // namespace reeb::sections
