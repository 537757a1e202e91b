#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "reeb/flow/ode.hpp"

namespace reeb::sections {

/// Linearized polar dynamics on ℝ/ℤ × ℝ/2πℤ: ϑ̇ = 1/T, θ̇ = b(ϑ, θ).
struct PolarTorus {
  double period = 1.0;
  std::function<double(double, double)> b;

  /// b for the linearization S(ϑ) = diag(1, K(ϑ)): cos²θ + K(ϑ) sin²θ.
  static PolarTorus geodesic_frame(double period, std::function<double(double)> K);
};

/// Trajectory of (ϑ, θ), both unwrapped.
flow::Trajectory<2> polar_torus_flow(const PolarTorus& torus, const Eigen::Vector2d& start, double T,
                                     const flow::IntegratorOptions& opt = {});

struct SectionVerdict {
  bool section = false;
  double max_forward_time = 0;   ///< over samples that hit
  double max_backward_time = 0;
  double min_transversality = 0; ///< min over the graph of (b − g′/T), sign-adjusted
  int misses = 0;
  std::string reason;
};

/// Tests whether the circle graph {θ = g(ϑ)} is hit forward and backward by every
/// sampled trajectory within the time cap, with a fixed-sign crossing speed.
SectionVerdict boundary_section_check(const PolarTorus& torus, const std::function<double(double)>& g,
                                      const std::function<double(double)>& dg, double time_cap = 0,
                                      int n_samples = 64);

} // namespace reeb::sections
