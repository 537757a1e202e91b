#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace reeb::flow {

using Complex = std::complex<double>;

/// Continuous argument tracking, branch chosen from the previous sample.
class AngleUnwrapper {
public:
  explicit AngleUnwrapper(double max_step = 1.5707963267948966) : max_step_(max_step) {}

  /// Feeds the next value; returns false if the angular jump exceeds max_step.
  bool push(Complex z);
  double angle() const { return angle_; }
  double total() const { return angle_ - start_; }
  bool started() const { return started_; }

private:
  double max_step_;
  double angle_ = 0.0;
  double start_ = 0.0;
  double last_raw_ = 0.0;
  bool started_ = false;
};

/// Smallest representative of a - b modulo 2π, in (-π, π].
double wrap_pi(double a);

/// Winding number of a sampled path, no refinement; throws if a step exceeds π/2.
double winding(const std::vector<Complex>& samples);

/// Winding number of z on [a, b] starting from n uniform samples and
/// bisecting any interval whose angular step exceeds π/2.
double winding(const std::function<Complex(double)>& z, double a, double b, int n = 64,
               int max_depth = 30);

} // namespace reeb::flow
