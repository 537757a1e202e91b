#pragma once

#include <complex>
#include <functional>

namespace reeb::sections {

using Complex = std::complex<double>;

/// Disk isotopy as a map z ↦ (t ↦ f_t(z)) on [0, T].
using IsotopyPath = std::function<std::function<Complex(double)>(Complex)>;

struct FlorioReport {
  double left = 0;               ///< wind(f_t(y) − f_t(x))
  double right_min = 0, right_max = 0;
  bool contained = false;
  Complex witness;               ///< z on [x, y] closest to the target
  double gap = 0;                ///< |left − right(witness)|
};

/// Scans z ∈ [x, y] (64 samples, then bisection) for wind(Df_t(z)(y − x)) hitting the
/// winding of f_t(y) − f_t(x). Df is a central difference with step h.
FlorioReport florio_check(const IsotopyPath& f, Complex x, Complex y, double T, int samples = 64,
                          double h = 1e-6);

} // namespace reeb::sections
