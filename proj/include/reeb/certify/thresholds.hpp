#pragma once

namespace reeb::certify {

struct DeltaStar {
  double x = 0;          ///< unique real root of 4x³ − 2x² − 1
  double delta = 0;      ///< x²
  double residual = 0;   ///< |P(x)|
  bool unique = false;   ///< P < 0 at both critical points 0 and 1/3
  int iterations = 0;
};

double pinching_polynomial(double x);

/// Bracketed Newton on [0.5, 1].
DeltaStar delta_star();

struct MuWindow {
  double lower = 0;      ///< √δ/(2√δ − 1)
  double upper = 0;      ///< 2δ√δ
  bool feasible = false; ///< upper > lower beyond rounding
};

/// Needs δ ∈ (1/4, 1].
MuWindow mu_window(double delta);

/// Lift-length window for the canonical displacement (normalized units): L ± 2π(1/√δ − 1).
struct DisplacementWindow {
  double lower = 0, upper = 0;
};
DisplacementWindow displacement_window(double L, double delta);

/// F(δ) = L/2 + π(1/√δ − 1).
double alpha_arc_bound(double L, double delta);

} // namespace reeb::certify
