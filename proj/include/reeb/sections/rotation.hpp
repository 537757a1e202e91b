#pragma once

#include <vector>

#include <Eigen/Dense>

#include "reeb/sections/linking.hpp"
#include "reeb/sections/model.hpp"

namespace reeb::sections {

/// Periodic orbit of a model flow: start point on S³ and period.
struct PeriodicOrbit {
  Eigen::Vector4d start;
  double period = 0;
};

enum class Framing { model, seifert };

struct RotationOptions {
  int periods = 50;              ///< n; the estimate also uses 2n
  double closure_tol = 1e-7;
  double pushoff_eps = 1e-2;
  int loop_points = 400;
  double convergence_tol = 1e-3; ///< allowed |ρ₂ₙ − ρₙ| before a ConvergenceError
};

struct RotationNumber {
  double value = 0;              ///< Richardson-accelerated, in turns per period
  double rho_n = 0, rho_2n = 0;
  double convergence = 0;        ///< |ρ₂ₙ − ρₙ|
  double closure_gap = 0;
  int framing_correction = 0;    ///< link(γ, pushoff along e₁) for the Seifert framing
};

/// Orbit sampled as a closed polygon.
Loop orbit_loop(const S3Flow& flow, const PeriodicOrbit& orbit, int n = 400);

/// Pushoff of the orbit along cos(2πk t/T)·e₁ + sin(2πk t/T)·e₂.
Loop pushoff_loop(const S3Flow& flow, const PeriodicOrbit& orbit, double eps, int twist = 0, int n = 400);

/// Rotation of the linearized flow against the model frame, over n periods.
double frame_turns(const S3Flow& flow, const PeriodicOrbit& orbit, int n, double theta0 = 0.0);

/// Transverse rotation number. Model framing measures against the global frame of ξ
/// (equivalently any capping disk); Seifert framing against the pushoff with zero linking.
RotationNumber rotation_number(const S3Flow& flow, const PeriodicOrbit& orbit, Framing framing,
                               const RotationOptions& opt = {}, double theta0 = 0.0);

struct CZIndex {
  int value = 0;
  bool degenerate = false;
  int lower = 0, upper = 0;      ///< neighbouring values when degenerate
};

CZIndex cz_index(double rho, int n, double tol = 1e-6);

struct AdditivityResidual {
  double left = 0;    ///< multi-boundary framing: model turns + link(pushoff, ∪γⱼ)
  double right = 0;   ///< single-orbit framing + Σ_{j≠i} link(γᵢ, γⱼ)
  double residual = 0;
};

/// Both sides in turns per period.
std::vector<AdditivityResidual> rotation_additivity_check(const S3Flow& flow, const std::vector<PeriodicOrbit>& orbits,
                                                          const RotationOptions& opt = {});

} // namespace reeb::sections
