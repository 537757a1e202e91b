#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "reeb/flow/ode.hpp"
#include "reeb/geometry/geodesic.hpp"
#include "reeb/geometry/revolution_metric.hpp"

namespace reeb::lift {

/// (x, y, u, v) ↔ x + y·i + u·j + v·k ↔ [[z, w], [-w̄, z̄]], z = x+iy, w = u+iv.
using Quaternion = Eigen::Vector4d;

Quaternion qmul(const Quaternion& a, const Quaternion& b);
Quaternion qconj(const Quaternion& a);
Quaternion qinv(const Quaternion& a);
Quaternion normalized(const Quaternion& a);

/// Pure quaternion with imaginary part p (coordinates (y, u, v)).
Quaternion pure(const Eigen::Vector3d& p);
Eigen::Vector3d imag(const Quaternion& q);

/// Rotation p ↦ q p q⁻¹ of the imaginary quaternions.
Eigen::Matrix3d rotation_matrix(const Quaternion& q);
/// Unit quaternion q with rotation_matrix(q) = R (sign fixed by a nonnegative real part).
Quaternion quaternion_from_rotation(const Eigen::Matrix3d& R);

/// λ₀ = ½(x dy − y dx + u dv − v du).
double lambda0(const Quaternion& Z, const Eigen::Vector4d& zeta);
/// Reeb field of λ₀ on S³: 2i(z, w), period π.
Eigen::Vector4d reeb_lambda0(const Quaternion& Z);
/// Positive basis of ker λ₀ ∩ T_Z S³ (dλ₀(e₁, e₂) = 1).
std::pair<Eigen::Vector4d, Eigen::Vector4d> contact_basis(const Quaternion& Z);
/// Complex multiplication by i on ℂ² in (x, y, u, v) coordinates.
Eigen::Vector4d times_i(const Eigen::Vector4d& a);

/// D₀(Z) = (Z⁻¹ j Z, −Z⁻¹ k Z) on the round T¹S² in (y, u, v) coordinates.
geometry::UnitTangent double_cover_round(const Quaternion& Z);
/// One of the two preimages of an orthonormal pair (q, v).
Quaternion double_cover_round_inverse(const geometry::UnitTangent& x);

/// (D₀*λ_{g₀})(ζ) − 4λ₀(ζ) by a central finite difference of D₀.
double pullback_factor_round(const Quaternion& Z, const Eigen::Vector4d& zeta, double h = 1e-6);
/// λ_{g₀}(dD₀ ζ) = ⟨v, dq(ζ)⟩.
double round_liouville_pushforward(const Quaternion& Z, const Eigen::Vector4d& zeta, double h = 1e-6);

/// Legendre chain from round unit tangents to unit tangents of the ellipsoid,
/// through the diffeomorphism Φ(y, u, v) = (y, u, c·v).
geometry::UnitTangent round_to_metric(const geometry::RevolutionMetric& m, const geometry::UnitTangent& x);
geometry::UnitTangent metric_to_round(const geometry::RevolutionMetric& m, const geometry::UnitTangent& x);

/// D_g = chain ∘ D₀ and a preimage of D_g.
geometry::UnitTangent double_cover(const geometry::RevolutionMetric& m, const Quaternion& Z);
Quaternion double_cover_inverse(const geometry::RevolutionMetric& m, const geometry::UnitTangent& x);

/// The preimage of x closest to `reference`; `jump` receives the distance.
Quaternion lift_near(const geometry::RevolutionMetric& m, const geometry::UnitTangent& x,
                     const Quaternion& reference, double* jump = nullptr);

struct LiftOptions {
  double max_dt = 0.05;      ///< resampling step of the downstairs dense output
  double max_jump = 0.5;     ///< largest accepted distance between consecutive lifts
  double match_tol = 1e-7;   ///< |D_g(Z(t)) − x(t)|
};

struct LiftedPath {
  std::vector<double> t;
  std::vector<Quaternion> Z;
  double max_mismatch = 0;   ///< max |D_g(Z) − downstairs state|
  double max_step = 0;       ///< largest distance between consecutive lifts

  double closure_gap() const { return (Z.back() - Z.front()).norm(); }
  /// Linear interpolation renormalized to S³.
  Quaternion at(double s) const;
};

/// Continuous lift of a downstairs trajectory starting at Z0.
LiftedPath lift_path(const geometry::RevolutionMetric& m, const flow::Trajectory<6>& downstairs,
                     const Quaternion& Z0, const LiftOptions& opt = {});

/// cos²θ + K sin²θ at the base point of the state.
double frame_angle_rate(const geometry::RevolutionMetric& m, const geometry::UnitTangent& x, double theta);

/// Writes t,x,y,u,v.
void write_lifted_csv(std::ostream& os, const LiftedPath& path);

} // namespace reeb::lift
