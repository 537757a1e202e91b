#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "reeb/flow/ode.hpp"
#include "reeb/geometry/geodesic.hpp"
#include "reeb/sections/linking.hpp"

namespace reeb::sections {

/// Birkhoff annulus over the equator c(s) = (cos s, sin s, 0) of an ellipsoid of revolution:
/// a(s, θ) = (c(s), cos θ ċ(s) + sin θ ẑ), θ ∈ [0, π].
class BirkhoffAnnulus {
public:
  explicit BirkhoffAnnulus(geometry::RevolutionMetric metric);
  const geometry::RevolutionMetric& metric() const { return metric_; }
  double length() const { return metric_.equator_length(); }
  /// Length in units where K_max = 1.
  double normalized_length() const { return length() * metric_.normalization_scale(); }
  geometry::UnitTangent point(double s, double theta) const;
  /// (s mod L, θ) of a unit vector based on the equator.
  Eigen::Vector2d chart(const geometry::UnitTangent& x) const;
  /// Lifted boundary orbits γ_c (over (c, ċ)) and γ̂_c (over (c, −ċ)), period 2L.
  Loop boundary_loop(bool reversed, int n = 400) const;
  /// Preimage point of a(s, θ) in S³ continued along s ∈ [0, 2L).
  Eigen::Vector4d lifted_point(double s, double theta) const;

private:
  geometry::RevolutionMetric metric_;
};

struct ReturnSample {
  double s = 0, theta = 0;
  double s1 = 0, theta1 = 0;     ///< s1 unwrapped: s + Δs
  double tau = 0;
  double eta = 0, nu = 0;        ///< lengths of the two α₊ arcs along c
  double delta_s = 0;            ///< η + ν
  double on_annulus_error = 0;
};

struct ReturnOptions {
  flow::IntegratorOptions integrator{};
  double time_cap = 0;           ///< 0: 10·2π/√δ in normalized units
};

/// First return to the annulus; θ ∈ {0, π} uses the second conjugate point.
ReturnSample return_map(const BirkhoffAnnulus& a, double s, double theta, const ReturnOptions& opt = {});

/// Return samples on an ns × nθ grid with θ in the open interval.
std::vector<ReturnSample> return_grid(const BirkhoffAnnulus& a, int ns, int ntheta, const ReturnOptions& opt = {});

/// Canonical displacement representatives in (2L/3, 3L/2); needs δ > 4/9.
std::vector<double> canonical_lift_displacement(const BirkhoffAnnulus& a, const std::vector<ReturnSample>& samples);

struct AnnulusTau {
  double tau_min = 0, tau_max = 0;
  double refinement_gap = 0;
  std::size_t samples = 0;
};

AnnulusTau tau_stats(const BirkhoffAnnulus& a, int ns = 16, int ntheta = 8, const ReturnOptions& opt = {});

struct AnnulusIdentity {
  int link_gamma = 0, link_gamma_hat = 0;
  int intersection = 0;
  int residual = 0;
  double gauss_gap = 0;
};

/// link(β, γ_c) + link(β, γ̂_c) against the signed count of β through the lifted annulus.
AnnulusIdentity annulus_disk_identity_check(const BirkhoffAnnulus& a, const Loop& beta, int boundary_points = 400);

/// Signed crossings of a closed polygon with the lifted annulus (+1 where the foot point moves north).
int annulus_intersection(const BirkhoffAnnulus& a, const Loop& beta);

/// Rows s, θ, s′, θ′, τ, Δs.
void write_return_csv(std::ostream& os, const std::vector<ReturnSample>& samples);

} // namespace reeb::sections
