#pragma once

#include <functional>
#include <iosfwd>

#include <Eigen/Dense>

#include "reeb/flow/ode.hpp"
#include "reeb/geometry/revolution_metric.hpp"

namespace reeb::geometry {

using GeoState = flow::State<6>; ///< (p, v)

struct UnitTangent {
  Eigen::Vector3d p;
  Eigen::Vector3d v;

  GeoState state() const;
  static UnitTangent from_state(const GeoState& s);
};

/// Unit tangent at latitude/longitude with heading angle measured from east toward north.
UnitTangent unit_tangent(const RevolutionMetric& m, double latitude, double longitude, double heading);

/// v⊥ = n × v, the positive rotation of v by π/2 in T_pS².
Eigen::Vector3d rotate_tangent(const RevolutionMetric& m, const Eigen::Vector3d& p,
                               const Eigen::Vector3d& v);

/// ṗ = v, v̇ = -(vᵀ Hess F v / |∇F|²) ∇F.
GeoState geodesic_rhs(const RevolutionMetric& m, const GeoState& s);

/// Projects (p, v) back onto T¹S²: Newton step for p, tangential part of v, renormalized.
void project_state(const RevolutionMetric& m, Eigen::Ref<flow::State<6>> s);

/// Angular momentum about the symmetry axis.
double clairaut(const GeoState& s);

flow::Trajectory<6> geodesic_flow(const RevolutionMetric& m, const UnitTangent& x0, double T,
                                  const flow::IntegratorOptions& opt = {});

/// Geodesic augmented with a Jacobi field (b, b′) and the geodesic-frame angle θ.
using GeoJacobiState = flow::State<9>; ///< (p, v, b, b′, θ)

GeoJacobiState geodesic_jacobi_rhs(const RevolutionMetric& m, const GeoJacobiState& s);

flow::Trajectory<9> geodesic_jacobi_flow(const RevolutionMetric& m, const UnitTangent& x0,
                                         double b0, double db0, double theta0, double T,
                                         const flow::IntegratorOptions& opt = {});

/// Solution of b″ = -K(t) b at time T.
Eigen::Vector2d jacobi_evolve(const std::function<double(double)>& K, Eigen::Vector2d b0, double T,
                              const flow::IntegratorOptions& opt = {});

/// θ′ = cos²θ + K sin²θ, the angle rate in the geodesic frame.
double frame_angle_rate(double K, double theta);

/// Writes t,px,py,pz,vx,vy,vz.
void write_trajectory_csv(std::ostream& os, const flow::Trajectory<6>& traj);

} // namespace reeb::geometry
