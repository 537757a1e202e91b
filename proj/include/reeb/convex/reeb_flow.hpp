#pragma once

#include <Eigen/Dense>

#include "reeb/convex/body.hpp"
#include "reeb/flow/ode.hpp"

namespace reeb::convex {

/// Constant complex structures written in the (q₁, q₂, p₁, p₂) basis.
Mat4 J0_qqpp();
Mat4 J1_qqpp();
Mat4 J2_qqpp();
/// Permutation taking state coordinates (q₁, p₁, q₂, p₂) to (q₁, q₂, p₁, p₂).
Mat4 state_to_qqpp();
/// The same matrices acting on state coordinates.
Mat4 J0();
Mat4 J1();
Mat4 J2();

/// ω₀(u, v) = ⟨u, J₀ v⟩ on state vectors.
double omega0(const Vec4& u, const Vec4& v);
/// λ₀ = ½(p dq − q dp).
double lambda0(const Vec4& z, const Vec4& v);

/// (x, y, u, v) coordinates of S³ ⊂ ℂ² with z = p₁ + i q₁, w = p₂ + i q₂.
Eigen::Vector4d to_complex_coords(const Vec4& state);
Vec4 from_complex_coords(const Eigen::Vector4d& xyuv);

struct Frame {
  Vec4 X0, X1, X2, X3;
};

/// X₀ = ∇H/|∇H|, X₁ = J₂X₀, X₂ = J₁X₀, X₃ = −J₀X₀.
Frame salomao_frame(const ConvexBody& body, const Vec4& z);

/// X_H = −J₀∇H; throws ConstraintViolation when |ν(z) − 1| > tol.
Vec4 hamiltonian_rhs(const ConvexBody& body, const Vec4& z, double tol = 1e-6);

/// M = [⟨D²H Xᵢ, Xⱼ⟩]₁≤i,j≤2 + ⟨D²H X₃, X₃⟩ I.
Eigen::Matrix2d salomao_matrix(const ConvexBody& body, const Vec4& z);

/// ⟨α, Mα⟩/|α|².
double linearized_angle_rate(const ConvexBody& body, const Vec4& z, const Eigen::Vector2d& alpha);

flow::Trajectory<4> reeb_flow(const ConvexBody& body, const Vec4& z0, double T,
                              const flow::IntegratorOptions& opt = {});

/// State (z, α₁, α₂, Θ̃): base flow, α̇₁ = −(Mα)₂, α̇₂ = (Mα)₁, and the unwrapped angle.
using LinState = flow::State<7>;

flow::Trajectory<7> evolve_linearized(const ConvexBody& body, const Vec4& z0, const Eigen::Vector2d& alpha0,
                                      double T, const flow::IntegratorOptions& opt = {});

} // namespace reeb::convex
