#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reeb/convex/jet.hpp"
#include "reeb/util/errors.hpp"

namespace reeb::convex {

/// States are ordered (q₁, p₁, q₂, p₂).
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

class NotStrictlyConvexError : public Error { public: using Error::Error; };

/// Smooth convex body in ℝ⁴ containing 0, described by its gauge ν and H = ν².
class ConvexBody {
public:
  virtual ~ConvexBody() = default;
  virtual std::string family() const = 0;
  /// Jet of H = ν² at x ≠ 0.
  virtual Jet hamiltonian_jet(const Vec4& x) const = 0;
  /// Hessian of ν² is constant.
  virtual bool is_quadratic() const { return false; }

  double hamiltonian(const Vec4& x) const { return hamiltonian_jet(x).v; }
  double gauge(const Vec4& x) const { return std::sqrt(hamiltonian(x)); }
  Vec4 gradient(const Vec4& x) const { return hamiltonian_jet(x).g; }
  Mat4 hessian(const Vec4& x) const { return hamiltonian_jet(x).H; }
  /// Radial projection onto ∂C.
  Vec4 boundary_point(const Vec4& x) const { return x / gauge(x); }
};

/// E(a₁, a₂): ν² = (q₁² + p₁²)/a₁ + (q₂² + p₂²)/a₂.
class Ellipsoid : public ConvexBody {
public:
  Ellipsoid(double a1, double a2);
  std::string family() const override { return "ellipsoid"; }
  Jet hamiltonian_jet(const Vec4& x) const override;
  bool is_quadratic() const override { return true; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

private:
  double a1_, a2_;
};

/// ν(x) = |x| / r(x/|x|), r(n) = 1 + Σ c·n₁^e₁ n₂^e₂ n₃^e₃ n₄^e₄ with total degree ≤ 4.
class PerturbedBall : public ConvexBody {
public:
  struct Term {
    double c;
    std::array<int, 4> e;
  };
  explicit PerturbedBall(std::vector<Term> terms);
  std::string family() const override { return "perturbed_ball"; }
  Jet hamiltonian_jet(const Vec4& x) const override;
  const std::vector<Term>& terms() const { return terms_; }
  bool is_quadratic() const override { return terms_.empty(); }

private:
  std::vector<Term> terms_;
};

inline std::unique_ptr<ConvexBody> unit_ball() { return std::make_unique<Ellipsoid>(1.0, 1.0); }

struct KminResult {
  double value = 0;          ///< refined estimate of inf λ_min(D²ν²)
  double sample_min = 0;     ///< best raw sample
  double lipschitz = 0;      ///< estimated Lipschitz constant of λ_min on S³
  double dispersion = 0;     ///< covering radius estimate of the sample
  double error_bound = 0;    ///< value − (sample_min − lipschitz·dispersion), clipped at 0
  std::size_t samples = 0;
  bool exact = false;
};

/// Smallest Hessian eigenvalue of ν² over directions. Quadratic bodies are exact;
/// otherwise Halton sampling plus Nelder-Mead from the best 10 samples.
KminResult kmin(const ConvexBody& body, std::size_t budget = 1u << 14);

double min_eigenvalue(const Mat4& H);

} // namespace reeb::convex
