#include "reeb/convex/body.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "reeb/util/parallel.hpp"
#include "reeb/util/sampling.hpp"

namespace reeb::convex {

Ellipsoid::Ellipsoid(double a1, double a2) : a1_(a1), a2_(a2) {
  if (!(a1 > 0 && a2 > 0)) throw PreconditionError("ellipsoid semi-axes must be positive");
}

Jet Ellipsoid::hamiltonian_jet(const Vec4& x) const {
  const Vec4 w(1 / a1_, 1 / a1_, 1 / a2_, 1 / a2_);
  Jet j;
  j.v = x.dot(w.cwiseProduct(x));
  j.g = 2 * w.cwiseProduct(x);
  j.H = (2 * w).asDiagonal();
  return j;
}

PerturbedBall::PerturbedBall(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    int deg = 0;
    for (int e : t.e) {
      if (e < 0) throw PreconditionError("negative monomial exponent");
      deg += e;
    }
    if (deg > 4) throw PreconditionError("perturbation degree exceeds 4");
  }
}

Jet PerturbedBall::hamiltonian_jet(const Vec4& x) const {
  std::array<Jet, 4> xs;
  for (int i = 0; i < 4; ++i) xs[i] = Jet::variable(x, i);
  Jet s = xs[0] * xs[0] + xs[1] * xs[1] + xs[2] * xs[2] + xs[3] * xs[3];
  if (terms_.empty()) return s;
  const Jet inv_rho = reciprocal(sqrt(s));
  std::array<Jet, 4> n;
  for (int i = 0; i < 4; ++i) n[i] = xs[i] * inv_rho;
  Jet r = Jet::constant(1.0);
  for (const auto& t : terms_) {
    Jet m = Jet::constant(t.c);
    for (int i = 0; i < 4; ++i)
      if (t.e[i] > 0) m = m * pow(n[i], t.e[i]);
    r = r + m;
  }
  if (r.v <= 0) throw PreconditionError("radial function must stay positive");
  // H = |x|² / r²
  return s * reciprocal(r * r);
}

double min_eigenvalue(const Mat4& H) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

namespace {

double lambda_min_dir(const ConvexBody& body, const Vec4& y) {
  return min_eigenvalue(body.hessian(y / y.norm()));
}

// Nelder-Mead on the 0-homogeneous function y ↦ λ_min(D²ν²(y)).
Vec4 nelder_mead(const ConvexBody& body, Vec4 x0, double scale, int iters = 400) {
  std::array<Vec4, 5> p;
  std::array<double, 5> f;
  p[0] = x0;
  for (int i = 0; i < 4; ++i) {
    p[i + 1] = x0;
    p[i + 1][i] += scale;
  }
  for (int i = 0; i < 5; ++i) f[i] = lambda_min_dir(body, p[i]);
  for (int it = 0; it < iters; ++it) {
    std::array<int, 5> idx;
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
    const int best = idx[0], worst = idx[4], second = idx[3];
    if (f[worst] - f[best] < 1e-14) break;
    Vec4 c = Vec4::Zero();
    for (int i = 0; i < 4; ++i) c += p[idx[i]];
    c /= 4;
    const Vec4 xr = c + (c - p[worst]);
    const double fr = lambda_min_dir(body, xr);
    if (fr < f[best]) {
      const Vec4 xe = c + 2 * (c - p[worst]);
      const double fe = lambda_min_dir(body, xe);
      if (fe < fr) { p[worst] = xe; f[worst] = fe; } else { p[worst] = xr; f[worst] = fr; }
    } else if (fr < f[second]) {
      p[worst] = xr; f[worst] = fr;
    } else {
      const Vec4 xc = c + 0.5 * (p[worst] - c);
      const double fc = lambda_min_dir(body, xc);
      if (fc < f[worst]) {
        p[worst] = xc; f[worst] = fc;
      } else {
        for (int i = 1; i < 5; ++i) {
          p[idx[i]] = p[best] + 0.5 * (p[idx[i]] - p[best]);
          f[idx[i]] = lambda_min_dir(body, p[idx[i]]);
        }
      }
    }
  }
  return p[std::size_t(std::min_element(f.begin(), f.end()) - f.begin())];
}

} // namespace

KminResult kmin(const ConvexBody& body, std::size_t budget) {
  KminResult r;
  if (body.is_quadratic()) {
    r.value = r.sample_min = min_eigenvalue(body.hessian(Vec4(1, 0, 0, 0)));
    r.exact = true;
    if (r.value <= 0) throw NotStrictlyConvexError("K_min is not positive");
    return r;
  }
  const std::size_t n = std::max<std::size_t>(budget, 16);
  std::vector<Vec4> dirs(n);
  for (std::size_t i = 0; i < n; ++i) dirs[i] = util::halton_sphere3(i);
  const auto vals = util::parallel_map<double>(n, [&](std::size_t i) { return lambda_min_dir(body, dirs[i]); });
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + 10, order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] < vals[b] || (vals[a] == vals[b] && a < b); });
  r.samples = n;
  r.sample_min = vals[order[0]];
  r.dispersion = std::cbrt(2 * std::numbers::pi * std::numbers::pi / double(n));
  const auto refined = util::parallel_map<double>(10, [&](std::size_t k) {
    const Vec4 y = nelder_mead(body, dirs[order[k]], 0.5 * r.dispersion);
    return lambda_min_dir(body, y);
  });
  r.value = std::min(r.sample_min, *std::min_element(refined.begin(), refined.end()));
  // Lipschitz estimate: finite-difference slopes on a spread subsample
  double L = 0;
  const double h = 1e-3;
  for (std::size_t k = 0; k < n; k += std::max<std::size_t>(1, n / 256)) {
    const Vec4& d = dirs[k];
    for (int i = 0; i < 4; ++i) {
      Vec4 e = Vec4::Unit(i);
      e -= e.dot(d) * d;
      if (e.norm() < 1e-8) continue;
      e.normalize();
      L = std::max(L, std::abs(lambda_min_dir(body, d + h * e) - lambda_min_dir(body, d - h * e)) / (2 * h));
    }
  }
  r.lipschitz = L;
  r.error_bound = std::max(0.0, r.value - (r.sample_min - L * r.dispersion));
  if (r.value <= 0) throw NotStrictlyConvexError("K_min estimate is not positive");
  return r;
}

} // namespace reeb::convex
