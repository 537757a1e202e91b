#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "reeb/certify/certificate.hpp"
#include "reeb/sections/model.hpp"
#include "reeb/sections/pages.hpp"

namespace reeb::certify {

struct KappaOptions {
  std::vector<double> T_grid{25, 50, 100, 200};
  std::size_t samples = 256;
  std::uint64_t seed = 1;
  double binding_margin = 0.05;  ///< skip sample points this close to γ₀
  int gauss_checks = 4;          ///< arcs re-linked by the Gauss integral at the first T
  double stabilization_tol = 0.02;
  double event_tol = 1e-9;
};

struct KappaRow {
  double T = 0;
  double inf = 0;                ///< inf over samples of ΔΘ̃/link
  std::size_t argmin = 0;
  int link = 0;                  ///< denominator at the minimizer
  double dtheta = 0;
  double closing = 0;            ///< change of the minimizer's ratio under link ± 1
};

struct KappaEstimate {
  std::string flow, page;
  std::vector<KappaRow> rows;
  std::vector<double> extrapolated; ///< 2κ(Tₖ₊₁) − κ(Tₖ)
  double kappa_hat = 0;
  double stabilization = 0;      ///< relative change of the last two extrapolated values
  bool stabilized = false;
  double spread = 0;             ///< of the last three raw infima
  int gauss_mismatches = 0;
  double gauss_gap = 0;
  double integration_error = 0;  ///< minimizer recomputed at tighter tolerance
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> flagged;
  ErrorBudget budget() const;
};

/// Sample point number j: Halton on S³ and a frame angle.
std::pair<Eigen::Vector4d, double> kappa_sample(std::size_t j, std::uint64_t seed);

/// Per-sample ΔΘ̃ and link along one trajectory, evaluated at every T of the grid.
KappaEstimate estimate_kappa(const sections::S3Flow& flow, const sections::DiskPage& page, const KappaOptions& opt = {});

/// κ̂ against 2π; not stabilized → inconclusive.
Certificate certify_kappa(const KappaEstimate& e);

/// Rows T, inf, link, dtheta, closing.
void write_kappa_csv(std::ostream& os, const KappaEstimate& e);

} // namespace reeb::certify
