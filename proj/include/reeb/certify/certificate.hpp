#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "reeb/convex/body.hpp"
#include "reeb/geometry/revolution_metric.hpp"
#include "reeb/sections/pages.hpp"

namespace reeb::certify {

enum class Verdict { certified, not_certified, inconclusive };

std::string to_string(Verdict v);

struct ErrorBudget {
  double integration = 0;
  double closing = 0;
  double gauss_gap = 0;
  double sampling = 0;     ///< grid / sampling error of infima
  double total() const { return integration + closing + gauss_gap + sampling; }
};

struct Certificate {
  std::string criterion;   ///< kappa | Ksigma | convex | pinching
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::map<std::string, double> measured;
  double value = 0;        ///< the quantity compared with the threshold
  double threshold = 0;
  double margin = 0;       ///< value − threshold
  ErrorBudget error;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> artifacts;
  std::vector<std::string> flagged;  ///< tangential events and other warnings
};

/// certified ⟺ margin > budget; not-certified ⟺ margin < −budget.
Verdict decide(double margin, double budget);

/// Fills margin and verdict.
void finalize(Certificate& c);

nlohmann::ordered_json to_json(const Certificate& c);

/// K_σ·τ_min against 2π.
Certificate certify_Ksigma(double K_sigma, double tau_min, const ErrorBudget& err = {});

struct ConvexOptions {
  int tau_radii = 8, tau_angles = 16;
  std::size_t kmin_budget = 1u << 14;
};

/// K^C_min·τ_min(D) against π.
Certificate certify_convex(std::shared_ptr<const convex::ConvexBody> body, const sections::DiskPage& page,
                           const ConvexOptions& opt = {});

/// δ against δ*.
Certificate certify_pinching(const geometry::RevolutionMetric& metric, int grid = 64);

} // namespace reeb::certify
