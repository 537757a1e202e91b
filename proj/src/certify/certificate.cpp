#include "reeb/certify/certificate.hpp"

#include <cmath>
#include <numbers>

#include "reeb/certify/thresholds.hpp"
#include "reeb/sections/model.hpp"

namespace reeb::certify {

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::certified: return "certified";
  case Verdict::not_certified: return "not-certified";
  default: return "inconclusive";
  }
}

Verdict decide(double margin, double budget) {
  if (margin > budget) return Verdict::certified;
  if (margin < -budget) return Verdict::not_certified;
  return Verdict::inconclusive;
}

void finalize(Certificate& c) {
  c.margin = c.value - c.threshold;
  c.verdict = decide(c.margin, c.error.total());
}

nlohmann::ordered_json to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["criterion"] = c.criterion;
  j["inputs"] = c.inputs;
  j["seed"] = c.seed;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.measured) m[k] = v;
  m["value"] = c.value;
  j["measured"] = m;
  j["threshold"] = c.threshold;
  j["margin"] = c.margin;
  j["error_budget"] = {{"integration", c.error.integration},
                       {"closing", c.error.closing},
                       {"gauss_gap", c.error.gauss_gap},
                       {"sampling", c.error.sampling},
                       {"total", c.error.total()}};
  j["verdict"] = to_string(c.verdict);
  j["artifacts"] = c.artifacts;
  if (!c.flagged.empty()) j["flagged"] = c.flagged;
  return j;
}

Certificate certify_Ksigma(double K_sigma, double tau_min, const ErrorBudget& err) {
  Certificate c;
  c.criterion = "Ksigma";
  c.measured["K_sigma"] = K_sigma;
  c.measured["tau_min"] = tau_min;
  c.value = K_sigma * tau_min;
  c.threshold = 2 * std::numbers::pi;
  c.error = err;
  finalize(c);
  return c;
}

Certificate certify_convex(std::shared_ptr<const convex::ConvexBody> body, const sections::DiskPage& page,
                           const ConvexOptions& opt) {
  Certificate c;
  c.criterion = "convex";
  c.inputs["body"] = body->family();
  c.inputs["page"] = page.id();
  const auto km = convex::kmin(*body, opt.kmin_budget);
  sections::ConvexS3Flow flow(body);
  const auto tau = sections::tau_stats(flow, page, opt.tau_radii, opt.tau_angles);
  c.measured["K_min"] = km.value;
  c.measured["K_min_error"] = km.error_bound;
  c.measured["tau_min"] = tau.tau_min;
  c.measured["tau_max"] = tau.tau_max;
  c.measured["min_transversality"] = tau.min_transversality;
  c.value = km.value * tau.tau_min;
  c.threshold = std::numbers::pi;
  c.error.sampling = km.error_bound * tau.tau_min + km.value * tau.refinement_gap;
  // event bisection and integration tolerance on τ
  c.error.integration = km.value * 1e-8;
  if (!(tau.min_transversality > 0)) c.flagged.push_back("page transversality margin not positive");
  finalize(c);
  return c;
}

Certificate certify_pinching(const geometry::RevolutionMetric& metric, int grid) {
  Certificate c;
  c.criterion = "pinching";
  c.inputs["family"] = "revolution";
  c.inputs["c"] = metric.c();
  const auto p = geometry::pinching(metric, grid);
  const auto ds = delta_star();
  c.measured["K_min"] = p.k_min;
  c.measured["K_max"] = p.k_max;
  c.measured["delta"] = p.delta;
  c.measured["delta_star"] = ds.delta;
  c.value = p.delta;
  c.threshold = ds.delta;
  c.error.sampling = p.grid_error;
  c.error.integration = 1e-14;
  finalize(c);
  return c;
}

} // namespace reeb::certify
