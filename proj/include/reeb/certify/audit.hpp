#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "reeb/geometry/revolution_metric.hpp"
#include "reeb/sections/birkhoff.hpp"
#include "reeb/sections/model.hpp"

namespace reeb::certify {

struct BoundCheck {
  std::string name;
  double measured = 0;
  double bound = 0;
  double slack = 0;       ///< ≥ 0 when the bound holds
  std::string status;     ///< tight | slack | violated
};

struct DisplacementAudit {
  double C = 0;           ///< max |Δs_total/2L − M| over the samples
  std::size_t samples = 0;
  double T = 0;
};

struct GeometryAudit {
  double c = 0, delta = 0;
  double L = 0;           ///< normalized equator length
  std::vector<BoundCheck> checks;
  bool displacement_checked = false;
  std::vector<sections::ReturnSample> returns;
  bool has_displacement_fit = false;
  DisplacementAudit displacement_fit;
  bool violated() const;
};

struct AuditOptions {
  int ns = 32, ntheta = 16;
  double tol = 1e-6;
  bool displacement_fit = true;  ///< round metric only
  std::size_t fit_samples = 16;
  double fit_T = 40.0;
  std::uint64_t seed = 1;
};

/// Perimeter, displacement window, return-time and α₊ bounds on a return grid.
GeometryAudit audit_geometry(const geometry::RevolutionMetric& metric, const AuditOptions& opt = {});

/// Fitted C in |Δs_total/2L − M(T, x)| ≤ C for the round lift, M counted with the page bound by γ̂_c.
DisplacementAudit horizontal_displacement_audit(const geometry::RevolutionMetric& metric, std::size_t samples,
                                                double T, std::uint64_t seed);

nlohmann::ordered_json to_json(const GeometryAudit& a);

struct LinkingSample {
  int link = 0;
  double ell = 0;         ///< link/(T·S)
  int link_min = 0, link_max = 0;  ///< over chord perturbations
  double error_bar = 0;   ///< (link_max − link_min)/(T·S)
  double gauss_gap = 0;
};

/// Finite-time proxy of the asymptotic linking of the orbits of p and q.
LinkingSample positive_linking_sample(const sections::S3Flow& flow, const Eigen::Vector4d& p, const Eigen::Vector4d& q,
                                      double T, double S, double min_distance = 1e-3);

} // namespace reeb::certify
