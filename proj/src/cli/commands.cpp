#include "reeb/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "reeb/certify/audit.hpp"
#include "reeb/certify/certificate.hpp"
#include "reeb/certify/kappa.hpp"
#include "reeb/certify/thresholds.hpp"
#include "reeb/sections/birkhoff.hpp"
#include "reeb/util/errors.hpp"

namespace reeb::cli {

namespace {

flow::IntegratorOptions integrator(const RunConfig& c) {
  flow::IntegratorOptions o;
  o.abs_tol = c.tol;
  o.rel_tol = c.tol;
  return o;
}

void write_file(const RunConfig& c, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(c.out);
  std::ofstream f(std::filesystem::path(c.out) / name, std::ios::binary);
  if (!f) throw Error("cannot write " + name);
  f << content;
}

nlohmann::ordered_json stamp(nlohmann::ordered_json j, const RunConfig& c) {
  j["config"] = c.source;
  j["config_hash"] = config_hash(c.source);
  j["tool_version"] = tool_version;
  return j;
}

void require_seed(const RunConfig& c, const std::string& criterion) {
  if (needs_seed(c, criterion) && !c.seed) throw ConfigError("criterion '" + criterion + "' samples and needs a seed");
}

certify::Certificate run_criterion(const RunConfig& c, const std::string& crit) {
  require_seed(c, crit);
  if (crit == "pinching") {
    if (c.family != "revolution") throw ConfigError("pinching applies to the revolution family");
    return certify::certify_pinching(geometry::RevolutionMetric(c.c));
  }
  if (crit == "convex") {
    if (c.family == "revolution") throw ConfigError("convex applies to convex bodies");
    certify::ConvexOptions o;
    o.kmin_budget = std::max<std::size_t>(c.budget, 1u << 14);
    auto cert = certify::certify_convex(make_body(c), sections::DiskPage(0.0, 1.0, 0.0, "page_z"), o);
    cert.seed = c.seed.value_or(0);
    if (c.family == "perturbed_ball") cert.flagged.push_back("page of the unperturbed flow continued numerically (heuristic)");
    return cert;
  }
  if (crit == "Ksigma") {
    const auto flow = make_flow(c);
    const auto page = kappa_page(c);
    sections::LinkOptions lo;
    lo.event_tol = c.event_tol;
    const auto tau = sections::tau_stats(*flow, page, 8, 16, 0.95, lo);
    double K = 0, Kerr = 0;
    if (c.family == "revolution") {
      const auto p = geometry::pinching(geometry::RevolutionMetric(c.c));
      K = std::min(1.0, p.k_min);
      Kerr = p.grid_error;
    } else {
      const auto km = convex::kmin(*make_body(c), std::max<std::size_t>(c.budget, 1u << 14));
      K = 2 * km.value;
      Kerr = 2 * km.error_bound;
    }
    certify::ErrorBudget err;
    err.sampling = Kerr * tau.tau_min + K * tau.refinement_gap;
    err.integration = K * 1e-8;
    auto cert = certify::certify_Ksigma(K, tau.tau_min, err);
    cert.inputs["flow"] = flow->name();
    cert.inputs["page"] = page.id();
    cert.seed = c.seed.value_or(0);
    if (c.family == "perturbed_ball") cert.flagged.push_back("page of the unperturbed flow continued numerically (heuristic)");
    return cert;
  }
  if (crit == "kappa") {
    const auto flow = make_flow(c);
    certify::KappaOptions o;
    o.samples = c.budget;
    o.seed = *c.seed;
    o.T_grid = c.T_grid;
    o.event_tol = c.event_tol;
    const auto e = certify::estimate_kappa(*flow, kappa_page(c), o);
    std::ostringstream csv;
    certify::write_kappa_csv(csv, e);
    write_file(c, "kappa_T.csv", csv.str());
    auto cert = certify::certify_kappa(e);
    cert.artifacts.push_back("kappa_T.csv");
    return cert;
  }
  throw ConfigError("unknown criterion '" + crit + "'");
}

int combine(int code, certify::Verdict v) {
  if (v == certify::Verdict::not_certified) return exit_not_certified;
  if (v == certify::Verdict::inconclusive && code == exit_ok) return exit_inconclusive;
  return code;
}

} // namespace

std::shared_ptr<const convex::ConvexBody> make_body(const RunConfig& c) {
  if (c.family == "hopf") return std::make_shared<convex::Ellipsoid>(1.0, 1.0);
  if (c.family == "ellipsoid") return std::make_shared<convex::Ellipsoid>(c.a[0], c.a[1]);
  if (c.family == "perturbed_ball") return std::make_shared<convex::PerturbedBall>(c.terms);
  throw ConfigError("family '" + c.family + "' is not a convex body");
}

std::shared_ptr<const sections::S3Flow> make_flow(const RunConfig& c) {
  if (c.family == "revolution")
    return std::make_shared<sections::LiftedGeodesicS3Flow>(geometry::RevolutionMetric(c.c), integrator(c));
  return std::make_shared<sections::ConvexS3Flow>(make_body(c), integrator(c));
}

sections::DiskPage kappa_page(const RunConfig& c) {
  if (c.family == "revolution") {
    const sections::BirkhoffAnnulus a{geometry::RevolutionMetric(c.c)};
    const auto p = a.lifted_point(0.0, 0.0);
    return sections::DiskPage(std::complex<double>(p[0], p[1]), std::complex<double>(p[2], p[3]), 0.0,
                              "lifted_equator_page");
  }
  return sections::DiskPage(1.0, 0.0, 0.0, "page_w");
}

int cmd_certify(const RunConfig& c, std::ostream& out) {
  if (c.criteria.empty()) throw ConfigError("no criteria given");
  int code = exit_ok;
  for (const auto& crit : c.criteria) {
    const auto cert = run_criterion(c, crit);
    write_file(c, crit + ".json", stamp(certify::to_json(cert), c).dump(2) + "\n");
    out << crit << ": " << certify::to_string(cert.verdict) << " (value " << std::setprecision(10) << cert.value
        << ", threshold " << cert.threshold << ", margin " << cert.margin << ", budget " << cert.error.total()
        << ")\n";
    code = combine(code, cert.verdict);
  }
  return code;
}

int cmd_audit(const RunConfig& c, std::ostream& out) {
  if (c.family != "revolution") throw ConfigError("audit applies to the revolution family");
  certify::AuditOptions o;
  o.ns = c.audit_ns;
  o.ntheta = c.audit_ntheta;
  o.seed = c.seed.value_or(1);
  const auto a = certify::audit_geometry(geometry::RevolutionMetric(c.c), o);
  std::ostringstream csv;
  sections::write_return_csv(csv, a.returns);
  write_file(c, "returns.csv", csv.str());
  auto j = certify::to_json(a);
  j["artifacts"] = {"returns.csv"};
  write_file(c, "audit.json", stamp(j, c).dump(2) + "\n");
  for (const auto& b : a.checks)
    out << b.name << ": " << b.status << " (measured " << std::setprecision(10) << b.measured << ", bound " << b.bound
        << ")\n";
  return a.violated() ? exit_not_certified : exit_ok;
}

int cmd_kappa(const RunConfig& c, std::ostream& out) {
  if (!c.seed) throw ConfigError("kappa samples and needs a seed");
  const auto flow = make_flow(c);
  certify::KappaOptions o;
  o.samples = c.budget;
  o.seed = *c.seed;
  o.T_grid = c.T_grid;
  o.event_tol = c.event_tol;
  const auto e = certify::estimate_kappa(*flow, kappa_page(c), o);
  std::ostringstream csv;
  certify::write_kappa_csv(csv, e);
  write_file(c, "kappa_T.csv", csv.str());
  auto cert = certify::certify_kappa(e);
  cert.artifacts.push_back("kappa_T.csv");
  nlohmann::ordered_json j;
  j["flow"] = e.flow;
  j["page"] = e.page;
  j["kappa_hat"] = e.kappa_hat;
  j["stabilization"] = e.stabilization;
  j["stabilized"] = e.stabilized;
  j["spread"] = e.spread;
  j["extrapolated"] = e.extrapolated;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : e.rows)
    j["rows"].push_back({{"T", r.T}, {"inf", r.inf}, {"link", r.link}, {"dtheta", r.dtheta}, {"closing", r.closing}});
  j["certificate"] = certify::to_json(cert);
  write_file(c, "kappa.json", stamp(j, c).dump(2) + "\n");
  out << "kappa_hat: " << std::setprecision(10) << e.kappa_hat << " (stabilization " << e.stabilization
      << ", verdict " << certify::to_string(cert.verdict) << ")\n";
  return combine(exit_ok, cert.verdict);
}

int cmd_delta_star(std::ostream& out) {
  const auto d = certify::delta_star();
  out << std::setprecision(17) << "x* = " << d.x << "\ndelta* = " << d.delta << "\nresidual = " << d.residual << "\n";
  return exit_ok;
}

} // namespace reeb::cli
