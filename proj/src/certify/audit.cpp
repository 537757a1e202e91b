#include "reeb/certify/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reeb/certify/thresholds.hpp"
#include "reeb/flow/events.hpp"
#include "reeb/lift/s3.hpp"
#include "reeb/sections/linking.hpp"
#include "reeb/sections/pages.hpp"
#include "reeb/util/errors.hpp"
#include "reeb/util/sampling.hpp"

namespace reeb::certify {

namespace {
constexpr double pi = std::numbers::pi;

// lower: measured ≥ bound; upper: measured ≤ bound
BoundCheck check(std::string name, double measured, double bound, bool lower, double tol) {
  BoundCheck b;
  b.name = std::move(name);
  b.measured = measured;
  b.bound = bound;
  b.slack = lower ? measured - bound : bound - measured;
  b.status = b.slack < -tol ? "violated" : (b.slack <= tol ? "tight" : "slack");
  return b;
}

double pos_mod(double x, double L) {
  double r = std::fmod(x, L);
  return r < 0 ? r + L : r;
}
} // namespace

bool GeometryAudit::violated() const {
  return std::any_of(checks.begin(), checks.end(), [](const BoundCheck& b) { return b.status == "violated"; });
}

GeometryAudit audit_geometry(const geometry::RevolutionMetric& metric, const AuditOptions& opt) {
  const double delta = metric.delta();
  if (!(delta > 0.25)) throw PreconditionError("geometry audit needs δ > 1/4");
  GeometryAudit a;
  a.c = metric.c();
  a.delta = delta;
  const sections::BirkhoffAnnulus ann(metric);
  const double k = metric.normalization_scale();
  a.L = ann.normalized_length();
  const double sd = std::sqrt(delta);
  a.checks.push_back(check("perimeter_lower", a.L, 2 * pi, true, opt.tol));
  a.checks.push_back(check("perimeter_upper", a.L, 2 * pi / sd, false, opt.tol));

  a.returns = sections::return_grid(ann, opt.ns, opt.ntheta);
  for (double th : {0.0, pi})
    for (int i = 0; i < opt.ns; ++i) a.returns.push_back(sections::return_map(ann, ann.length() * i / opt.ns, th));

  double tau_min = 1e300, arc_max = 0;
  for (const auto& r : a.returns) {
    tau_min = std::min(tau_min, r.tau * k);
    arc_max = std::max({arc_max, r.eta * k, r.nu * k});
  }
  a.checks.push_back(check("return_time_lower", tau_min, 2 * pi * (2 - 1 / sd), true, opt.tol));
  a.checks.push_back(check("alpha_arc_upper", arc_max, alpha_arc_bound(a.L, delta), false, opt.tol));

  if (delta > 4.0 / 9.0) {
    a.displacement_checked = true;
    const auto ds = sections::canonical_lift_displacement(ann, a.returns);
    double lo = 1e300, hi = -1e300;
    for (double d : ds) {
      lo = std::min(lo, d * k);
      hi = std::max(hi, d * k);
    }
    const auto w = displacement_window(a.L, delta);
    a.checks.push_back(check("displacement_window_lower", lo, w.lower, true, opt.tol));
    a.checks.push_back(check("displacement_window_upper", hi, w.upper, false, opt.tol));
    a.checks.push_back(check("displacement_open_lower", lo, 2 * a.L / 3, true, 0.0));
    a.checks.push_back(check("displacement_open_upper", hi, 1.5 * a.L, false, 0.0));
  }
  if (opt.displacement_fit && metric.c() == 1.0) {
    a.has_displacement_fit = true;
    a.displacement_fit = horizontal_displacement_audit(metric, opt.fit_samples, opt.fit_T, opt.seed);
  }
  return a;
}

DisplacementAudit horizontal_displacement_audit(const geometry::RevolutionMetric& metric, std::size_t samples, double T,
                                                std::uint64_t seed) {
  if (metric.c() != 1.0) throw PreconditionError("displacement fit uses the round lift");
  const sections::BirkhoffAnnulus ann(metric);
  const double L = ann.length();
  sections::LiftedGeodesicS3Flow flow(metric);
  // γ̂_c lifted is a Hopf fibre; its open book gives M
  const sections::DiskPage page = sections::DiskPage::hopf(ann.lifted_point(0.0, pi));
  DisplacementAudit out;
  out.T = T;
  std::size_t j = 0;
  while (out.samples < samples) {
    const Eigen::Vector4d x = util::halton_sphere3(++j, seed);
    if (page.binding_distance(x) < 0.05) continue;
    const auto base = lift::double_cover(metric, x);
    if (std::abs(base.p.z()) < 1e-3) continue;
    auto tr = flow.orbit(x, 0.0, 0.0, T);
    int M = 1;
    for (const auto& e : sections::page_crossings(tr, page).events)
      if (e.time > 0 && e.time <= T) ++M;
    // equator crossings of the foot point; Δs accumulates along c between annulus hits
    std::vector<double> psi;
    std::vector<int> up;
    flow::Trajectory<1> foot;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const auto u = lift::double_cover(metric, tr.y[i].head<4>().normalized());
      flow::State<1> z, dz;
      z << u.p.z();
      dz << u.v.z();
      foot.push(tr.t[i], z, dz);
    }
    auto rep = flow::detect_crossings(foot, [](double, const flow::State<1>& y) { return y[0]; },
                                      [](double, const flow::State<1>&) { return true; }, "equator");
    for (const auto& e : rep.events) {
      const auto u = lift::double_cover(metric, tr.at(e.time).head<4>().normalized());
      psi.push_back(std::atan2(u.p.y(), u.p.x()));
      up.push_back(e.sign);
    }
    double total = 0;
    std::size_t first = 0;
    while (first < up.size() && up[first] < 0) ++first;
    for (std::size_t i = first; i + 1 < psi.size(); ++i) total += pos_mod(psi[i + 1] - psi[i], L);
    out.C = std::max(out.C, std::abs(total / (2 * L) - M));
    ++out.samples;
  }
  return out;
}

nlohmann::ordered_json to_json(const GeometryAudit& a) {
  nlohmann::ordered_json j;
  j["c"] = a.c;
  j["delta"] = a.delta;
  j["L_normalized"] = a.L;
  j["returns"] = a.returns.size();
  j["displacement_checked"] = a.displacement_checked;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& b : a.checks)
    j["checks"].push_back({{"name", b.name}, {"measured", b.measured}, {"bound", b.bound}, {"slack", b.slack},
                           {"status", b.status}});
  if (a.has_displacement_fit)
    j["displacement_fit"] = {{"C", a.displacement_fit.C}, {"samples", a.displacement_fit.samples},
                             {"T", a.displacement_fit.T}};
  j["violated"] = a.violated();
  return j;
}

LinkingSample positive_linking_sample(const sections::S3Flow& flow, const Eigen::Vector4d& p, const Eigen::Vector4d& q,
                                      double T, double S, double min_distance) {
  if (T <= 0 || S <= 0) throw PreconditionError("times must be positive");
  auto arc = [&](const Eigen::Vector4d& x, double t) {
    auto tr = flow.orbit(x, 0.0, 0.0, t);
    sections::Loop l;
    const int n = std::max(16, int(std::ceil(t / 0.02)));
    for (int i = 0; i <= n; ++i) l.push_back(tr.at(t * i / n).head<4>().normalized());
    return l;
  };
  const sections::Loop ap = arc(p, T), aq = arc(q, S);
  {
    // open arcs: distance without the closing segments
    double d = 1e300;
    for (std::size_t i = 0; i + 1 < ap.size(); i += 4)
      for (std::size_t k = 0; k + 1 < aq.size(); k += 4) d = std::min(d, (ap[i] - aq[k]).norm());
    if (d < min_distance) throw PreconditionError("trajectories of p and q come too close");
  }
  // great-circle chord from the end back to the start, bent by a small normal offset
  auto closed = [](sections::Loop l, const Eigen::Vector4d& bend) {
    const Eigen::Vector4d a = l.back(), b = l.front();
    const int m = 32;
    for (int k = 1; k < m; ++k) {
      const double u = double(k) / m;
      l.push_back(((1 - u) * a + u * b + 4 * u * (1 - u) * bend).normalized());
    }
    return l;
  };
  LinkingSample r;
  const sections::Loop lp = closed(ap, Eigen::Vector4d::Zero()), lq = closed(aq, Eigen::Vector4d::Zero());
  const auto g = sections::linking_gauss(lp, lq, {1e-6, min_distance});
  r.link = g.value;
  r.gauss_gap = g.gap;
  r.link_min = r.link_max = r.link;
  const double eps = 1e-2;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d bend = eps * util::halton_sphere3(k + 1, 99);
    try {
      const auto gk = sections::linking_gauss(closed(ap, bend), closed(aq, -bend), {1e-6, min_distance});
      r.link_min = std::min(r.link_min, gk.value);
      r.link_max = std::max(r.link_max, gk.value);
      r.gauss_gap = std::max(r.gauss_gap, gk.gap);
    } catch (const PreconditionError&) {
      // this perturbation runs into the other loop; the others still bound the ambiguity
    }
  }
  r.ell = r.link / (T * S);
  r.error_bar = (r.link_max - r.link_min) / (T * S);
  return r;
}

} // namespace reeb::certify
