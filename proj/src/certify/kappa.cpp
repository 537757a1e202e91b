#include "reeb/certify/kappa.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "reeb/sections/linking.hpp"
#include "reeb/util/errors.hpp"
#include "reeb/util/parallel.hpp"
#include "reeb/util/sampling.hpp"

namespace reeb::certify {

namespace {
constexpr double two_pi = 2 * std::numbers::pi;

struct SampleResult {
  std::vector<double> dtheta;
  std::vector<int> link;
  int tangential = 0;
};

SampleResult run_sample(const sections::S3Flow& flow, const sections::DiskPage& page, const Eigen::Vector4d& x,
                        double theta0, const std::vector<double>& Ts, double event_tol) {
  const double Tmax = Ts.back();
  auto tr = flow.orbit(x, theta0, 0.0, Tmax);
  auto rep = sections::page_crossings(tr, page, event_tol);
  SampleResult r;
  for (const auto& e : rep.events)
    if (e.tangential) ++r.tangential;
  for (double T : Ts) {
    int count = 0;
    for (const auto& e : rep.events)
      if (e.time > 0 && e.time <= T) ++count;
    // hits in (0, T] plus the closing hits at t₋ and T + t₊, minus 1
    r.link.push_back(count + 1);
    r.dtheta.push_back(tr.at(T)[4] - theta0);
  }
  return r;
}

} // namespace

ErrorBudget KappaEstimate::budget() const {
  ErrorBudget b;
  b.integration = integration_error;
  b.closing = rows.empty() ? 0.0 : rows.back().closing;
  b.gauss_gap = gauss_gap;
  b.sampling = stabilization * std::abs(kappa_hat);
  return b;
}

std::pair<Eigen::Vector4d, double> kappa_sample(std::size_t j, std::uint64_t seed) {
  const util::CounterRng rng(seed, 7);
  const double shift = rng.uniform(0);
  double u = util::radical_inverse(j + 1, 7) + shift;
  u -= std::floor(u);
  return {util::halton_sphere3(j + 1, seed), two_pi * u};
}

KappaEstimate estimate_kappa(const sections::S3Flow& flow, const sections::DiskPage& page, const KappaOptions& opt) {
  if (opt.T_grid.size() < 2) throw PreconditionError("need at least two T values");
  if (!std::is_sorted(opt.T_grid.begin(), opt.T_grid.end()) || opt.T_grid.front() <= 0)
    throw PreconditionError("T grid must be positive and increasing");
  if (opt.samples == 0) throw PreconditionError("empty sample budget");
  KappaEstimate e;
  e.flow = flow.name();
  e.page = page.id();
  e.samples = opt.samples;
  e.seed = opt.seed;
  // deterministic choice of sample indices away from the binding
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; idx.size() < opt.samples; ++j)
    if (page.binding_distance(kappa_sample(j, opt.seed).first) > opt.binding_margin) idx.push_back(j);
  const auto results = util::parallel_map<SampleResult>(idx.size(), [&](std::size_t k) {
    const auto [x, th] = kappa_sample(idx[k], opt.seed);
    return run_sample(flow, page, x, th, opt.T_grid, opt.event_tol);
  });
  int tangential = 0;
  for (const auto& r : results) tangential += r.tangential;
  if (tangential > 0) e.flagged.push_back(std::to_string(tangential) + " tangential page crossings");
  for (std::size_t t = 0; t < opt.T_grid.size(); ++t) {
    KappaRow row;
    row.T = opt.T_grid[t];
    row.inf = 1e300;
    for (std::size_t k = 0; k < results.size(); ++k) {
      const int L = results[k].link[t];
      if (L < 1) continue;
      const double q = results[k].dtheta[t] / L;
      if (q < row.inf) {
        row.inf = q;
        row.argmin = idx[k];
        row.link = L;
        row.dtheta = results[k].dtheta[t];
      }
    }
    const double lo = row.link > 1 ? row.dtheta / (row.link - 1) : row.dtheta;
    const double hi = row.dtheta / (row.link + 1);
    row.closing = std::max(std::abs(lo - row.inf), std::abs(hi - row.inf));
    e.rows.push_back(row);
  }
  for (std::size_t t = 0; t + 1 < e.rows.size(); ++t) {
    // Richardson in 1/T for a doubling grid; general ratio r: (r κ₂ − κ₁)/(r − 1)
    const double r = e.rows[t + 1].T / e.rows[t].T;
    e.extrapolated.push_back((r * e.rows[t + 1].inf - e.rows[t].inf) / (r - 1));
  }
  e.kappa_hat = e.extrapolated.back();
  if (e.extrapolated.size() >= 2) {
    const double a = e.extrapolated[e.extrapolated.size() - 2], b = e.extrapolated.back();
    e.stabilization = std::abs(b - a) / std::abs(b);
  } else {
    e.stabilization = std::abs(e.rows.back().inf - e.rows.front().inf) / std::abs(e.rows.back().inf);
  }
  e.stabilized = e.stabilization < opt.stabilization_tol;
  {
    const std::size_t n = e.rows.size(), m = std::min<std::size_t>(3, n);
    double lo = 1e300, hi = -1e300;
    for (std::size_t t = n - m; t < n; ++t) {
      lo = std::min(lo, e.rows[t].inf);
      hi = std::max(hi, e.rows[t].inf);
    }
    e.spread = hi - lo;
  }
  // Gauss cross-check of the denominators on the first T
  for (int k = 0; k < opt.gauss_checks && std::size_t(k) < idx.size(); ++k) {
    const auto [x, th] = kappa_sample(idx[std::size_t(k)], opt.seed);
    sections::LinkOptions lo;
    lo.event_tol = opt.event_tol;
    const auto cl = sections::link_via_crossings(flow, page, x, opt.T_grid.front(), th, lo);
    const auto g = sections::linking_gauss(sections::closed_up_loop(cl, page), page.binding_loop());
    e.gauss_gap = std::max(e.gauss_gap, g.gap);
    if (g.value != cl.link || cl.link != results[std::size_t(k)].link.front()) ++e.gauss_mismatches;
  }
  if (e.gauss_mismatches > 0) e.flagged.push_back("crossing and Gauss linking disagree on some arcs");
  // integration error: rerun the last minimizer at 1/100 of the tolerance
  {
    const auto& last = e.rows.back();
    const auto [x, th] = kappa_sample(last.argmin, opt.seed);
    const auto again = run_sample(*flow.with_tolerance(0.01), page, x, th, {last.T}, opt.event_tol);
    e.integration_error = std::abs(again.dtheta.front() / again.link.front() - last.inf);
  }
  return e;
}

Certificate certify_kappa(const KappaEstimate& e) {
  Certificate c;
  c.criterion = "kappa";
  c.inputs["flow"] = e.flow;
  c.inputs["page"] = e.page;
  c.inputs["samples"] = e.samples;
  c.inputs["T_grid"] = nlohmann::ordered_json::array();
  for (const auto& r : e.rows) c.inputs["T_grid"].push_back(r.T);
  c.seed = e.seed;
  c.measured["kappa_hat"] = e.kappa_hat;
  c.measured["stabilization"] = e.stabilization;
  c.measured["spread"] = e.spread;
  c.measured["inf_at_T_max"] = e.rows.back().inf;
  c.measured["gauss_mismatches"] = e.gauss_mismatches;
  c.value = e.kappa_hat;
  c.threshold = two_pi;
  c.error = e.budget();
  c.flagged = e.flagged;
  finalize(c);
  if (!e.stabilized) {
    c.verdict = Verdict::inconclusive;
    c.flagged.push_back("estimate not stabilized");
  }
  return c;
}

void write_kappa_csv(std::ostream& os, const KappaEstimate& e) {
  os << "T,inf,link,dtheta,closing\n" << std::setprecision(12);
  for (const auto& r : e.rows) os << r.T << ',' << r.inf << ',' << r.link << ',' << r.dtheta << ',' << r.closing << '\n';
}

} // namespace reeb::certify
