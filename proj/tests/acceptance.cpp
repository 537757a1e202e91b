// One line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "reeb/certify/audit.hpp"
#include "reeb/certify/certificate.hpp"
#include "reeb/certify/kappa.hpp"
#include "reeb/certify/thresholds.hpp"
#include "reeb/convex/body.hpp"
#include "reeb/convex/reeb_flow.hpp"
#include "reeb/geometry/geodesic.hpp"
#include "reeb/lift/s3.hpp"
#include "reeb/sections/florio.hpp"
#include "reeb/sections/linking.hpp"
#include "reeb/sections/model.hpp"
#include "reeb/sections/pages.hpp"
#include "reeb/sections/birkhoff.hpp"
#include "reeb/sections/rotation.hpp"
#include "reeb/sections/winding_sum.hpp"
#include "reeb/util/sampling.hpp"

using namespace reeb;
using std::numbers::pi;
using C = std::complex<double>;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %-28s %s  %s (%.1fs)\n", id, name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(),
              sec);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

std::shared_ptr<const sections::S3Flow> convex_flow(std::shared_ptr<const convex::ConvexBody> b) {
  return std::make_shared<sections::ConvexS3Flow>(std::move(b));
}

std::shared_ptr<const convex::ConvexBody> ball() { return std::shared_ptr<const convex::ConvexBody>(convex::unit_ball()); }

Outcome delta_star() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = certify::delta_star();
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = d.x > 0.84 && d.x < 0.85 && d.delta < 0.7225 && d.residual < 1e-14 && ms < 1.0;
  return {ok, fmt("x*=%.15f delta*=%.15f |P|=%.1e t=%.3fms", d.x, d.delta, d.residual, ms)};
}

Outcome round_ball() {
  auto c = certify::certify_convex(ball(), sections::DiskPage());
  const double K = c.measured["K_min"], tau = c.measured["tau_min"];
  const bool ok = K == 2.0 && std::abs(tau - pi) < 1e-6 && std::abs(c.value - 2 * pi) < 1e-5 &&
                  std::abs(c.margin - pi) < 1e-5 && c.verdict == certify::Verdict::certified;
  return {ok, fmt("K_min=%.17g tau_min=%.10f product=%.10f margin=%.10f", K, tau, c.value, c.margin)};
}

Outcome ellipsoids() {
  bool ok = true;
  std::string d;
  for (double b : {1.5, 2.5}) {
    auto c = certify::certify_convex(std::make_shared<convex::Ellipsoid>(1.0, b), sections::DiskPage(0.0, 1.0));
    // linear flow: K_min = 2/b, short return π
    const double oracle = 2 * pi / b;
    const auto want = b < 2 ? certify::Verdict::certified : certify::Verdict::not_certified;
    ok = ok && std::abs(c.value - oracle) < 1e-6 && c.verdict == want;
    d += fmt("E(1,%.1f) %s |dev|=%.1e  ", b, certify::to_string(c.verdict).c_str(), std::abs(c.value - oracle));
  }
  return {ok, d};
}

Outcome salomao() {
  std::vector<std::shared_ptr<const convex::ConvexBody>> bodies{
      ball(), std::make_shared<convex::Ellipsoid>(1.0, 1.5),
      std::make_shared<convex::PerturbedBall>(
          std::vector<convex::PerturbedBall::Term>{{0.05, {4, 0, 0, 0}}, {-0.05, {0, 4, 0, 0}}})};
  util::CounterRng rng(17);
  bool ok = true;
  std::string d;
  for (const auto& b : bodies) {
    const double km = convex::kmin(*b).value;
    double worst = 1e300;
    for (std::uint64_t i = 0; i < 10000; ++i) {
      const auto z = b->boundary_point(util::sphere3_from_unit_cube(rng.uniform(4 * i), rng.uniform(4 * i + 1),
                                                                      rng.uniform(4 * i + 2)));
      const double th = 2 * pi * rng.uniform(4 * i + 3);
      worst = std::min(worst, convex::linearized_angle_rate(*b, z, {std::cos(th), std::sin(th)}));
    }
    ok = ok && worst >= 2 * km - 1e-5;
    d += fmt("min=%.6f 2K=%.6f  ", worst, 2 * km);
  }
  return {ok, d};
}

Outcome jacobi() {
  double rel = 0;
  for (double K : {0.25, 1.0, 4.0}) {
    const double s = std::sqrt(K);
    for (int i = 1; i <= 100; ++i) {
      const double t = 0.1 * i;
      const auto b = geometry::jacobi_evolve([K](double) { return K; }, {0, 1}, t);
      rel = std::max(rel, std::abs(b[0] - std::sin(s * t) / s) * s);
    }
  }
  // frame angle gain between min(1,K_min)·T and max(1,K_max)·T
  util::CounterRng rng(23);
  double viol = 0;
  for (int k = 0; k < 100; ++k) {
    const geometry::RevolutionMetric m(k % 2 ? 0.9 : 1.1);
    const auto x = geometry::unit_tangent(m, (rng.uniform(4 * k) - 0.5) * 2.5, 2 * pi * rng.uniform(4 * k + 1),
                                          2 * pi * rng.uniform(4 * k + 2));
    const double T = 15.0;
    auto tr = geometry::geodesic_jacobi_flow(m, x, 0.0, 1.0, 2 * pi * rng.uniform(4 * k + 3), T);
    const double gain = tr.y.back()[8] - tr.y.front()[8];
    const double lo = std::min(1.0, m.k_min()) * T, hi = std::max(1.0, m.k_max()) * T;
    viol = std::max({viol, lo - gain, gain - hi});
  }
  return {rel < 1e-8 && viol <= 1e-6, fmt("jacobi rel err=%.2e  rate bound violation=%.2e", rel, viol)};
}

Outcome factor_four() {
  util::CounterRng rng(29);
  double worst = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto Z = util::sphere3_from_unit_cube(rng.uniform(7 * i), rng.uniform(7 * i + 1), rng.uniform(7 * i + 2));
    Eigen::Vector4d a(rng.uniform(7 * i + 3) - 0.5, rng.uniform(7 * i + 4) - 0.5, rng.uniform(7 * i + 5) - 0.5,
                      rng.uniform(7 * i + 6) - 0.5);
    a -= a.dot(Z) * Z;
    worst = std::max(worst, std::abs(lift::pullback_factor_round(Z, a)));
  }
  const geometry::RevolutionMetric round(1.0);
  const geometry::UnitTangent eq{{1, 0, 0}, {0, 1, 0}};
  auto twice = lift::lift_path(round, geometry::geodesic_flow(round, eq, 4 * pi), lift::double_cover_inverse(round, eq));
  const double gap = twice.closure_gap();
  return {worst < 1e-6 && gap < 1e-6, fmt("max |D0*l - 4 l0|=%.2e  double equator gap=%.2e", worst, gap)};
}

Outcome linking() {
  int agree = 0, total = 0;
  double gap = 0;
  util::CounterRng rng(31);
  auto hopf = convex_flow(ball());
  auto ell = convex_flow(std::make_shared<convex::Ellipsoid>(1.0, 1.5));
  const sections::DiskPage hp, ep(0.0, 1.0);
  for (std::uint64_t k = 0; total < 20 && k < 200; ++k) {
    const bool h = total % 2 == 0;
    const auto& page = h ? hp : ep;
    const auto x = util::halton_sphere3(k + 1, 41);
    if (page.binding_distance(x) < 0.1) continue;
    const double T = 2 + 20 * rng.uniform(k);
    auto cl = sections::link_via_crossings(h ? *hopf : *ell, page, x, T);
    auto g = sections::linking_gauss(sections::closed_up_loop(cl, page), page.binding_loop());
    ++total;
    agree += g.value == cl.link;
    gap = std::max(gap, g.gap);
  }
  auto fibre = [](const Eigen::Vector4d& p) {
    sections::Loop l;
    for (int k = 0; k < 200; ++k) {
      const C e = std::polar(1.0, 2 * pi * k / 200);
      const C z = e * C(p[0], p[1]), w = e * C(p[2], p[3]);
      l.emplace_back(z.real(), z.imag(), w.real(), w.imag());
    }
    return l;
  };
  const auto f = sections::linking_gauss(fibre(Eigen::Vector4d(1, 0, 0, 0)), fibre(Eigen::Vector4d(0.6, 0, 0.8, 0)));
  const bool ok = agree == 20 && total == 20 && gap < 1e-3 && f.value == 1 && f.gap < 1e-3;
  return {ok, fmt("arcs agree %d/%d max gap=%.1e  fibres link %d (gap %.1e)", agree, total, gap, f.value, f.gap)};
}

Outcome winding_sum() {
  auto hopf = convex_flow(ball());
  const sections::DiskPage page;
  util::CounterRng rng(37);
  int done = 0, exact = 0;
  double gap = 0;
  for (std::uint64_t k = 0; done < 20 && k < 100; ++k) {
    const C cp = std::polar(0.85 * std::sqrt(rng.uniform(6 * k)), 2 * pi * rng.uniform(6 * k + 1));
    const C cq = std::polar(0.85 * std::sqrt(rng.uniform(6 * k + 2)), 2 * pi * rng.uniform(6 * k + 3));
    if (std::abs(cp - cq) < 0.05) continue;
    const int mp = 1 + int(3 * rng.uniform(6 * k + 4)), mq = 1 + int(3 * rng.uniform(6 * k + 5));
    auto r = sections::winding_sum_identity(*hopf, page, page.embed(cp), mp, page.embed(cq), mq);
    ++done;
    exact += std::lround(r.winding_sum) == r.gauss && std::abs(r.winding_sum - r.gauss) < 1e-6;
    gap = std::max(gap, r.gauss_gap);
  }
  return {done == 20 && exact == 20, fmt("exact %d/%d  max gauss gap=%.1e", exact, done, gap)};
}

Outcome kappa() {
  certify::KappaOptions o; // 256 samples, T up to 200
  auto h = certify::estimate_kappa(*convex_flow(ball()), sections::DiskPage::hopf(Eigen::Vector4d(1, 0, 0, 0)), o);
  const geometry::RevolutionMetric m(1.0);
  sections::LiftedGeodesicS3Flow lifted(m);
  auto r = certify::estimate_kappa(lifted, sections::DiskPage::hopf(sections::BirkhoffAnnulus{m}.lifted_point(0, 0)), o);
  const auto hc = certify::certify_kappa(h), rc = certify::certify_kappa(r);
  const bool hopf_ok = std::abs(h.kappa_hat / (2 * pi) - 1) < 0.05;
  const bool round_ok = std::abs(r.kappa_hat / (4 * pi) - 1) < 0.05;
  const bool stab = h.stabilization < 0.02 && r.stabilization < 0.02;
  const bool verdicts = rc.verdict == certify::Verdict::certified && hc.verdict == certify::Verdict::inconclusive;
  return {hopf_ok && round_ok && stab && verdicts,
          fmt("hopf=%.4f (2pi target %s, stab %.2f%%, %s)  round lift=%.4f (4pi target %s, stab %.2f%%, %s)",
              h.kappa_hat, hopf_ok ? "ok" : "missed", 100 * h.stabilization, certify::to_string(hc.verdict).c_str(),
              r.kappa_hat, round_ok ? "ok" : "missed", 100 * r.stabilization, certify::to_string(rc.verdict).c_str())};
}

Outcome audits() {
  bool ok = true;
  std::string d;
  for (double c : {0.95, 1.0}) {
    certify::AuditOptions o;
    o.displacement_fit = false;
    auto a = certify::audit_geometry(geometry::RevolutionMetric(c), o);
    int bad = 0;
    for (const auto& b : a.checks) bad += b.status == "violated";
    ok = ok && bad == 0 && a.displacement_checked && !a.checks.empty();
    d += fmt("c=%.2f %zu checks %d violated  ", c, a.checks.size(), bad);
  }
  return {ok, d};
}

Outcome rotation() {
  auto hopf = convex_flow(ball());
  const sections::PeriodicOrbit fib{Eigen::Vector4d(1, 0, 0, 0), pi};
  const double seif = sections::rotation_number(*hopf, fib, sections::Framing::seifert).value;
  bool ok = std::abs(seif - 1) < 1e-4;
  double worst = 0;
  for (double b : {1.2, 1.5, 1.9}) {
    auto ell = convex_flow(std::make_shared<convex::Ellipsoid>(1.0, b));
    const double rho = sections::rotation_number(*ell, fib, sections::Framing::model).value;
    worst = std::max(worst, std::abs(rho - (1 + 1 / b)));
    ok = ok && sections::cz_index(rho, 1).value == 3;
  }
  ok = ok && worst < 1e-4;
  double res = 0;
  std::vector<sections::PeriodicOrbit> orbits;
  for (int k = 0; k < 3; ++k) orbits.push_back({util::halton_sphere3(k + 4, 2), pi});
  for (std::size_t n : {2u, 3u}) {
    std::vector<sections::PeriodicOrbit> sub(orbits.begin(), orbits.begin() + n);
    for (const auto& r : sections::rotation_additivity_check(*hopf, sub)) res = std::max(res, r.residual);
  }
  ok = ok && res < 5e-3;
  return {ok, fmt("hopf seifert=%.8f  E(1,b) max dev=%.1e  additivity residual=%.1e", seif, worst, res)};
}

Outcome florio() {
  const double w = 1.7, T = 5.0;
  sections::IsotopyPath rot = [w](C z) {
    return std::function<C(double)>([z, w](double t) { return std::polar(1.0, w * t) * z; });
  };
  auto lin = sections::florio_check(rot, C(0.1, 0.2), C(-0.3, 0.4), T);
  const double lin_err = std::max(std::abs(lin.right_min - lin.left), std::abs(lin.right_max - lin.left));
  auto hopf = convex_flow(ball());
  const sections::DiskPage page;
  sections::IsotopyPath f = [&](C z) {
    auto tr = std::make_shared<flow::Trajectory<5>>(hopf->orbit(page.embed(z), 0.0, 0.0, 3 * pi));
    return std::function<C(double)>([tr, &page](double t) { return page.chart(tr->at(t).head<4>()); });
  };
  util::CounterRng rng(43);
  int contained = 0;
  double gap = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const C x = std::polar(0.8 * std::sqrt(rng.uniform(4 * k)), 2 * pi * rng.uniform(4 * k + 1));
    const C y = std::polar(0.8 * std::sqrt(rng.uniform(4 * k + 2)), 2 * pi * rng.uniform(4 * k + 3));
    auto r = sections::florio_check(f, x, y, 3 * pi, 64, 1e-5);
    contained += r.contained;
    gap = std::max(gap, r.gap);
  }
  return {lin_err < 1e-8 && lin.contained && contained == 20 && gap < 0.01,
          fmt("linear err=%.1e  hopf contained %d/20 max gap=%.1e", lin_err, contained, gap)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "reeb_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.json")
      << R"({"family":"perturbed_ball","terms":[{"c":0.04,"e":[4,0,0,0]}],)"
         R"("criteria":["convex","Ksigma","kappa"],"seed":11,"budget":24,"T_grid":[20,40,80]})";
  int codes[2];
  for (int r = 0; r < 2; ++r) {
    const std::string cmd = std::string(REEB_CERT_PATH) + " certify --config " + (dir / "config.json").string() +
                            " --out " + (dir / ("run" + std::to_string(r))).string() + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    codes[r] = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  }
  int same = 0, files = 0;
  for (const auto& e : fs::directory_iterator(dir / "run0")) {
    ++files;
    const auto other = dir / "run1" / e.path().filename();
    same += fs::exists(other) && slurp(e.path()) == slurp(other);
  }
  const bool ok = codes[0] == codes[1] && codes[0] != 1 && files >= 4 && same == files;
  return {ok, fmt("exit codes %d/%d  identical files %d/%d", codes[0], codes[1], same, files)};
}

} // namespace

int main() {
  report(1, "delta-star", delta_star);
  report(2, "round ball boundary case", round_ball);
  report(3, "ellipsoid verdicts", ellipsoids);
  report(4, "salomao bound", salomao);
  report(5, "jacobi oracle", jacobi);
  report(6, "factor-4 lift", factor_four);
  report(7, "linking double computation", linking);
  report(8, "winding-sum identity", winding_sum);
  report(9, "kappa oracles", kappa);
  report(10, "geometric audits", audits);
  report(11, "rotation numbers", rotation);
  report(12, "florio property", florio);
  report(13, "reproducibility", reproducibility);
  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
