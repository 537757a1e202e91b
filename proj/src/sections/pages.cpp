#include "reeb/sections/pages.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reeb/util/errors.hpp"

namespace reeb::sections {

DiskPage::DiskPage(Complex z0, Complex w0, double phase, std::string id)
    : phase_(phase), id_(std::move(id)) {
  const double n = std::sqrt(std::norm(z0) + std::norm(w0));
  if (n == 0) throw PreconditionError("binding point must be nonzero");
  z0_ = z0 / n;
  w0_ = w0 / n;
}

DiskPage DiskPage::hopf(const Eigen::Vector4d& p, double phase) {
  return DiskPage(Complex(p[0], p[1]), Complex(p[2], p[3]), phase, "hopf_page");
}

std::pair<Complex, Complex> DiskPage::coords(const Eigen::Vector4d& s) const {
  const Complex z(s[0], s[1]), w(s[2], s[3]);
  return {std::conj(z0_) * z + std::conj(w0_) * w, -w0_ * z + z0_ * w};
}

double DiskPage::section_function(const Eigen::Vector4d& s) const {
  return (std::polar(1.0, -phase_) * coords(s).second).imag();
}

bool DiskPage::on_page_side(const Eigen::Vector4d& s) const {
  return (std::polar(1.0, -phase_) * coords(s).second).real() > 0;
}

Eigen::Vector4d DiskPage::embed(Complex c) const {
  const double r2 = std::norm(c);
  if (r2 >= 1) throw PreconditionError("chart point outside the open unit disk");
  const Complex wp = std::sqrt(1 - r2) * std::polar(1.0, phase_);
  // (z, w) = z′ e₁ + w′ e₂
  const Complex z = c * z0_ - wp * std::conj(w0_);
  const Complex w = c * w0_ + wp * std::conj(z0_);
  return {z.real(), z.imag(), w.real(), w.imag()};
}

Loop DiskPage::binding_loop(int n) const {
  Loop out;
  out.reserve(std::size_t(n));
  for (int k = 0; k < n; ++k) {
    const Complex e = std::polar(1.0, 2 * std::numbers::pi * k / n);
    const Complex z = e * z0_, w = e * w0_;
    out.emplace_back(z.real(), z.imag(), w.real(), w.imag());
  }
  return out;
}

flow::CrossingReport<5> page_crossings(const flow::Trajectory<5>& traj, const DiskPage& page, double zero_tol) {
  flow::EventOptions eo;
  eo.zero_tol = zero_tol;
  return flow::detect_crossings(
      traj, [&page](double, const OrbitState& y) { return page.section_function(y.head<4>()); },
      [&page](double, const OrbitState& y) { return page.on_page_side(y.head<4>()); }, page.id(), eo);
}

namespace {

// Page-hit times of a trajectory, in traversal order, with co-orientation counts.
struct Hits {
  std::vector<double> times;
  int negative = 0;
  int tangential = 0;
};

Hits hits_of(const flow::Trajectory<5>& tr, const DiskPage& page, double tol) {
  Hits h;
  auto rep = page_crossings(tr, page, tol);
  const double dir = tr.forward() ? 1.0 : -1.0;
  for (const auto& e : rep.events) {
    // co-orientation in forward time
    if (e.sign * dir < 0) ++h.negative;
    if (e.tangential) ++h.tangential;
    h.times.push_back(e.time);
  }
  return h;
}

bool on_page(const DiskPage& page, const Eigen::Vector4d& s, double tol) {
  return std::abs(page.section_function(s)) < tol && page.on_page_side(s);
}

} // namespace

CrossingLink link_via_crossings(const S3Flow& flow, const DiskPage& page, const Eigen::Vector4d& x, double T,
                                double theta0, const LinkOptions& opt) {
  if (page.binding_distance(x) < 1e-6) throw PreconditionError("arc starts on the binding");
  CrossingLink out;
  out.start_on_page = on_page(page, x, opt.event_tol);

  // t₋: last page hit at or before 0
  if (!out.start_on_page) {
    double span = std::min(opt.search_cap, 8.0);
    for (;;) {
      auto back = flow.orbit(x, theta0, 0.0, -span);
      auto h = hits_of(back, page, opt.event_tol);
      std::vector<double> ts;
      for (double t : h.times)
        if (t < 0) ts.push_back(t);
      if (!ts.empty()) {
        out.t_minus = *std::max_element(ts.begin(), ts.end());
        break;
      }
      if (span >= opt.search_cap) throw NotASectionError("no backward page hit within the search cap");
      span = std::min(2 * span, opt.search_cap);
    }
  }

  // forward from t₋ through T until the next hit at or after T
  const Eigen::Vector4d xs = x;
  double span = T - out.t_minus + std::min(opt.search_cap, 8.0);
  for (;;) {
    // start exactly at x and integrate backward part separately to keep x as a node
    flow::Trajectory<5> arc;
    if (out.t_minus < 0) {
      auto back = flow.orbit(xs, theta0, 0.0, out.t_minus);
      for (std::size_t i = back.size(); i-- > 0;) arc.push(back.t[i], back.y[i], back.dy[i]);
      arc.t.pop_back();
      arc.y.pop_back();
      arc.dy.pop_back();
    }
    auto fw = flow.orbit(xs, theta0, 0.0, span + out.t_minus);
    for (std::size_t i = 0; i < fw.size(); ++i) arc.push(fw.t[i], fw.y[i], fw.dy[i]);
    auto h = hits_of(arc, page, opt.event_tol);
    std::vector<double> ts = h.times;
    // make sure the endpoints on the page are represented exactly once
    if (out.start_on_page) {
      ts.erase(std::remove_if(ts.begin(), ts.end(), [](double t) { return std::abs(t) < 1e-7; }), ts.end());
      ts.push_back(0.0);
    } else {
      ts.erase(std::remove_if(ts.begin(), ts.end(), [&](double t) { return std::abs(t - out.t_minus) < 1e-7; }),
               ts.end());
      ts.push_back(out.t_minus);
    }
    std::sort(ts.begin(), ts.end());
    const Eigen::Vector4d xT = arc.at(T).head<4>();
    out.end_on_page = on_page(page, xT, opt.event_tol);
    double t_end = -1;
    if (out.end_on_page) {
      ts.erase(std::remove_if(ts.begin(), ts.end(), [&](double t) { return std::abs(t - T) < 1e-7; }), ts.end());
      ts.push_back(T);
      std::sort(ts.begin(), ts.end());
      t_end = T;
    } else {
      for (double t : ts)
        if (t > T) { t_end = t; break; }
    }
    if (t_end >= 0) {
      out.t_plus = t_end - T;
      out.crossing_times.clear();
      for (double t : ts)
        if (t >= out.t_minus - 1e-12 && t <= t_end + 1e-12) out.crossing_times.push_back(t);
      out.crossings = int(out.crossing_times.size());
      out.link = out.crossings - 1;
      out.negative_crossings = h.negative;
      out.tangential = h.tangential;
      // trim the arc to I(T, x)
      flow::Trajectory<5> trimmed;
      trimmed.options = arc.options;
      const auto a0 = arc.at(out.t_minus);
      trimmed.push(out.t_minus, a0, arc.dy[arc.segment(out.t_minus)]);
      for (std::size_t i = 0; i < arc.size(); ++i)
        if (arc.t[i] > out.t_minus + 1e-12 && arc.t[i] < t_end - 1e-12) trimmed.push(arc.t[i], arc.y[i], arc.dy[i]);
      trimmed.push(t_end, arc.at(t_end), arc.dy[arc.segment(t_end) + 1]);
      out.arc = std::move(trimmed);
      return out;
    }
    if (span >= T - out.t_minus + opt.search_cap) throw NotASectionError("no forward page hit within the search cap");
    span = std::min(2 * span, T - out.t_minus + opt.search_cap);
  }
}

Loop closed_up_loop(const CrossingLink& cl, const DiskPage& page, const LinkOptions& opt) {
  Loop loop;
  const auto& arc = cl.arc;
  const double a = arc.t.front(), b = arc.t.back();
  const int n = std::max(8, int(std::ceil((b - a) / opt.loop_dt)));
  for (int i = 0; i <= n; ++i) loop.push_back(arc.at(a + (b - a) * i / n).head<4>().normalized());
  // chord from the end point back to the start point inside the page
  const Complex c1 = page.chart(loop.back()), c0 = page.chart(loop.front());
  const Complex dir = c0 - c1;
  const Complex normal = std::abs(dir) > 0 ? Complex(0, 1) * dir / std::abs(dir) : Complex(0, 0);
  for (int k = 1; k < opt.chord_points; ++k) {
    const double u = double(k) / opt.chord_points;
    const Complex c = c1 + u * dir + opt.chord_bend * 4 * u * (1 - u) * normal;
    loop.push_back(page.embed(c));
  }
  return loop;
}

double first_return_time(const S3Flow& flow, const DiskPage& page, Complex c, const LinkOptions& opt) {
  const Eigen::Vector4d x = page.embed(c);
  double span = 8.0;
  for (;;) {
    auto tr = flow.orbit(x, 0.0, 0.0, span);
    for (double t : hits_of(tr, page, opt.event_tol).times)
      if (t > 1e-7) return t;
    if (span >= opt.search_cap) throw NotASectionError("no return to the page within the search cap");
    span = std::min(2 * span, opt.search_cap);
  }
}

TauStats tau_stats(const S3Flow& flow, const DiskPage& page, int n_radii, int n_angles, double r_max,
                   const LinkOptions& opt) {
  auto grid = [&](int nr, int na) {
    std::vector<double> taus;
    for (int i = 1; i <= nr; ++i)
      for (int j = 0; j < na; ++j) {
        const Complex c = std::polar(r_max * i / nr, 2 * std::numbers::pi * j / na);
        taus.push_back(first_return_time(flow, page, c, opt));
      }
    return taus;
  };
  const auto coarse = grid(std::max(1, n_radii / 2), std::max(1, n_angles / 2));
  const auto fine = grid(n_radii, n_angles);
  TauStats s;
  s.tau_min = *std::min_element(fine.begin(), fine.end());
  s.tau_max = *std::max_element(fine.begin(), fine.end());
  s.samples = fine.size();
  const double cmin = *std::min_element(coarse.begin(), coarse.end());
  const double cmax = *std::max_element(coarse.begin(), coarse.end());
  s.refinement_gap = std::max(std::abs(cmin - s.tau_min), std::abs(cmax - s.tau_max));
  // transversality: normalized rate of the section function at page points
  double worst = 1e300;
  for (int i = 1; i <= n_radii; ++i)
    for (int j = 0; j < n_angles; ++j) {
      const Eigen::Vector4d x = page.embed(std::polar(r_max * i / n_radii, 2 * std::numbers::pi * j / n_angles));
      auto tr = flow.orbit(x, 0.0, 0.0, 1e-3);
      const double g1 = page.section_function(tr.y.back().head<4>());
      worst = std::min(worst, g1 / 1e-3 / std::max(1e-12, page.binding_distance(x)));
    }
  s.min_transversality = worst;
  return s;
}

} // namespace reeb::sections
