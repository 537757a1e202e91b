#include "reeb/sections/linking.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "reeb/lift/s3.hpp"
#include "reeb/util/errors.hpp"
#include "reeb/util/parallel.hpp"
#include "reeb/util/sampling.hpp"

namespace reeb::sections {

namespace {

double clamp_asin(double x) { return std::asin(std::clamp(x, -1.0, 1.0)); }

// Solid-angle contribution of two segments (Klenin & Langowski).
double segment_pair(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2, const Eigen::Vector3d& p3,
                    const Eigen::Vector3d& p4) {
  const Eigen::Vector3d r13 = p3 - p1, r14 = p4 - p1, r23 = p3 - p2, r24 = p4 - p2;
  Eigen::Vector3d n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
  for (auto& v : n) {
    const double len = v.norm();
    if (len < 1e-300) return 0.0;
    v /= len;
  }
  const double omega = clamp_asin(n[0].dot(n[1])) + clamp_asin(n[1].dot(n[2])) +
                       clamp_asin(n[2].dot(n[3])) + clamp_asin(n[3].dot(n[0]));
  const double s = (p4 - p3).cross(p2 - p1).dot(r13);
  if (s == 0.0) return 0.0;
  return (s > 0 ? omega : -omega) / (4 * std::numbers::pi);
}

double seg_seg_distance(const Eigen::Vector4d& p0, const Eigen::Vector4d& p1, const Eigen::Vector4d& q0,
                        const Eigen::Vector4d& q1) {
  const Eigen::Vector4d d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = d1.dot(d1), e = d2.dot(d2), f = d2.dot(r);
  double s = 0, t = 0;
  if (a <= 1e-300 && e <= 1e-300) return r.norm();
  if (a <= 1e-300) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 1e-300) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2), den = a * e - b * b;
      s = den > 1e-300 ? std::clamp((b * f - c * e) / den, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0) { t = 0; s = std::clamp(-c / a, 0.0, 1.0); }
      else if (t > 1) { t = 1; s = std::clamp((b - c) / a, 0.0, 1.0); }
    }
  }
  return (p0 + s * d1 - q0 - t * d2).norm();
}

} // namespace

double gauss_linking_raw(const Loop3& a, const Loop3& b) {
  const std::size_t n = a.size(), m = b.size();
  // per-row partial sums keep the reduction order fixed
  std::vector<double> rows(n, 0.0);
  util::parallel_for(n, [&](std::size_t i) {
    const auto& p1 = a[i];
    const auto& p2 = a[(i + 1) % n];
    double acc = 0;
    for (std::size_t j = 0; j < m; ++j) acc += segment_pair(p1, p2, b[j], b[(j + 1) % m]);
    rows[i] = acc;
  });
  double total = 0;
  for (double r : rows) total += r;
  return total;
}

Eigen::Vector3d stereographic(const Eigen::Vector4d& p) {
  return Eigen::Vector3d(p[0], p[1], p[2]) / (1.0 - p[3]);
}

Loop closed_polygon(const Loop& a, double closure_tol) {
  if (a.size() < 3) throw PreconditionError("loop needs at least three vertices");
  // repeated vertices would give zero-length segments
  Loop out;
  for (const auto& p : a)
    if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
  const double gap = (out.back() - out.front()).norm();
  if (gap < closure_tol && out.size() > 1) out.pop_back();
  if (out.size() < 3) throw PreconditionError("loop needs at least three distinct vertices");
  return out;
}

double polygon_distance(const Loop& a, const Loop& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<double> rows(n, 1e300);
  util::parallel_for(n, [&](std::size_t i) {
    double best = 1e300;
    for (std::size_t j = 0; j < m; ++j)
      best = std::min(best, seg_seg_distance(a[i], a[(i + 1) % n], b[j], b[(j + 1) % m]));
    rows[i] = best;
  });
  return *std::min_element(rows.begin(), rows.end());
}

GaussLink linking_gauss(const Loop& a0, const Loop& b0, const GaussOptions& opt) {
  const Loop a = closed_polygon(a0, opt.closure_tol), b = closed_polygon(b0, opt.closure_tol);
  GaussLink out;
  out.min_distance = polygon_distance(a, b);
  if (out.min_distance < opt.min_distance)
    throw PreconditionError("loops too close for a reliable linking number (distance " +
                            std::to_string(out.min_distance) + ")");
  // pole: the candidate farthest from every vertex
  double best = -1;
  Eigen::Vector4d pole(0, 0, 0, 1);
  for (std::uint64_t k = 0; k < 256; ++k) {
    const Eigen::Vector4d c = util::halton_sphere3(k);
    double d = 1e300;
    for (const auto& p : a) d = std::min(d, (p - c).squaredNorm());
    for (const auto& p : b) d = std::min(d, (p - c).squaredNorm());
    if (d > best) { best = d; pole = c; }
  }
  out.pole = pole;
  // Q·pole = N with N = (0,0,0,1); left multiplication lies in SO(4)
  const lift::Quaternion Q = lift::qmul(lift::Quaternion(0, 0, 0, 1), lift::qconj(pole));
  Loop3 pa, pb;
  pa.reserve(a.size());
  pb.reserve(b.size());
  for (const auto& p : a) pa.push_back(stereographic(lift::qmul(Q, p.normalized())));
  for (const auto& p : b) pb.push_back(stereographic(lift::qmul(Q, p.normalized())));
  out.raw = gauss_linking_raw(pa, pb);
  out.value = int(std::lround(out.raw));
  out.gap = std::abs(out.raw - out.value);
  return out;
}

} // namespace reeb::sections
