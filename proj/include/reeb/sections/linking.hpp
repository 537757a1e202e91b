#pragma once

#include <vector>

#include <Eigen/Dense>

namespace reeb::sections {

/// Closed polygon on S³ ⊂ ℂ² in (x, y, u, v) coordinates; the last vertex
/// connects back to the first.
using Loop = std::vector<Eigen::Vector4d>;
/// Closed polygon in ℝ³.
using Loop3 = std::vector<Eigen::Vector3d>;

struct GaussLink {
  int value = 0;
  double raw = 0.0;
  double gap = 0.0;             ///< |raw − value|
  double min_distance = 0.0;    ///< between the two polygons in ℝ⁴
  Eigen::Vector4d pole;         ///< projection pole actually used
};

struct GaussOptions {
  double closure_tol = 1e-6;    ///< allowed |last − first| when the loop repeats its start
  double min_distance = 1e-3;
};

/// Gauss linking integral of two closed polygons in ℝ³ (exact per segment pair).
double gauss_linking_raw(const Loop3& a, const Loop3& b);

/// Stereographic projection from (0,0,0,1): (x, y, u)/(1 − v). Orientation preserving
/// for the complex orientation of S³.
Eigen::Vector3d stereographic(const Eigen::Vector4d& p);

/// Linking number of two disjoint loops on S³: rotate a far pole to (0,0,0,1)
/// by left quaternion multiplication, project, integrate.
GaussLink linking_gauss(const Loop& a, const Loop& b, const GaussOptions& opt = {});

/// Minimum distance between two polygons (segment to segment).
double polygon_distance(const Loop& a, const Loop& b);

/// Drops a duplicated closing vertex, checking the closure gap.
Loop closed_polygon(const Loop& a, double closure_tol);

} // namespace reeb::sections
