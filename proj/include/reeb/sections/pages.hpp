#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reeb/flow/events.hpp"
#include "reeb/sections/linking.hpp"
#include "reeb/sections/model.hpp"

namespace reeb::sections {

using Complex = std::complex<double>;

/// Page {arg w′ = φ} of the open book with binding {w′ = 0}, where
/// (z′, w′) = (⟨e₁, ·⟩, ⟨e₂, ·⟩) for the unitary frame e₁ = (z₀, w₀), e₂ = (−w̄₀, z̄₀).
/// The binding is the Hopf fibre through (z₀, w₀); the chart of the page is z′.
class DiskPage {
public:
  DiskPage(Complex z0 = 1.0, Complex w0 = 0.0, double phase = 0.0, std::string id = "page");

  /// Page of the fibre through an S³ point.
  static DiskPage hopf(const Eigen::Vector4d& binding_point, double phase = 0.0);

  std::pair<Complex, Complex> coords(const Eigen::Vector4d& s3) const;
  /// Im(e^{−iφ} w′): the section function.
  double section_function(const Eigen::Vector4d& s3) const;
  /// Re(e^{−iφ} w′) > 0 restricts the zero set to the page.
  bool on_page_side(const Eigen::Vector4d& s3) const;
  Complex chart(const Eigen::Vector4d& s3) const { return coords(s3).first; }
  /// Page point with chart coordinate c, |c| < 1.
  Eigen::Vector4d embed(Complex c) const;
  /// Binding orbit sampled as a closed polygon.
  Loop binding_loop(int n = 256) const;
  /// Distance of an S³ point from the binding, |w′|.
  double binding_distance(const Eigen::Vector4d& s3) const { return std::abs(coords(s3).second); }
  const std::string& id() const { return id_; }

private:
  Complex z0_, w0_;
  double phase_;
  std::string id_;
};

struct LinkOptions {
  double event_tol = 1e-9;       ///< endpoints closer than this to the page count as on it
  double search_cap = 100.0;     ///< maximal backward/forward search for page hits
  double loop_dt = 0.02;         ///< resampling step of the closed-up loop
  int chord_points = 64;
  double chord_bend = 0.0;       ///< normal offset of the chord midpoint in the chart
};

struct CrossingLink {
  int link = 0;                  ///< #crossings in I(T,x) − 1
  int crossings = 0;
  double t_minus = 0;            ///< t₋(x) ≤ 0
  double t_plus = 0;             ///< t₊(φᵀx) ≥ 0
  bool start_on_page = false;
  bool end_on_page = false;
  int negative_crossings = 0;    ///< crossings against the co-orientation
  int tangential = 0;
  std::vector<double> crossing_times;
  flow::Trajectory<5> arc;       ///< trajectory on [t₋, T + t₊]
};

/// Crossing-count linking of the closed-up arc φ^{[0,T]}(x) with the binding.
CrossingLink link_via_crossings(const S3Flow& flow, const DiskPage& page, const Eigen::Vector4d& x, double T,
                                double theta0 = 0.0, const LinkOptions& opt = {});

/// Closed loop k(T, x; D): the arc on I(T, x) followed by a straight chord in the page chart.
Loop closed_up_loop(const CrossingLink& cl, const DiskPage& page, const LinkOptions& opt = {});

/// Page crossings along a trajectory.
flow::CrossingReport<5> page_crossings(const flow::Trajectory<5>& traj, const DiskPage& page,
                                       double zero_tol = 1e-9);

struct TauStats {
  double tau_min = 0;
  double tau_max = 0;
  double refinement_gap = 0;     ///< change of (τ_min, τ_max) between the coarse and fine grid
  double min_transversality = 0; ///< smallest normalized crossing speed observed
  std::size_t samples = 0;
};

/// First-return times from a polar grid of page points (radii in (0, r_max]).
TauStats tau_stats(const S3Flow& flow, const DiskPage& page, int n_radii = 8, int n_angles = 16,
                   double r_max = 0.95, const LinkOptions& opt = {});

/// First return of the page point with chart coordinate c.
double first_return_time(const S3Flow& flow, const DiskPage& page, Complex c, const LinkOptions& opt = {});

} // namespace reeb::sections
