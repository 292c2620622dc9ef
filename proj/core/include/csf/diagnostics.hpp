#pragma once

// Single-time-slice quantities of the evolving figure-eight in the
// tangent-angle coordinate theta = -(tangent angle of the arc), which runs
// from -alpha at the double point to pi/2 at the rightmost point. The outward
// normal at angle theta is n(theta) = (sin theta, cos theta).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csf/flow.hpp"
#include "csf/geometry.hpp"

namespace csf {

struct ThetaSample {
  double theta = 0.0;
  double kappa = 0.0;
  double kappa_theta = 0.0;
};

/// Curvature as a function of theta on (-alpha, pi/2]. Queries beyond pi/2
/// use the reflection kappa(pi - theta) = kappa(theta).
class ThetaProfile {
 public:
  ThetaProfile() = default;
  /// Throws PreconditionViolated unless theta is strictly increasing.
  explicit ThetaProfile(std::vector<ThetaSample> samples);

  std::span<const ThetaSample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double theta_min() const { return samples_.front().theta; }
  double theta_max() const { return samples_.back().theta; }
  double kappa_right() const { return samples_.back().kappa; }

  /// Linear interpolation in theta on [theta_min, pi - theta_min].
  double kappa(double theta) const;
  double kappa_theta(double theta) const;

  /// Samples on the reflected range, theta in (-alpha, pi + alpha).
  std::vector<ThetaSample> extended() const;

 private:
  std::vector<ThetaSample> samples_;
  std::vector<double> theta_;
  std::vector<double> kappa_;
  std::vector<double> kappa_theta_;
};

ThetaProfile theta_profile(const QuarterArc& arc);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ReaperGap {
  double gap_F = 0.0;
  double gap_Ftheta = 0.0;
};

/// sup over J of |F - sin| and |F_theta - cos| with F = kappa / kappa(pi/2).
ReaperGap grim_reaper_gap(const ThetaProfile& profile, Interval J);

struct SupportProfile {
  std::vector<double> theta;
  std::vector<double> p;
  std::vector<double> p_theta;
  /// max over the window of |kappa (p + p_theta_theta) - 1|.
  double residual = 0.0;
  /// max vertex distance between C and p n + p_theta n_theta.
  double reconstruction_error = 0.0;
};

/// Default residual window theta in [0, pi/2], where the curvature is
/// bounded away from the zero at the double point.
SupportProfile support_profile(const QuarterArc& arc, double theta_window_lo = 0.0);

/// Relative mismatch of Y kappa(pi/2) = int_0^{pi/2} sin(phi) / F(phi) dphi.
/// Trapezoid rule on the profile samples over [eps_q, pi/2]; [0, eps_q] is
/// covered by the integrand value at eps_q times eps_q.
double integral_identity_residual(const ThetaProfile& profile, double Y, double kappa_right,
                                  double eps_q);

/// Cutoff used by the trace: the first sampled theta above zero (at most 0.05).
double default_quadrature_cutoff(const ThetaProfile& profile);

struct NodeProfile {
  std::vector<double> theta;  ///< extended range (-alpha, pi + alpha)
  std::vector<double> nu;     ///< P/2 - K
  std::vector<double> P;
  std::vector<double> K;
  std::size_t zero_count = 0;
  bool nodal_estimate_ok = false;
  /// True when the unit-length initial subarc of the rescaled curve lies in
  /// the open positive quadrant (the estimate's hypothesis).
  bool subarc_in_quadrant = false;
};

/// Node function of the parabolically rescaled curve D = C / sqrt(T - t).
/// Throws PreconditionViolated if t >= T_hat.
NodeProfile node_profile(const QuarterArc& arc, double t, double T_hat);
/// Same, given T - t directly.
NodeProfile node_profile_remaining(const QuarterArc& arc, double remaining);

/// Number of strict sign alternations; a zero (within 1e-12 of the largest
/// magnitude) inherits the previous sign.
/// A lower bound on the zero count with multiplicity.
std::size_t count_sign_changes(std::span<const double> samples);

struct SineComparator {
  double B = 0.0;
  double phi = 0.0;
  std::size_t zeros = 0;
};

/// Matches S(theta) = sqrt(B) sin(phi + theta) to kappa and kappa_theta at
/// theta_star and counts sign changes of kappa - S over the profile range
/// (the extended range when `extended` is set).
SineComparator sine_comparator(const ThetaProfile& profile, double theta_star, bool extended = false);

struct TraceRecord {
  double t = 0.0;
  double T_hat = 0.0;
  double A = 0.0;
  double X = 0.0;
  double Y = 0.0;
  double alpha = 0.0;
  double kappa_top = 0.0;
  double kappa_right = 0.0;
  double beta = 0.0;
  double ell = 0.0;
  double gr_gap_F = 0.0;
  double gr_gap_Ftheta = 0.0;
  double support_residual = 0.0;
  double integral_residual = 0.0;
  std::size_t node_zero_count = 0;
  double bowtie_dist = 0.0;
  double migration_x = 0.0;
  double migration_y = 0.0;
  // Extensions consumed by the verifier.
  double box_area = 0.0;
  double kappa_theta_min = 0.0;
  double convex_margin = 0.0;
  bool nodal_ok = false;
  std::size_t step = 0;
  std::size_t vertices = 0;
  /// T_hat - t evaluated without cancellation.
  double T_minus_t = 0.0;
  /// -dA/dt by finite difference against the previous row (NaN on the first).
  double area_rate = 0.0;
};

/// Field names in CSV column order.
std::span<const char* const> trace_columns();

struct DiagOptions {
  Interval J{0.7853981633974483, 2.356194490192345};
  std::uint64_t rng_seed = 0;
  /// Sampling spacing for the bowtie distance in box-normalised units.
  double bowtie_eps = 2e-3;
};

/// One row of diagnostics. Throws PreconditionViolated if t >= T_hat.
TraceRecord diag_record(const FlowState& state, double T_hat, const DiagOptions& opts = {});
/// Same, given T_hat - t directly; preferred close to the vanishing time,
/// where t itself no longer resolves T_hat - t.
TraceRecord diag_record_remaining(const FlowState& state, double remaining, const DiagOptions& opts = {});

/// beta = X / ((T - t) kappa(pi/2)); ell = log X - log(T - t) / 2.
double beta_of(double X, double T_minus_t, double kappa_right);
double ell_of(double X, double T_minus_t);

struct ParabolicResiduals {
  double nodal = 0.0;  ///< max |nu_tau - K^2 nu_thth - (K^2 + 1/2) nu| on the window
  double angle = 0.0;  ///< max |K_tau + K/2 - K^2 K_thth - K^3|
};

/// Finite-difference check of the rescaled evolution equations between two
/// snapshots. Very sensitive to the vanishing-time estimate; no threshold
/// is attached to it.
ParabolicResiduals parabolic_residuals(const FlowState& earlier, const FlowState& later, double T_hat,
                                       Interval window);

}  // namespace csf
