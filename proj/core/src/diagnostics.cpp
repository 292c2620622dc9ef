#include "csf/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "csf/renorm.hpp"
#include "detail/numeric.hpp"
#include "detail/margins.hpp"

namespace csf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

/// First derivative of f in theta at every node; the last node sits at
/// theta = pi/2 where even symmetry forces a zero, the first node uses a
/// one-sided three-point formula.
std::vector<double> theta_derivative(std::span<const double> th, std::span<const double> f) {
  const std::size_t n = th.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = detail::d1_three(th[i - 1], th[i], th[i + 1], f[i - 1], f[i], f[i + 1]);
  }
  const auto w = detail::fd_weights(th[0], th.subspan(0, 3), 1);
  d[0] = w[1][0] * f[0] + w[1][1] * f[1] + w[1][2] * f[2];
  d[n - 1] = 0.0;
  return d;
}

/// Second derivative in theta from five-point stencils (three-point second
/// differences are only first order on nonuniform nodes). Nodes past pi/2
/// come from the even reflection f(pi - theta) = f(theta).
std::vector<double> theta_second_derivative(std::span<const double> th, std::span<const double> f) {
  const std::size_t n = th.size();
  std::vector<double> tx(th.begin(), th.end());
  std::vector<double> fx(f.begin(), f.end());
  for (std::size_t i = n - 1; i-- > 0 && tx.size() < n + 2;) {
    tx.push_back(kPi - th[i]);
    fx.push_back(f[i]);
  }
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t lo = std::min(i < 2 ? 0 : i - 2, tx.size() - 5);
    const auto w = detail::fd_weights(th[i], std::span<const double>(tx).subspan(lo, 5), 2);
    for (std::size_t k = 0; k < 5; ++k) d[i] += w[2][k] * fx[lo + k];
  }
  d[0] = d[1];
  return d;
}

void require_before(double t, double T_hat) {
  if (!(t < T_hat)) {
    throw Error(ErrorKind::PreconditionViolated,
                "precondition violated: t must be before the vanishing-time estimate");
  }
}

}  // namespace

namespace detail {

Margins monotone_margins(std::span<const Point2> v, const ThetaProfile& profile) {
  Margins m;
  m.convex = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Point2 a = v[i] - v[i - 1];
    const Point2 b = v[i + 1] - v[i];
    m.convex = std::max(m.convex, std::atan2(cross(a, b), dot(a, b)));
  }
  const auto s = profile.samples();
  const std::size_t n = s.size();
  constexpr std::size_t kEndMargin = 3;
  m.kappa_theta = std::numeric_limits<double>::infinity();
  for (std::size_t i = kEndMargin; i + kEndMargin < n; ++i) {
    m.kappa_theta = std::min(m.kappa_theta, s[i].kappa_theta);
  }
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------

ThetaProfile::ThetaProfile(std::vector<ThetaSample> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 3) throw Error(ErrorKind::PreconditionViolated, "theta profile needs >= 3 samples");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].theta > samples_[i - 1].theta)) {
      throw Error(ErrorKind::PreconditionViolated,
                  "non-monotone theta at vertex " + std::to_string(i) + " (convexity lost)", {i});
    }
  }
  for (const auto& s : samples_) {
    theta_.push_back(s.theta);
    kappa_.push_back(s.kappa);
    kappa_theta_.push_back(s.kappa_theta);
  }
}

double ThetaProfile::kappa(double theta) const {
  if (theta > kHalfPi) theta = kPi - theta;
  return detail::interp_linear(theta_, kappa_, theta);
}

double ThetaProfile::kappa_theta(double theta) const {
  if (theta > kHalfPi) return -detail::interp_linear(theta_, kappa_theta_, kPi - theta);
  return detail::interp_linear(theta_, kappa_theta_, theta);
}

std::vector<ThetaSample> ThetaProfile::extended() const {
  std::vector<ThetaSample> out(samples_.begin(), samples_.end());
  for (std::size_t i = samples_.size() - 1; i-- > 0;) {
    const auto& s = samples_[i];
    out.push_back({kPi - s.theta, s.kappa, -s.kappa_theta});
  }
  return out;
}

ThetaProfile theta_profile(const QuarterArc& arc) {
  const ArcStencil st = arc_stencil(arc.vertices());
  const std::size_t n = st.kappa.size();
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = -st.tangent[i];
  for (std::size_t i = 1; i < n; ++i) {
    if (!(theta[i] > theta[i - 1])) {
      throw Error(ErrorKind::PreconditionViolated,
                  "non-monotone theta at vertex " + std::to_string(i) + " (convexity lost)", {i});
    }
  }
  const auto kt = theta_derivative(theta, st.kappa);
  std::vector<ThetaSample> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = {theta[i], st.kappa[i], kt[i]};
  return ThetaProfile(std::move(samples));
}

ReaperGap grim_reaper_gap(const ThetaProfile& profile, Interval J) {
  const double lo_ok = profile.theta_min();
  const double hi_ok = kPi - profile.theta_min();
  if (!(J.lo >= lo_ok && J.hi <= hi_ok && J.lo < J.hi)) {
    throw Error(ErrorKind::PreconditionViolated, "grim_reaper_gap: J outside the profile range");
  }
  const double kr = profile.kappa_right();
  if (!(kr > 0.0)) throw Error(ErrorKind::PreconditionViolated, "grim_reaper_gap: kappa(pi/2) <= 0");

  ReaperGap gap;
  auto visit = [&](double th) {
    gap.gap_F = std::max(gap.gap_F, std::abs(profile.kappa(th) / kr - std::sin(th)));
    gap.gap_Ftheta = std::max(gap.gap_Ftheta, std::abs(profile.kappa_theta(th) / kr - std::cos(th)));
  };
  visit(J.lo);
  visit(J.hi);
  for (const auto& s : profile.extended()) {
    if (s.theta > J.lo && s.theta < J.hi) visit(s.theta);
  }
  return gap;
}

SupportProfile support_profile(const QuarterArc& arc, double theta_window_lo) {
  const auto v = arc.vertices();
  const ArcStencil st = arc_stencil(v);
  const std::size_t n = v.size();
  SupportProfile sp;
  sp.theta.resize(n);
  sp.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = -st.tangent[i];
    sp.theta[i] = th;
    sp.p[i] = v[i].x * std::sin(th) + v[i].y * std::cos(th);
  }
  sp.p_theta = theta_derivative(sp.theta, sp.p);
  const auto ptt = theta_second_derivative(sp.theta, sp.p);

  for (std::size_t i = 1; i < n; ++i) {
    if (sp.theta[i] < theta_window_lo) continue;
    sp.residual = std::max(sp.residual, std::abs(st.kappa[i] * (sp.p[i] + ptt[i]) - 1.0));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double th = sp.theta[i];
    const Point2 nrm{std::sin(th), std::cos(th)};
    const Point2 nrm_th{std::cos(th), -std::sin(th)};
    sp.reconstruction_error =
        std::max(sp.reconstruction_error, distance(v[i], sp.p[i] * nrm + sp.p_theta[i] * nrm_th));
  }
  return sp;
}

double integral_identity_residual(const ThetaProfile& profile, double Y, double kappa_right,
                                  double eps_q) {
  auto integrand = [&](double th) { return std::sin(th) * kappa_right / profile.kappa(th); };
  double prev_th = eps_q;
  double prev_f = integrand(eps_q);
  double integral = prev_f * eps_q;
  for (const auto& s : profile.samples()) {
    if (s.theta <= eps_q) continue;
    const double f = std::sin(s.theta) * kappa_right / s.kappa;
    integral += 0.5 * (s.theta - prev_th) * (f + prev_f);
    prev_th = s.theta;
    prev_f = f;
  }
  const double lhs = Y * kappa_right;
  return std::abs(lhs - integral) / lhs;
}

double default_quadrature_cutoff(const ThetaProfile& profile) {
  for (const auto& s : profile.samples()) {
    if (s.theta > 0.0) return std::min(s.theta, 0.05);
  }
  return 0.05;
}

std::size_t count_sign_changes(std::span<const double> samples) {
  // Values within round-off of zero relative to the largest sample count as zero.
  double scale = 0.0;
  for (double x : samples) scale = std::max(scale, std::abs(x));
  const double zero = 1e-12 * scale;
  std::size_t count = 0;
  int prev = 0;
  for (double x : samples) {
    const int sign = (x > zero) - (x < -zero);
    if (sign == 0) continue;
    if (prev != 0 && sign != prev) ++count;
    prev = sign;
  }
  return count;
}

NodeProfile node_profile(const QuarterArc& arc, double t, double T_hat) {
  require_before(t, T_hat);
  return node_profile_remaining(arc, T_hat - t);
}

NodeProfile node_profile_remaining(const QuarterArc& arc, double remaining) {
  require_before(0.0, remaining);
  const double scale = 1.0 / std::sqrt(remaining);
  const auto v = arc.vertices();
  const SupportProfile sp = support_profile(arc);
  const ArcStencil st = arc_stencil(v);
  const std::size_t n = v.size();

  NodeProfile np;
  std::vector<double> P(n), K(n), nu(n);
  for (std::size_t i = 0; i < n; ++i) {
    P[i] = scale * sp.p[i];
    K[i] = st.kappa[i] / scale;
    nu[i] = 0.5 * P[i] - K[i];
  }

  np.theta = sp.theta;
  np.P = P;
  np.K = K;
  np.nu = nu;
  for (std::size_t i = n - 1; i-- > 0;) {
    np.theta.push_back(kPi - sp.theta[i]);
    np.P.push_back(P[i]);
    np.K.push_back(K[i]);
    np.nu.push_back(nu[i]);
  }
  np.zero_count = count_sign_changes(np.nu);

  // Unit-length initial subarc of D, measured from the double point.
  double sigma = 0.0;
  bool ok = true;
  std::size_t i = 1;
  for (; i < n; ++i) {
    sigma += scale * distance(v[i - 1], v[i]);
    if (sigma > 1.0) break;
    if (!(P[i] < K[i])) ok = false;
  }
  np.subarc_in_quadrant = i < n - 1;
  np.nodal_estimate_ok = !np.subarc_in_quadrant || ok;
  return np;
}

SineComparator sine_comparator(const ThetaProfile& profile, double theta_star, bool extended) {
  const double k = profile.kappa(theta_star);
  const double kt = profile.kappa_theta(theta_star);
  if (!(k > 0.0)) throw Error(ErrorKind::PreconditionViolated, "sine_comparator: kappa(theta*) <= 0");
  SineComparator sc;
  sc.B = k * k + kt * kt;
  sc.phi = std::atan2(k, kt) - theta_star;
  const double amp = std::sqrt(sc.B);
  // Differences at rounding level count as zeros.
  const double tol = 1e-9 * amp;
  std::vector<double> diff;
  const auto samples = extended ? profile.extended()
                                : std::vector<ThetaSample>(profile.samples().begin(), profile.samples().end());
  for (const auto& s : samples) {
    const double d = s.kappa - amp * std::sin(sc.phi + s.theta);
    diff.push_back(std::abs(d) <= tol ? 0.0 : d);
  }
  sc.zeros = count_sign_changes(diff);
  return sc;
}

// ---------------------------------------------------------------------------

std::span<const char* const> trace_columns() {
  static constexpr std::array<const char*, 26> kColumns = {
      "t",          "T_hat",        "A",
      "X",          "Y",            "alpha",
      "kappa_top",  "kappa_right",  "beta",
      "ell",        "gr_gap_F",     "gr_gap_Ftheta",
      "support_residual", "integral_residual", "node_zero_count",
      "bowtie_dist", "migration_x", "migration_y",
      "box_area",   "kappa_theta_min", "convex_margin",
      "nodal_ok",   "step",         "vertices",
      "T_minus_t",  "area_rate"};
  return kColumns;
}

double beta_of(double X, double T_minus_t, double kappa_right) { return X / (T_minus_t * kappa_right); }

double ell_of(double X, double T_minus_t) { return std::log(X) - 0.5 * std::log(T_minus_t); }

TraceRecord diag_record(const FlowState& state, double T_hat, const DiagOptions& opts) {
  require_before(state.t, T_hat);
  return diag_record_remaining(state, T_hat - state.t, opts);
}

TraceRecord diag_record_remaining(const FlowState& state, double remaining, const DiagOptions& opts) {
  require_before(0.0, remaining);
  const QuarterArc& arc = state.arc;
  const ArcMeasures m = arc_measures(arc);
  const ThetaProfile profile = theta_profile(arc);

  TraceRecord r;
  r.t = state.t;
  r.T_hat = state.t + remaining;
  r.T_minus_t = remaining;
  r.area_rate = std::numeric_limits<double>::quiet_NaN();
  r.A = m.A;
  r.X = m.X;
  r.Y = m.Y;
  r.alpha = m.alpha;
  r.kappa_top = m.kappa_top;
  r.kappa_right = m.kappa_right;
  r.beta = beta_of(m.X, remaining, m.kappa_right);
  r.ell = ell_of(m.X, remaining);

  const ReaperGap gap = grim_reaper_gap(profile, opts.J);
  r.gr_gap_F = gap.gap_F;
  r.gr_gap_Ftheta = gap.gap_Ftheta;
  r.support_residual = support_profile(arc).residual;
  r.integral_residual =
      integral_identity_residual(profile, m.Y, m.kappa_right, default_quadrature_cutoff(profile));

  const NodeProfile np = node_profile_remaining(arc, remaining);
  r.node_zero_count = np.zero_count;
  r.nodal_ok = np.nodal_estimate_ok;

  const ClosedPolyline boxed = normalize(reconstruct_figure_eight(arc), RenormMode{});
  r.bowtie_dist = bowtie_distance(boxed, opts.bowtie_eps, opts.rng_seed);
  const Point2 mig = migration_point(boxed);
  r.migration_x = mig.x;
  r.migration_y = mig.y;
  r.box_area = lobe_area(boxed);

  const detail::Margins mg = detail::monotone_margins(arc.vertices(), profile);
  r.kappa_theta_min = mg.kappa_theta;
  r.convex_margin = mg.convex;
  r.step = state.step_index;
  r.vertices = arc.size();
  return r;
}

ParabolicResiduals parabolic_residuals(const FlowState& earlier, const FlowState& later, double T_hat,
                                       Interval window) {
  require_before(later.t, T_hat);
  if (!(later.t > earlier.t)) {
    throw Error(ErrorKind::PreconditionViolated, "parabolic_residuals: snapshots out of order");
  }
  constexpr std::size_t kGrid = 65;
  const double h = (window.hi - window.lo) / static_cast<double>(kGrid - 1);

  struct Slice {
    std::vector<double> K, nu;
  };
  auto slice = [&](const FlowState& s) {
    const double scale = 1.0 / std::sqrt(T_hat - s.t);
    const SupportProfile sp = support_profile(s.arc);
    const ArcStencil st = arc_stencil(s.arc.vertices());
    std::vector<double> kap(st.kappa);
    Slice out;
    for (std::size_t g = 0; g < kGrid; ++g) {
      double th = window.lo + h * static_cast<double>(g);
      if (th > kHalfPi) th = kPi - th;
      const double P = scale * detail::interp_linear(sp.theta, sp.p, th);
      const double K = detail::interp_linear(sp.theta, kap, th) / scale;
      out.K.push_back(K);
      out.nu.push_back(0.5 * P - K);
    }
    return out;
  };
  const Slice a = slice(earlier);
  const Slice b = slice(later);
  const double dtau = to_log_time(later.t, T_hat) - to_log_time(earlier.t, T_hat);

  ParabolicResiduals res;
  for (std::size_t g = 1; g + 1 < kGrid; ++g) {
    const double K = 0.5 * (a.K[g] + b.K[g]);
    const double nu = 0.5 * (a.nu[g] + b.nu[g]);
    auto second = [&](const std::vector<double>& f1, const std::vector<double>& f2) {
      return 0.5 * ((f1[g + 1] - 2 * f1[g] + f1[g - 1]) + (f2[g + 1] - 2 * f2[g] + f2[g - 1])) / (h * h);
    };
    const double nu_tau = (b.nu[g] - a.nu[g]) / dtau;
    const double K_tau = (b.K[g] - a.K[g]) / dtau;
    res.nodal = std::max(res.nodal, std::abs(nu_tau - K * K * second(a.nu, b.nu) - (K * K + 0.5) * nu));
    res.angle = std::max(res.angle, std::abs(K_tau + 0.5 * K - K * K * second(a.K, b.K) - K * K * K));
  }
  return res;
}

}  // namespace csf
