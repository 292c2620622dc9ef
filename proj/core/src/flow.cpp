#include "csf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csf {

namespace {

void pin_endpoints(std::vector<Point2>& v) {
  v.front() = Point2{0.0, 0.0};
  v.back().y = 0.0;
}

std::vector<std::size_t> degenerate_vertices(std::span<const Point2> v) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == v[i - 1]) bad.push_back(i);
  }
  return bad;
}

}  // namespace

FlowState::FlowState(QuarterArc a, double t0) : arc(std::move(a)), t(t0), h_min(arc.min_segment()) {}

ResamplePolicy step_policy(const StepControl& ctl, double x0, double x_now) {
  ResamplePolicy pol;
  pol.h_max = ctl.h_max * (x_now / x0);
  pol.dtheta_max = ctl.dtheta_max;
  pol.max_points = ctl.max_points;
  pol.min_ratio = ctl.min_ratio;
  return pol;
}

std::vector<Point2> csf_velocity(std::span<const Point2> v) {
  const ArcStencil st = arc_stencil(v);
  std::vector<Point2> vel(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double psi = st.tangent[i];
    // Inward normal of a clockwise-traversed convex lobe.
    vel[i] = st.kappa[i] * Point2{std::sin(psi), -std::cos(psi)};
  }
  vel.front() = Point2{0.0, 0.0};
  vel.back().y = 0.0;
  return vel;
}

std::vector<Point2> csf_velocity(const QuarterArc& arc) { return csf_velocity(arc.vertices()); }

std::vector<Point2> csf_velocity_closed(std::span<const Point2> loop) {
  const std::size_t n = loop.size();
  std::vector<Point2> vel(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = loop[(i + n - 1) % n];
    const Point2 q = loop[i];
    const Point2 r = loop[(i + 1) % n];
    double k = 0.0;
    try {
      k = menger_curvature(p, q, r);
    } catch (const Error&) {
      throw Error(ErrorKind::DegenerateTriple, "degenerate triple at vertex " + std::to_string(i), {i});
    }
    const double h1 = distance(p, q);
    const double h2 = distance(q, r);
    const double phi1 = std::atan2(q.y - p.y, q.x - p.x);
    double dphi = std::atan2(r.y - q.y, r.x - q.x) - phi1;
    if (dphi > std::numbers::pi) dphi -= 2 * std::numbers::pi;
    if (dphi <= -std::numbers::pi) dphi += 2 * std::numbers::pi;
    const double psi = phi1 + dphi * h1 / (h1 + h2);
    vel[i] = k * Point2{-std::sin(psi), std::cos(psi)};
  }
  return vel;
}

double adaptive_dt(double h_min, double safety) { return safety * h_min * h_min / 2.0; }

double adaptive_dt(const FlowState& state, const StepControl& ctl) {
  return adaptive_dt(state.h_min, ctl.safety);
}

FlowState csf_step(const FlowState& state, double dt, const ResamplePolicy& policy) {
  return csf_step(FlowState(state), dt, policy);
}

FlowState csf_step(FlowState&& state, double dt, const ResamplePolicy& policy) {
  const auto v0 = state.arc.vertices();
  const std::size_t n = v0.size();

  auto velocity = [](std::span<const Point2> v) {
    try {
      return csf_velocity(v);
    } catch (const Error& e) {
      throw Error(ErrorKind::ResolutionCollapse, std::string("resolution collapse: ") + e.what(),
                  e.indices());
    }
  };

  const auto k1 = velocity(v0);
  std::vector<Point2> pred(n);
  for (std::size_t i = 0; i < n; ++i) pred[i] = v0[i] + dt * k1[i];
  pin_endpoints(pred);
  if (auto bad = degenerate_vertices(pred); !bad.empty()) {
    throw Error(ErrorKind::ResolutionCollapse, "resolution collapse: predictor merged vertices", bad);
  }
  const auto k2 = velocity(pred);
  std::vector<Point2> next(n);
  for (std::size_t i = 0; i < n; ++i) next[i] = v0[i] + (0.5 * dt) * (k1[i] + k2[i]);
  pin_endpoints(next);

  if (auto bad = arc_violations(next); !bad.empty()) {
    throw Error(ErrorKind::ResolutionCollapse,
                "resolution collapse at step " + std::to_string(state.step_index + 1) +
                    " (t=" + std::to_string(state.t + dt) + ")",
                std::move(bad));
  }

  // Moved, not copied: the event history grows over long runs.
  FlowState out = std::move(state);
  const double t0 = out.t, t0_lo = out.t_lo;
  out.arc = QuarterArc(std::move(next));
  // Two-sum keeps the rounding error of t + dt in t_lo.
  const double sum = t0 + dt;
  const double bp = sum - t0;
  const double err = (t0 - (sum - bp)) + (dt - bp);
  const double lo = t0_lo + err;
  out.t = sum + lo;
  out.t_lo = lo - (out.t - sum);
  out.step_index += 1;
  if (!conforms(out.arc, policy)) {
    const std::size_t before = out.arc.size();
    out.arc = resample_arc(out.arc, policy);
    out.events.push_back({out.step_index, out.t, before, out.arc.size()});
  }
  out.h_min = out.arc.min_segment();
  return out;
}

ClosedPolyline csf_step_closed(const ClosedPolyline& poly, double dt) {
  const auto v0 = poly.vertices();
  const std::size_t n = v0.size();
  const auto k1 = csf_velocity_closed(v0);
  std::vector<Point2> pred(n);
  for (std::size_t i = 0; i < n; ++i) pred[i] = v0[i] + dt * k1[i];
  const auto k2 = csf_velocity_closed(pred);
  std::vector<Point2> next(n);
  for (std::size_t i = 0; i < n; ++i) next[i] = v0[i] + (0.5 * dt) * (k1[i] + k2[i]);
  return ClosedPolyline(std::move(next));
}

double estimate_vanishing_time(double t, double area, double alpha) {
  return t + area / (2.0 * std::numbers::pi + 2.0 * alpha);
}

double estimate_vanishing_time(const FlowState& state) { return state.t + remaining_time(state); }

double remaining_time(const FlowState& state) {
  const ArcMeasures m = arc_measures(state.arc);
  return m.A / (2.0 * std::numbers::pi + 2.0 * m.alpha);
}

double elapsed(const FlowState& earlier, const FlowState& later) {
  return (later.t - earlier.t) + (later.t_lo - earlier.t_lo);
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxSteps: return "max_steps";
    case StopReason::XFloor: return "x_floor";
    case StopReason::Resolution: return "resolution";
    case StopReason::Collapse: return "resolution_collapse";
  }
  return "unknown";
}

std::optional<StopReason> stop_reason_from_string(const std::string& s) {
  for (auto r : {StopReason::MaxSteps, StopReason::XFloor, StopReason::Resolution, StopReason::Collapse}) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

EvolveResult evolve(FlowState state, const StepControl& ctl, std::size_t diag_interval,
                    const DiagnosticHook& hook) {
  const double x0 = state.arc.back().x;
  if (hook) hook(state);
  std::size_t taken = 0;
  while (true) {
    if (taken >= ctl.max_steps) return {std::move(state), StopReason::MaxSteps, {}};
    if (state.arc.back().x < ctl.x_floor) return {std::move(state), StopReason::XFloor, {}};
    const auto kappa = arc_stencil(state.arc.vertices()).kappa;
    const double kmax = *std::max_element(kappa.begin(), kappa.end());
    if (kmax * state.h_min > ctl.kappa_h_stop) {
      return {std::move(state), StopReason::Resolution, "max kappa * h_min exceeded kappa_h_stop"};
    }

    const double dt = adaptive_dt(state, ctl);
    const ResamplePolicy pol = step_policy(ctl, x0, state.arc.back().x);
    try {
      state = csf_step(std::move(state), dt, pol);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BudgetExceeded) return {std::move(state), StopReason::Resolution, e.what()};
      if (e.kind() == ErrorKind::ResolutionCollapse || e.kind() == ErrorKind::InvalidArc) {
        return {std::move(state), StopReason::Collapse, e.what()};
      }
      throw;
    }
    ++taken;
    if (hook && diag_interval > 0 && state.step_index % diag_interval == 0) hook(state);
  }
}

}  // namespace csf
