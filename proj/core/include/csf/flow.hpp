#pragma once

// Curve shortening flow dC/dt = kappa N on the quarter-arc fundamental
// domain, by explicit front tracking.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csf/geometry.hpp"

namespace csf {

struct ResampleEvent {
  std::size_t step = 0;
  double t = 0.0;
  std::size_t vertices_before = 0;
  std::size_t vertices_after = 0;
};

struct FlowState {
  QuarterArc arc;
  double t = 0.0;
  /// Low-order part of the time; t + t_lo carries the accumulated steps
  /// without rounding loss once t is much larger than dt.
  double t_lo = 0.0;
  std::size_t step_index = 0;
  double h_min = 0.0;
  std::vector<ResampleEvent> events;

  explicit FlowState(QuarterArc a, double t0 = 0.0);
};

struct StepControl {
  double safety = 0.4;
  double dtheta_max = 0.1;
  /// Segment cap at the initial size; scaled by X(t)/X(0) as the curve shrinks.
  double h_max = 0.01;
  double kappa_h_stop = 0.3;
  double x_floor = 1e-4;
  std::size_t max_steps = 10'000'000;
  /// Resampling point budget.
  std::size_t max_points = 20000;
  /// Crowding trigger passed to the resampler.
  double min_ratio = 0.2;
};

/// Resample policy in effect for an arc whose current half-width is x_now,
/// given the seed half-width x0.
ResamplePolicy step_policy(const StepControl& ctl, double x0, double x_now);

/// Per-vertex normal velocity kappa N; the double point is pinned and the
/// rightmost vertex moves along the x-axis.
std::vector<Point2> csf_velocity(std::span<const Point2> arc);
std::vector<Point2> csf_velocity(const QuarterArc& arc);

/// Cyclic version for closed embedded curves.
std::vector<Point2> csf_velocity_closed(std::span<const Point2> loop);

double adaptive_dt(double h_min, double safety);
double adaptive_dt(const FlowState& state, const StepControl& ctl);

/// One Heun step. Throws ResolutionCollapse (carrying the offending indices)
/// if the stepped vertices no longer form a valid arc; resamples when the
/// policy is violated afterwards.
FlowState csf_step(const FlowState& state, double dt, const ResamplePolicy& policy);
FlowState csf_step(FlowState&& state, double dt, const ResamplePolicy& policy);

/// One Heun step for a closed curve (no boundary rules, no resampling).
ClosedPolyline csf_step_closed(const ClosedPolyline& poly, double dt);

/// t + A / (2 pi + 2 alpha).
double estimate_vanishing_time(const FlowState& state);
/// A / (2 pi + 2 alpha): the same estimate of T - t, without cancellation.
double remaining_time(const FlowState& state);
/// Time elapsed from `earlier` to `later`, using the low-order parts.
double elapsed(const FlowState& earlier, const FlowState& later);
double estimate_vanishing_time(double t, double area, double alpha);

enum class StopReason { MaxSteps, XFloor, Resolution, Collapse };
const char* to_string(StopReason reason);
std::optional<StopReason> stop_reason_from_string(const std::string& s);

struct EvolveResult {
  FlowState state;
  StopReason reason = StopReason::MaxSteps;
  std::string detail;
};

using DiagnosticHook = std::function<void(const FlowState&)>;

/// Steps until a stop condition. The hook sees the initial state and then
/// every `diag_interval` steps. A step that collapses the arc ends the run
/// with StopReason::Collapse; the last good state is returned.
EvolveResult evolve(FlowState state, const StepControl& ctl, std::size_t diag_interval = 0,
                    const DiagnosticHook& hook = {});

}  // namespace csf
