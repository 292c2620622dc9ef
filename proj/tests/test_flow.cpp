#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csf/flow.hpp"
#include "csf/renorm.hpp"
#include "csf/seeds.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace csf;
using std::numbers::pi;

namespace {

/// Flows a closed curve with the adaptive step until `t_end`, landing on it exactly.
ClosedPolyline flow_closed(ClosedPolyline c, double t_end, double safety = 0.4) {
  double t = 0.0;
  while (t < t_end) {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.size(); ++i) h = std::min(h, distance(c[i], c[(i + 1) % c.size()]));
    const double dt = std::min(adaptive_dt(h, safety), t_end - t);
    c = csf_step_closed(c, dt);
    t += dt;
  }
  return c;
}

ResamplePolicy no_resampling() {
  ResamplePolicy p;
  p.h_max = 1e9;
  p.dtheta_max = 10.0;
  return p;
}

}  // namespace

TEST_CASE("circle speeds are one") {
  const auto vel = csf_velocity_closed(test::circle_polygon(1.0, 512).vertices());
  double worst = 0.0;
  for (const Point2& v : vel) worst = std::max(worst, std::abs(norm(v) - 1.0));
  CHECK(worst <= 5e-5);
}

TEST_CASE("arc velocity: straight stencil and the double point") {
  const std::vector<Point2> v{{0, 0}, {1, 1}, {2, 2}, {3, 2.5}, {4, 2.6}, {5, 2}, {5.5, 1}, {5.7, 0}};
  const auto vel = csf_velocity(v);
  CHECK(vel[1] == Point2{0.0, 0.0});
  CHECK(vel[0] == Point2{0.0, 0.0});
  CHECK(vel.back().y == 0.0);

  const QuarterArc arc = lemniscate_arc(1.0, 200);
  const auto w = csf_velocity(arc);
  CHECK(w.front() == Point2{0.0, 0.0});
  // Inward motion: the top of the lobe moves down, the tip moves left.
  CHECK(w[arc.size() / 2].y < 0.0);
  CHECK(w.back().x < 0.0);
}

TEST_CASE("adaptive time step") {
  CHECK(adaptive_dt(0.01, 0.4) == doctest::Approx(2e-5).epsilon(1e-14));
  CHECK(adaptive_dt(0.005, 0.4) == doctest::Approx(adaptive_dt(0.01, 0.4) / 4).epsilon(1e-14));
}

TEST_CASE("closed circle follows the exact solution") {
  SUBCASE("to t = 0.3") {
    const ClosedPolyline c = flow_closed(test::circle_polygon(1.0, 512), 0.3);
    CHECK(std::abs(test::mean_radius(c) - std::sqrt(1.0 - 0.6)) <= 1e-3);
  }
  SUBCASE("to t = 0.45") {
    const ClosedPolyline c = flow_closed(test::circle_polygon(1.0, 512), 0.45);
    CHECK(std::abs(test::mean_radius(c) - std::sqrt(0.1)) <= 1e-3);
  }
  SUBCASE("one small step") {
    const double dt = 1e-5;
    const ClosedPolyline c0 = test::circle_polygon(1.0, 512);
    const double r0 = test::mean_radius(c0);
    const double drop = r0 - test::mean_radius(csf_step_closed(c0, dt));
    // The discrete circle has curvature 1/r0 up to O(h^2).
    CHECK(std::abs(drop - dt / r0) <= 1e-4 * dt);
  }
}

TEST_CASE("Heun step is second order on the circle") {
  const ClosedPolyline c0 = test::circle_polygon(1.0, 128);
  auto gap = [&](double dt) {
    const ClosedPolyline one = csf_step_closed(c0, dt);
    const ClosedPolyline two = csf_step_closed(csf_step_closed(c0, dt / 2), dt / 2);
    double d = 0.0;
    for (std::size_t i = 0; i < c0.size(); ++i) d = std::max(d, distance(one[i], two[i]));
    return d;
  };
  const double dt = 2e-3;
  const double g1 = gap(dt), g2 = gap(dt / 2);
  // Richardson: the step-halving gap shrinks at least like dt^2.
  CHECK(g1 <= 1.0 * dt * dt);
  CHECK(g1 / g2 >= 3.5);
}

TEST_CASE("ellipse becomes rounder") {
  std::vector<Point2> v;
  for (int k = 0; k < 256; ++k) v.push_back({2.0 * std::cos(2 * pi * k / 256), std::sin(2 * pi * k / 256)});
  ClosedPolyline c(v);
  auto aspect = [](const ClosedPolyline& p) {
    double x = 0, y = 0;
    for (const Point2& q : p.vertices()) {
      x = std::max(x, std::abs(q.x));
      y = std::max(y, std::abs(q.y));
    }
    return x / y;
  };
  double prev = aspect(c);
  for (int block = 0; block < 10; ++block) {
    c = flow_closed(c, 0.05);
    const double a = aspect(c);
    CHECK(a < prev);
    prev = a;
  }
  CHECK(prev < 1.5);
}

TEST_CASE("a smooth closed curve loses area at rate 2 pi") {
  // Square with rounded corners, corner radius 0.2.
  std::vector<Point2> v;
  const double r = 0.2, half = 1.0;
  const Point2 centres[] = {{half - r, half - r}, {-(half - r), half - r}, {-(half - r), -(half - r)},
                            {half - r, -(half - r)}};
  for (int q = 0; q < 4; ++q) {
    for (int k = 0; k < 40; ++k) {
      const double phi = pi / 2 * q + pi / 2 * k / 40.0;
      v.push_back(centres[q] + Point2{r * std::cos(phi), r * std::sin(phi)});
    }
    const Point2 a = centres[q] + Point2{r * std::cos(pi / 2 * (q + 1)), r * std::sin(pi / 2 * (q + 1))};
    const Point2 b = centres[(q + 1) % 4] + Point2{r * std::cos(pi / 2 * (q + 1)), r * std::sin(pi / 2 * (q + 1))};
    for (int k = 0; k < 40; ++k) v.push_back(a + (k / 40.0) * (b - a));
  }
  ClosedPolyline c = flow_closed(ClosedPolyline(v), 0.02);
  const double a0 = std::abs(shoelace_area(c.vertices()));
  c = flow_closed(c, 0.05);
  const double a1 = std::abs(shoelace_area(c.vertices()));
  CHECK((a0 - a1) / 0.05 == doctest::Approx(2 * pi).epsilon(0.02));
}

TEST_CASE("vanishing time estimate") {
  CHECK(estimate_vanishing_time(0.0, pi, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  const FlowState s(lemniscate_arc(1.0, 800));
  CHECK(std::abs(estimate_vanishing_time(s) - oracle::kLemniscateVanishingEstimate) <= 1e-3);
  CHECK(remaining_time(s) == doctest::Approx(estimate_vanishing_time(s)).epsilon(1e-15));
}

TEST_CASE("lemniscate area loss against a refined run") {
  auto area_drop = [](std::size_t n, double dt, int steps) {
    FlowState s(lemniscate_arc(1.0, n));
    const double a0 = arc_measures(s.arc).A;
    for (int k = 0; k < steps; ++k) s = csf_step(std::move(s), dt, no_resampling());
    return a0 - arc_measures(s.arc).A;
  };
  // Four times the vertices needs a sixteenth of the step to stay stable.
  const double dt = adaptive_dt(lemniscate_arc(1.0, 400).min_segment(), 0.4);
  const double coarse = area_drop(400, dt, 100);
  const double fine = area_drop(1600, dt / 16, 1600);
  CHECK(std::abs(coarse / fine - 1.0) <= 0.05);
}

TEST_CASE("time is accumulated without rounding drift") {
  FlowState s(lemniscate_arc(1.0, 100), 1.0);
  const double dt = 1e-17;
  for (int k = 0; k < 1000; ++k) s = csf_step(std::move(s), dt, no_resampling());
  CHECK(elapsed(FlowState(lemniscate_arc(1.0, 100), 1.0), s) == doctest::Approx(1000 * dt).epsilon(1e-12));
}

TEST_CASE("evolve") {
  const FlowState seed(lemniscate_arc(1.0, 400));
  SUBCASE("no steps leaves the state alone") {
    StepControl ctl;
    ctl.max_steps = 0;
    const EvolveResult r = evolve(seed, ctl);
    CHECK(r.reason == StopReason::MaxSteps);
    CHECK(r.state.t == seed.t);
    REQUIRE(r.state.arc.size() == seed.arc.size());
    for (std::size_t i = 0; i < seed.arc.size(); ++i) CHECK(r.state.arc[i] == seed.arc[i]);
  }
  SUBCASE("stops below the width floor") {
    StepControl ctl;
    ctl.x_floor = 0.5;
    const EvolveResult r = evolve(seed, ctl);
    CHECK(r.reason == StopReason::XFloor);
    CHECK(r.state.arc.back().x < 0.5);
    CHECK(r.state.t < estimate_vanishing_time(seed));
  }
  SUBCASE("hooks see read-only states on the interval") {
    StepControl ctl;
    ctl.max_steps = 50;
    std::vector<std::size_t> seen;
    evolve(seed, ctl, 10, [&](const FlowState& s) { seen.push_back(s.step_index); });
    CHECK(seen == std::vector<std::size_t>{0, 10, 20, 30, 40, 50});
  }
}

TEST_CASE("flow preserves area decrease, convexity and monotonicity") {
  StepControl ctl;
  ctl.max_steps = 4000;
  const FlowState seed(lemniscate_arc(1.0, 400));
  double prev_A = arc_measures(seed.arc).A;
  double prev_t = 0.0;
  int checks = 0;
  evolve(seed, ctl, 400, [&](const FlowState& s) {
    if (s.step_index == 0) return;
    const ArcMeasures m = arc_measures(s.arc);
    CHECK(m.A < prev_A);
    // Each lobe turns by pi + 2 alpha along its smooth part.
    const double rate = (prev_A - m.A) / (s.t - prev_t);
    CHECK(rate >= 2 * pi);
    CHECK(rate == doctest::Approx(2 * pi + 4 * m.alpha).epsilon(0.1));
    const MonotoneReport rep = validate_monotone(s.arc);
    CHECK(rep.convex);
    CHECK(rep.monotone());
    prev_A = m.A;
    prev_t = s.t;
    ++checks;
  });
  CHECK(checks == 10);
}

TEST_CASE("quarter arc flow agrees with flowing the whole figure-eight") {
  const QuarterArc arc = lemniscate_arc(1.0, 200);
  const double dt = adaptive_dt(arc.min_segment(), 0.4);
  FlowState s(arc);
  ClosedPolyline whole = reconstruct_figure_eight(arc);
  for (int k = 0; k < 50; ++k) {
    s = csf_step(std::move(s), dt, no_resampling());
    whole = csf_step_closed(whole, dt);
  }
  // The two stencils share the curvature and differ only in the
  // second-order tangent estimate.
  const double d = hausdorff_distance(reconstruct_figure_eight(s.arc), whole);
  CHECK(d <= 1e-6);
  // And the whole curve keeps both mirror symmetries.
  std::vector<Point2> flipped;
  for (const Point2& p : whole.vertices()) flipped.push_back({-p.x, p.y});
  CHECK(hausdorff_distance(whole, ClosedPolyline(flipped)) <= 1e-12);
}

TEST_CASE("resampling events are logged") {
  FlowState s(lemniscate_arc(1.0, 400));
  ResamplePolicy tight;
  tight.h_max = 0.001;
  tight.dtheta_max = 0.1;
  s = csf_step(std::move(s), 1e-7, tight);
  REQUIRE(s.events.size() == 1);
  CHECK(s.events.front().step == 1);
  CHECK(s.events.front().vertices_before == 400);
  CHECK(s.events.front().vertices_after > 400);
  CHECK(s.h_min == doctest::Approx(s.arc.min_segment()));
}
