#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csf/renorm.hpp"
#include "csf/seeds.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace csf;
using std::numbers::pi;

namespace {

struct Box {
  double lo_x, hi_x, lo_y, hi_y;
};

Box box_of(const ClosedPolyline& c) {
  Box b{1e300, -1e300, 1e300, -1e300};
  for (const Point2& p : c.vertices()) {
    b.lo_x = std::min(b.lo_x, p.x);
    b.hi_x = std::max(b.hi_x, p.x);
    b.lo_y = std::min(b.lo_y, p.y);
    b.hi_y = std::max(b.hi_y, p.y);
  }
  return b;
}

ClosedPolyline transformed(const ClosedPolyline& c, double sx, double sy) {
  std::vector<Point2> v;
  for (const Point2& p : c.vertices()) v.push_back({sx * p.x, sy * p.y});
  return ClosedPolyline(v);
}

}  // namespace

TEST_CASE("box normalisation fills the unit box") {
  const ClosedPolyline eight = reconstruct_figure_eight(lemniscate_arc(1.7, 300));
  const Box b = box_of(normalize(eight, {RenormKind::Box, std::nullopt, 0.0}));
  CHECK(std::abs(b.lo_x + 1) <= 1e-12);
  CHECK(std::abs(b.hi_x - 1) <= 1e-12);
  CHECK(std::abs(b.lo_y + 1) <= 1e-12);
  CHECK(std::abs(b.hi_y - 1) <= 1e-12);
}

TEST_CASE("box normalisation forgets diagonal scalings") {
  const ClosedPolyline eight = reconstruct_figure_eight(lemniscate_arc(1.0, 200));
  const RenormMode box{RenormKind::Box, std::nullopt, 0.0};
  const ClosedPolyline a = normalize(eight, box);
  for (auto [sx, sy] : {std::pair{3.0, 0.5}, std::pair{1e-8, 2e-9}, std::pair{7.0, 7.0}}) {
    const ClosedPolyline b = normalize(transformed(eight, sx, sy), box);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a[i].x - b[i].x) <= 1e-12);
      CHECK(std::abs(a[i].y - b[i].y) <= 1e-12);
    }
  }
  // Normalising twice changes nothing.
  const ClosedPolyline twice = normalize(a, box);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(distance(a[i], twice[i]) <= 1e-15);
}

TEST_CASE("width mode is scale invariant") {
  const RenormMode width{RenormKind::Width, std::nullopt, 0.0};
  const ClosedPolyline a = normalize(reconstruct_figure_eight(lemniscate_arc(1.0, 200)), width);
  const ClosedPolyline b = normalize(reconstruct_figure_eight(lemniscate_arc(2.0, 200)), width);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(distance(a[i], b[i]) <= 1e-15);
}

TEST_CASE("parabolic mode holds the shrinking circle at radius sqrt 2") {
  const double T = 0.5;
  for (double t : {0.0, 0.3, 0.49, 0.4999}) {
    const ClosedPolyline c = test::circle_polygon(std::sqrt(2 * (T - t)), 64);
    const ClosedPolyline d = normalize(c, {RenormKind::Parabolic, T, t});
    CHECK(test::mean_radius(d) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(normalize(test::circle_polygon(1.0, 16), {RenormKind::Parabolic, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(normalize(test::circle_polygon(1.0, 16), {RenormKind::Parabolic, std::nullopt, 0.0}), Error);
}

TEST_CASE("reaper mode puts the half-height at pi/2") {
  const ClosedPolyline g =
      normalize(reconstruct_figure_eight(lemniscate_arc(1.0, 200)), {RenormKind::Reaper, std::nullopt, 0.0});
  CHECK(box_of(g).hi_y == doctest::Approx(pi / 2).epsilon(1e-14));
}

TEST_CASE("zero extent is rejected") {
  const ClosedPolyline flat({{-1, 0}, {0, 0}, {1, 0}});
  CHECK_THROWS_AS(normalize(flat, {RenormKind::Box, std::nullopt, 0.0}), Error);
}

TEST_CASE("bowtie") {
  const ClosedPolyline& b = bowtie();
  REQUIRE(b.size() == 4);
  CHECK(b[0] == Point2{-1, -1});
  CHECK(b[1] == Point2{1, 1});
  CHECK(b[2] == Point2{1, -1});
  CHECK(b[3] == Point2{-1, 1});
  CHECK(bowtie_distance(b) == 0.0);
}

TEST_CASE("bowtie distance of the seed matches the sampling oracle") {
  const ClosedPolyline boxed =
      normalize(reconstruct_figure_eight(lemniscate_arc(1.0, 800)), {RenormKind::Box, std::nullopt, 0.0});
  CHECK(std::abs(bowtie_distance(boxed) - oracle::kLemniscateBoxBowtieHausdorff) <= 2e-3);
}

TEST_CASE("bowtie distance respects the dihedral symmetries") {
  const ClosedPolyline boxed =
      normalize(reconstruct_figure_eight(lemniscate_arc(1.0, 300)), {RenormKind::Box, std::nullopt, 0.0});
  const double d = bowtie_distance(boxed, 1e-3);
  CHECK(bowtie_distance(transformed(boxed, -1, 1), 1e-3) == doctest::Approx(d).epsilon(1e-12));
  CHECK(bowtie_distance(transformed(boxed, 1, -1), 1e-3) == doctest::Approx(d).epsilon(1e-12));
  CHECK(bowtie_distance(transformed(boxed, -1, -1), 1e-3) == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("lobe area") {
  const QuarterArc arc = lemniscate_arc(1.0, 800);
  const ClosedPolyline eight = reconstruct_figure_eight(arc);
  CHECK(lobe_area(eight) == doctest::Approx(arc_measures(arc).A).epsilon(1e-12));
  const double boxed = lobe_area(normalize(eight, {RenormKind::Box, std::nullopt, 0.0}));
  CHECK(boxed == doctest::Approx(oracle::kLemniscateBoxArea).epsilon(1e-4));
  // Convex lobes touching all four sides of their half box.
  CHECK(boxed >= 2.0);
}

TEST_CASE("migration point sits on the top edge of the box") {
  const ClosedPolyline boxed =
      normalize(reconstruct_figure_eight(lemniscate_arc(1.0, 800)), {RenormKind::Box, std::nullopt, 0.0});
  const Point2 m = migration_point(boxed);
  CHECK(m.y == 1.0);
  // Highest point of the lemniscate: r = 1/sqrt 2 at polar angle pi/6.
  CHECK(m.x == doctest::Approx(std::sqrt(0.5) * std::cos(pi / 6)).epsilon(1e-2));
}

TEST_CASE("logarithmic time") {
  CHECK(to_log_time(0.0, 1.0) == 0.0);
  CHECK(to_log_time(1.0 - std::exp(-2.0), 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  for (double rem : {1e-6, 1e-4, 1e-2, 0.5, 1.0}) {
    const double T = 1.0, t = T - rem;
    CHECK(std::abs(from_log_time(to_log_time(t, T), T) - t) <= 1e-14);
  }
  CHECK_THROWS_AS(to_log_time(1.0, 1.0), Error);
}
