#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "csf/seeds.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace csf;
using std::numbers::pi;

TEST_CASE("lemniscate arc endpoints and height") {
  const QuarterArc arc = lemniscate_arc(1.0, 800);
  CHECK(arc.size() == 800);
  CHECK(arc.front() == Point2{0.0, 0.0});
  CHECK(arc.back() == Point2{1.0, 0.0});
  double ymax = 0.0;
  for (const Point2& p : arc.vertices()) ymax = std::max(ymax, p.y);
  CHECK(std::abs(ymax - oracle::kLemniscateMaxY) <= 1e-5);
}

TEST_CASE("lemniscate arc scales exactly") {
  const QuarterArc one = lemniscate_arc(1.0, 300);
  const QuarterArc two = lemniscate_arc(2.0, 300);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(two[i].x == 2.0 * one[i].x);
    CHECK(two[i].y == 2.0 * one[i].y);
  }
}

TEST_CASE("lemniscate measures across scales and resolutions") {
  for (double a : {0.5, 1.0, 2.0}) {
    for (std::size_t n : {200u, 400u, 800u}) {
      CAPTURE(a);
      CAPTURE(n);
      const QuarterArc arc = lemniscate_arc(a, n);
      const ArcMeasures m = arc_measures(arc);
      CHECK(std::abs(m.A - a * a) <= 1e-3 * a * a);
      CHECK(m.X == a);
      CHECK(std::abs(m.alpha - pi / 4) <= 2e-3);
      CHECK(validate_monotone(arc).monotone());
    }
  }
}

TEST_CASE("ingest round trips and fixes orientation") {
  const QuarterArc arc = lemniscate_arc(1.0, 400);
  std::vector<Point2> pts(arc.vertices().begin(), arc.vertices().end());

  const QuarterArc same = ingest_arc(pts);
  REQUIRE(same.size() == arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) CHECK(distance(same[i], arc[i]) <= 1e-12);

  std::reverse(pts.begin(), pts.end());
  const QuarterArc flipped = ingest_arc(pts);
  REQUIRE(flipped.size() == arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) CHECK(distance(flipped[i], arc[i]) <= 1e-12);
}

TEST_CASE("ingest snaps near-miss endpoints") {
  const QuarterArc arc = lemniscate_arc(1.0, 100);
  std::vector<Point2> pts(arc.vertices().begin(), arc.vertices().end());
  pts.front() = {1e-6, -1e-6};
  pts.back().y = 2e-6;
  const QuarterArc out = ingest_arc(pts);
  CHECK(out.front() == Point2{0.0, 0.0});
  CHECK(out.back().y == 0.0);
}

TEST_CASE("ingest rejects a concave blip at that vertex") {
  const QuarterArc arc = lemniscate_arc(1.0, 200);
  std::vector<Point2> pts(arc.vertices().begin(), arc.vertices().end());
  const std::size_t k = 120;
  pts[k].y -= 0.01;
  try {
    ingest_arc(pts);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArc);
    CHECK(std::find(e.indices().begin(), e.indices().end(), k) != e.indices().end());
  }
}

TEST_CASE("ingest resamples only when asked") {
  const QuarterArc arc = lemniscate_arc(1.0, 100);
  std::vector<Point2> pts(arc.vertices().begin(), arc.vertices().end());
  ResamplePolicy pol;
  pol.h_max = 0.002;
  CHECK(ingest_arc(pts).size() == 100);
  CHECK(ingest_arc(pts, pol).size() > 100);
}

TEST_CASE("points CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "csf_seed_csv";
  std::filesystem::create_directories(dir);
  SUBCASE("with a header") {
    const auto path = dir / "ok.csv";
    {
      std::ofstream f(path);
      f << "x,y\n";
      const QuarterArc arc = lemniscate_arc(1.0, 50);
      for (const Point2& p : arc.vertices()) f << p.x << "," << p.y << "\n";
    }
    SeedSpec spec;
    spec.kind = SeedKind::FromPoints;
    spec.source_path = path;
    CHECK(make_seed(spec).size() == 50);
  }
  SUBCASE("a bad line is reported with its number") {
    const auto path = dir / "bad.csv";
    {
      std::ofstream f(path);
      f << "x,y\n0,0\n0.1,oops\n";
    }
    try {
      read_points_csv(path);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
  }
  SUBCASE("a missing file is an I/O error") {
    try {
      read_points_csv(dir / "absent.csv");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
    }
  }
}

TEST_CASE("monotone validation") {
  SUBCASE("lemniscate passes") {
    const MonotoneReport r = validate_monotone(lemniscate_arc(1.0, 400));
    CHECK(r.convex);
    CHECK(r.kappa_theta_positive);
    CHECK(r.kappa_thetatheta_nonzero);
    CHECK(r.kx_positive);
  }
  SUBCASE("constant curvature is not monotone") {
    const MonotoneReport r = validate_monotone(QuarterArc(test::circle_quarter(1.0, 200)));
    CHECK_FALSE(r.kappa_theta_positive);
    CHECK_FALSE(r.monotone());
  }
  SUBCASE("second derivative at the tip is stable under refinement") {
    const double coarse = validate_monotone(lemniscate_arc(1.0, 400)).kappa_thetatheta_at_right;
    const double fine = validate_monotone(lemniscate_arc(1.0, 4000)).kappa_thetatheta_at_right;
    CHECK(std::abs(coarse / fine - 1.0) <= 0.05);
  }
}
