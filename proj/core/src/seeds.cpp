#include "csf/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "csf/diagnostics.hpp"
#include "detail/margins.hpp"

namespace csf {

namespace {

Point2 lemniscate_point(double u) {
  const double s = std::sin(u);
  const double c = std::cos(u);
  const double d = 1.0 + s * s;
  return {c / d, s * c / d};
}

// Relative weight of curvature against arclength in the seed spacing.
constexpr double kCurvatureWeight = 0.2;

}  // namespace

QuarterArc lemniscate_arc(double a, std::size_t n) {
  if (!(a > 0.0) || n < 32) {
    throw Error(ErrorKind::PreconditionViolated, "lemniscate_arc: need a > 0 and n >= 32");
  }
  // Dense table on the unit lemniscate, origin first (u = pi/2 down to 0).
  const std::size_t m = std::max<std::size_t>(20000, 50 * n);
  std::vector<double> u(m), mass(m, 0.0);
  Point2 prev = lemniscate_point(std::numbers::pi / 2);
  double prev_w = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    u[j] = (std::numbers::pi / 2) * (1.0 - static_cast<double>(j) / static_cast<double>(m - 1));
    const Point2 p = lemniscate_point(u[j]);
    const double w = 1.0 + kCurvatureWeight * 3.0 * norm(p);
    if (j > 0) mass[j] = mass[j - 1] + 0.5 * (w + prev_w) * distance(prev, p);
    prev = p;
    prev_w = w;
  }

  std::vector<Point2> v(n);
  std::size_t j = 0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double target = mass.back() * static_cast<double>(k) / static_cast<double>(n - 1);
    while (mass[j + 1] < target) ++j;
    const double w = (target - mass[j]) / (mass[j + 1] - mass[j]);
    v[k] = a * lemniscate_point(u[j] + w * (u[j + 1] - u[j]));
  }
  v.front() = {0.0, 0.0};
  v.back() = {a, 0.0};
  return QuarterArc(std::move(v));
}

QuarterArc ingest_arc(std::vector<Point2> points, const std::optional<ResamplePolicy>& policy) {
  const std::size_t n = points.size();
  if (n < QuarterArc::kMinVertices) {
    throw Error(ErrorKind::InvalidArc, "ingest_arc: need at least " +
                                           std::to_string(QuarterArc::kMinVertices) + " points");
  }
  const bool reversed = norm(points.front()) > norm(points.back());
  if (reversed) std::reverse(points.begin(), points.end());
  auto input_index = [&](std::size_t i) { return reversed ? n - 1 - i : i; };

  double X = 0.0;
  for (const auto& p : points) X = std::max(X, p.x);
  const double tol = 1e-3 * X;
  if (norm(points.front()) > tol) {
    throw Error(ErrorKind::InvalidArc, "ingest_arc: no endpoint near the origin", {input_index(0)});
  }
  if (std::abs(points.back().y) > tol) {
    throw Error(ErrorKind::InvalidArc, "ingest_arc: last point is off the x-axis", {input_index(n - 1)});
  }
  points.front() = {0.0, 0.0};
  points.back().y = 0.0;

  if (auto bad = arc_violations(points); !bad.empty()) {
    for (auto& i : bad) i = input_index(i);
    std::sort(bad.begin(), bad.end());
    std::string list;
    for (auto i : bad) list += (list.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorKind::InvalidArc, "ingest_arc: invalid arc at input indices " + list, std::move(bad));
  }
  QuarterArc arc(std::move(points));
  if (policy) return resample_arc(arc, *policy);
  return arc;
}

std::vector<Point2> read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<Point2> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0.0, y = 0.0;
    std::string rest;
    if (!(ss >> x >> y) || (ss >> rest)) {
      if (lineno == 1 && pts.empty()) continue;  // header
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    pts.push_back({x, y});
  }
  return pts;
}

QuarterArc make_seed(const SeedSpec& spec) {
  if (spec.kind == SeedKind::Lemniscate) return lemniscate_arc(spec.a, spec.n);
  if (!spec.source_path) throw Error(ErrorKind::PreconditionViolated, "from_points seed needs a source path");
  return ingest_arc(read_points_csv(*spec.source_path));
}

MonotoneReport validate_monotone(const QuarterArc& arc) {
  MonotoneReport r;
  const auto v = arc.vertices();
  const std::size_t n = v.size();
  const ThetaProfile profile = theta_profile(arc);
  const detail::Margins mg = detail::monotone_margins(v, profile);
  r.convex_margin = mg.convex;
  r.convex = mg.convex < 0.0;
  r.kappa_theta_min = mg.kappa_theta;

  const auto s = profile.samples();
  double kmax = 0.0;
  for (const auto& x : s) kmax = std::max(kmax, x.kappa);
  r.kappa_theta_positive = mg.kappa_theta > 1e-6 * kmax;

  const double gap = s[n - 1].theta - s[n - 2].theta;
  r.kappa_thetatheta_at_right = 2.0 * (s[n - 2].kappa - s[n - 1].kappa) / (gap * gap);
  r.kappa_thetatheta_nonzero = std::abs(r.kappa_thetatheta_at_right) > 1e-6 * kmax;

  // Least-squares slope of kappa = m x through the double point.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i <= 5 && i < n; ++i) {
    num += s[i].kappa * v[i].x;
    den += v[i].x * v[i].x;
  }
  r.kx_at_origin = num / den;
  r.kx_positive = r.kx_at_origin > 0.0;
  return r;
}

}  // namespace csf
