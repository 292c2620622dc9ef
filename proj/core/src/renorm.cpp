#include "csf/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csf {

const char* to_string(RenormKind kind) {
  switch (kind) {
    case RenormKind::Box: return "box";
    case RenormKind::Width: return "width";
    case RenormKind::Parabolic: return "parabolic";
    case RenormKind::Reaper: return "reaper";
  }
  return "unknown";
}

std::optional<RenormKind> renorm_kind_from_string(const std::string& s) {
  for (auto k : {RenormKind::Box, RenormKind::Width, RenormKind::Parabolic, RenormKind::Reaper}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

ClosedPolyline normalize(const ClosedPolyline& curve, const RenormMode& mode) {
  double X = 0.0, Y = 0.0;
  for (const Point2& p : curve.vertices()) {
    X = std::max(X, std::abs(p.x));
    Y = std::max(Y, std::abs(p.y));
  }
  if (!(X > 0.0) || !(Y > 0.0)) {
    throw Error(ErrorKind::PreconditionViolated, "normalize: zero bounding-box extent");
  }
  double sx = 1.0, sy = 1.0;
  switch (mode.kind) {
    case RenormKind::Box:
      sx = 1.0 / X;
      sy = 1.0 / Y;
      break;
    case RenormKind::Width:
      sx = sy = 1.0 / X;
      break;
    case RenormKind::Parabolic: {
      if (!mode.T_hat || !(*mode.T_hat > mode.t)) {
        throw Error(ErrorKind::PreconditionViolated, "normalize: parabolic mode needs T_hat > t");
      }
      sx = sy = 1.0 / std::sqrt(*mode.T_hat - mode.t);
      break;
    }
    case RenormKind::Reaper:
      sx = sy = (std::numbers::pi / 2) / Y;
      break;
  }
  std::vector<Point2> out;
  out.reserve(curve.size());
  for (const Point2& p : curve.vertices()) out.push_back({p.x * sx, p.y * sy});
  return ClosedPolyline(std::move(out));
}

const ClosedPolyline& bowtie() {
  static const ClosedPolyline shape({{-1.0, -1.0}, {1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}});
  return shape;
}

double bowtie_distance(const ClosedPolyline& boxed, std::optional<double> eps, std::uint64_t seed) {
  return hausdorff_distance(boxed, bowtie(), eps, seed);
}

Point2 migration_point(const ClosedPolyline& boxed) {
  std::optional<Point2> best;
  for (const Point2& p : boxed.vertices()) {
    if (!(p.x > 0.0)) continue;
    if (!best || p.y > best->y || (p.y == best->y && p.x > best->x)) best = p;
  }
  if (!best) throw Error(ErrorKind::PreconditionViolated, "migration_point: no vertex with x > 0");
  return *best;
}

double lobe_area(const ClosedPolyline& curve) {
  const auto v = curve.vertices();
  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == Point2{0.0, 0.0}) cuts.push_back(i);
  }
  if (cuts.size() < 2) return std::abs(shoelace_area(v));
  double total = 0.0;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    const std::size_t begin = cuts[c];
    const std::size_t end = c + 1 < cuts.size() ? cuts[c + 1] : cuts[0] + v.size();
    std::vector<Point2> loop;
    for (std::size_t i = begin; i < end; ++i) loop.push_back(v[i % v.size()]);
    total += std::abs(shoelace_area(loop));
  }
  return total;
}

double to_log_time(double t, double T_hat) {
  if (!(t < T_hat)) throw Error(ErrorKind::PreconditionViolated, "time map needs t < T_hat");
  return -std::log(T_hat - t);
}

double from_log_time(double tau, double T_hat) { return T_hat - std::exp(-tau); }

}  // namespace csf
