#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "csf/geometry.hpp"

namespace csf {

enum class SeedKind { Lemniscate, FromPoints };

struct SeedSpec {
  SeedKind kind = SeedKind::Lemniscate;
  double a = 1.0;
  std::size_t n = 800;
  std::optional<std::filesystem::path> source_path;
};

/// Quarter of the Bernoulli lemniscate x = a cos u/(1+sin^2 u),
/// y = a sin u cos u/(1+sin^2 u), u in [0, pi/2], from the origin to (a, 0),
/// with n vertices distributed by arclength and curvature.
QuarterArc lemniscate_arc(double a, std::size_t n);

/// Sanitises a raw point list into a QuarterArc: orients it to start at the
/// origin, snaps the endpoint constraints, and rejects non-monotone or
/// non-convex input (InvalidArc, listing offending input indices).
/// Resampling happens only when `policy` is given.
QuarterArc ingest_arc(std::vector<Point2> points, const std::optional<ResamplePolicy>& policy = {});

/// Two-column x,y CSV; an optional non-numeric header line is skipped.
std::vector<Point2> read_points_csv(const std::filesystem::path& path);

QuarterArc make_seed(const SeedSpec& spec);

struct MonotoneReport {
  bool convex = false;
  /// Largest turning (counterclockwise) across interior vertices; must be <= 0.
  double convex_margin = 0.0;
  bool kappa_theta_positive = false;
  /// min kappa_theta over the interior theta window.
  double kappa_theta_min = 0.0;
  bool kappa_thetatheta_nonzero = false;
  double kappa_thetatheta_at_right = 0.0;
  bool kx_positive = false;
  double kx_at_origin = 0.0;

  bool monotone() const { return convex && kappa_theta_positive && kappa_thetatheta_nonzero && kx_positive; }
};

/// Discrete check of the monotone figure-eight conditions that can be
/// tested on a polyline. Real analyticity is assumed, not checked.
MonotoneReport validate_monotone(const QuarterArc& arc);

}  // namespace csf
