#pragma once

// Renormalisations of the evolving figure-eight and the bowtie statistics.

#include <cstdint>
#include <optional>
#include <string>

#include "csf/geometry.hpp"

namespace csf {

enum class RenormKind { Box, Width, Parabolic, Reaper };

const char* to_string(RenormKind kind);
std::optional<RenormKind> renorm_kind_from_string(const std::string& s);

struct RenormMode {
  RenormKind kind = RenormKind::Box;
  /// Vanishing-time estimate and current time; parabolic mode only.
  std::optional<double> T_hat;
  double t = 0.0;
};

/// box: (x/X, y/Y); width: C/X; parabolic: C/sqrt(T_hat - t);
/// reaper: C (pi/2)/Y. X and Y are the bounding-box half extents.
ClosedPolyline normalize(const ClosedPolyline& curve, const RenormMode& mode);

/// The quadrilateral through (-1,-1), (1,1), (1,-1), (-1,1) in that order.
const ClosedPolyline& bowtie();

/// Hausdorff distance of a box-normalised figure-eight to the bowtie.
double bowtie_distance(const ClosedPolyline& boxed, std::optional<double> eps = std::nullopt,
                       std::uint64_t seed = 0);

/// Vertex with x > 0 and largest y (ties: larger x).
Point2 migration_point(const ClosedPolyline& boxed);

/// Sum of the absolute shoelace areas of the lobes, split at the
/// passages through the origin.
double lobe_area(const ClosedPolyline& curve);

double to_log_time(double t, double T_hat);
double from_log_time(double tau, double T_hat);

}  // namespace csf
