#pragma once

#include <span>

#include "csf/diagnostics.hpp"
#include "csf/geometry.hpp"

namespace csf::detail {

struct Margins {
  /// Largest counterclockwise turning over interior vertices.
  double convex = 0.0;
  /// min kappa_theta with three vertices dropped at each end.
  double kappa_theta = 0.0;
};

Margins monotone_margins(std::span<const Point2> vertices, const ThetaProfile& profile);

}  // namespace csf::detail
