#pragma once

// Polyline geometry for the figure-eight fundamental domain.
//
// Orientation convention: signed curvature is positive for counterclockwise
// turning. A QuarterArc runs from the double point over the top of the right
// lobe down to the rightmost point, i.e. clockwise, so its lobe curvature is
// the negated signed curvature. All "kappa" values returned by the
// arc-oriented functions below are lobe curvatures (positive on a convex lobe).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csf/error.hpp"

namespace csf {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
  Point2& operator+=(Point2 b) {
    x += b.x;
    y += b.y;
    return *this;
  }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
/// Counterclockwise quarter turn.
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }
inline Point2 mirror_x(Point2 a) { return {a.x, -a.y}; }

/// Closed polygonal curve; the last vertex connects back to the first.
class ClosedPolyline {
 public:
  ClosedPolyline() = default;
  /// Throws InvalidArc if fewer than 3 vertices or consecutive duplicates.
  explicit ClosedPolyline(std::vector<Point2> vertices);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }

 private:
  std::vector<Point2> vertices_;
};

/// Upper half of the right lobe, from the double point (origin) to the
/// rightmost point on the x-axis. Construction validates every invariant.
class QuarterArc {
 public:
  static constexpr std::size_t kMinVertices = 8;
  /// Relative tolerance (times current X) for the endpoint constraints.
  static constexpr double kEndpointTol = 1e-9;

  /// Validates; throws Error{InvalidArc or Underresolved} listing indices.
  explicit QuarterArc(std::vector<Point2> vertices);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }
  const Point2& front() const { return vertices_.front(); }
  const Point2& back() const { return vertices_.back(); }

  double min_segment() const;
  double max_segment() const;
  double length() const;

 private:
  std::vector<Point2> vertices_;
};

/// Indices of vertices violating QuarterArc invariants (empty when valid).
/// Used by ingestion and by the integrator's collapse check.
std::vector<std::size_t> arc_violations(std::span<const Point2> vertices);

struct ArcMeasures {
  double A = 0.0;          ///< area of both lobes
  double X = 0.0;          ///< half-width of the bounding box
  double Y = 0.0;          ///< half-height of the bounding box
  double alpha = 0.0;      ///< tangent angle at the double point
  double kappa_top = 0.0;  ///< curvature where the tangent is horizontal
  double kappa_right = 0.0;
};

/// Signed curvature of the circle through p, q, r (counterclockwise positive).
double menger_curvature(Point2 p, Point2 q, Point2 r);

/// Signed shoelace area of a closed vertex loop.
double shoelace_area(std::span<const Point2> loop);

/// Area between an open polyline and the x-axis (closed along the axis).
double area_under(std::span<const Point2> polyline);

/// Per-vertex lobe curvature and tangent angle of a QuarterArc using the
/// symmetry ghost points at both ends. The tangent angle is that of the
/// circle through the three stencil points, evaluated at the middle one.
struct ArcStencil {
  std::vector<double> kappa;    ///< lobe curvature (>= 0 on convex arcs)
  std::vector<double> tangent;  ///< tangent angle psi in radians
};
ArcStencil arc_stencil(std::span<const Point2> vertices);

ArcMeasures arc_measures(const QuarterArc& arc);

struct ResamplePolicy {
  double h_max = 0.01;
  double dtheta_max = 0.1;
  std::size_t max_points = 20000;
  /// Fraction of the caps targeted when redistributing, so a fresh arc does
  /// not immediately violate them again.
  double target_fraction = 0.5;
  /// Crowding trigger: a segment shorter than this fraction of its local
  /// target counts as a violation. Zero disables it.
  double min_ratio = 0.0;
  /// Lipschitz bound on the target spacing as a function of arclength.
  double grading = 0.25;
};

/// True when every segment obeys the policy caps (and crowding bound).
bool conforms(const QuarterArc& arc, const ResamplePolicy& policy);

/// Redistributes vertices along a cubic Hermite interpolant of (x, y)
/// against chord arclength. Endpoints are copied exactly. A conforming arc
/// is returned unchanged.
QuarterArc resample_arc(const QuarterArc& arc, const ResamplePolicy& policy);

/// Same redistribution for an arbitrary open polyline (no symmetry ghosts).
std::vector<Point2> resample_polyline(std::span<const Point2> polyline,
                                      const ResamplePolicy& policy);

/// Distance from a point to the segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Sampled symmetric Hausdorff distance. Each polyline is sampled with
/// spacing <= eps (default: a quarter of the shortest segment of either
/// input) and every sample is measured against the other polyline's
/// segments exactly. `shuffle_seed` only changes the visiting order used
/// by the early-exit search; the result does not depend on it.
double hausdorff_distance(const ClosedPolyline& a, const ClosedPolyline& b,
                          std::optional<double> eps = std::nullopt,
                          std::uint64_t shuffle_seed = 0);

/// Figure-eight from its fundamental domain: the right lobe is the arc
/// followed by its reversed x-axis mirror, and the left lobe is the point
/// reflection of the right lobe traversed backwards, so the strand passes
/// smoothly through the double point. Contains 4n-4 vertices; the origin
/// appears twice (once per passage).
ClosedPolyline reconstruct_figure_eight(const QuarterArc& arc);

struct NestingReport {
  bool nested = false;
  /// max over i<j of |c_i - c_j| - (r_i - r_j); negative when strictly nested.
  double worst_violation = 0.0;
};

/// Tait-Kneser check on an open polyline whose interior circumcircle
/// curvatures are positive and strictly increasing along the list.
/// Throws PreconditionViolated otherwise.
NestingReport osculating_disks_nested(std::span<const Point2> polyline, double tol_nest = 0.0);

/// Tait-Kneser check restricted to the part of the arc with
/// theta in [theta_lo, theta_hi].
NestingReport osculating_disks_nested(const QuarterArc& arc, double theta_lo, double theta_hi,
                                      double tol_nest = 0.0);

}  // namespace csf
