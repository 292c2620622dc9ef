#pragma once

// Shared fixtures for the unit tests.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "csf/geometry.hpp"

namespace test {

/// Upper half of the circle of radius r centred at (r, 0), from the origin
/// to (2r, 0), with n vertices equally spaced in angle.
inline std::vector<csf::Point2> circle_quarter(double r, std::size_t n) {
  std::vector<csf::Point2> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = std::numbers::pi * (1.0 - static_cast<double>(k) / static_cast<double>(n - 1));
    v[k] = {r + r * std::cos(phi), r * std::sin(phi)};
  }
  v.front() = {0.0, 0.0};
  v.back() = {2.0 * r, 0.0};
  return v;
}

/// Regular n-gon on the circle of radius r about the origin.
inline csf::ClosedPolyline circle_polygon(double r, std::size_t n) {
  std::vector<csf::Point2> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    v[k] = {r * std::cos(phi), r * std::sin(phi)};
  }
  return csf::ClosedPolyline(v);
}

inline double mean_radius(const csf::ClosedPolyline& c) {
  double s = 0.0;
  for (const auto& p : c.vertices()) s += csf::norm(p);
  return s / static_cast<double>(c.size());
}

/// Largest absolute turning angle at an interior vertex of an open polyline.
inline double max_turn(std::span<const csf::Point2> v) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const csf::Point2 a = v[i] - v[i - 1], b = v[i + 1] - v[i];
    worst = std::max(worst, std::abs(std::atan2(csf::cross(a, b), csf::dot(a, b))));
  }
  return worst;
}

inline csf::ClosedPolyline as_closed(std::span<const csf::Point2> v) {
  return csf::ClosedPolyline(std::vector<csf::Point2>(v.begin(), v.end()));
}

/// Intersection points of non-adjacent segments of a closed polyline.
inline std::vector<csf::Point2> self_intersections(std::span<const csf::Point2> v) {
  std::vector<csf::Point2> hits;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const csf::Point2 a = v[i], b = v[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if ((j + 1) % n == i) continue;
      const csf::Point2 c = v[j], d = v[(j + 1) % n];
      const csf::Point2 r = b - a, s = d - c;
      const double den = csf::cross(r, s);
      if (den == 0.0) continue;
      const double t = csf::cross(c - a, s) / den;
      const double u = csf::cross(c - a, r) / den;
      if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) hits.push_back(a + t * r);
    }
  }
  return hits;
}

}  // namespace test
