#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace csf::detail {

/// Fornberg's recursion: weights c[k][j] such that
/// f^(k)(z) ~= sum_j c[k][j] f(x[j]) for k = 0..m on arbitrary nodes.
/// Nodes are rescaled to unit spread first: the recursion multiplies node
/// differences, which underflows once the spacing is tiny.
inline std::vector<std::vector<double>> fd_weights(double z, std::span<const double> xs,
                                                   std::size_t m) {
  const std::size_t n = xs.size();
  double scale = 0.0;
  for (double v : xs) scale = std::max(scale, std::abs(v - z));
  if (!(scale > 0.0)) scale = 1.0;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (xs[i] - z) / scale;
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0];
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  double f = 1.0;
  for (std::size_t k = 1; k <= m; ++k) {
    f /= scale;
    for (double& w : c[k]) w *= f;
  }
  return c;
}

/// Three-point first derivative at x1 on nonuniform nodes x0 < x1 < x2.
inline double d1_three(double x0, double x1, double x2, double f0, double f1, double f2) {
  const double h1 = x1 - x0;
  const double h2 = x2 - x1;
  return (h1 * h1 * f2 - h2 * h2 * f0 + (h2 * h2 - h1 * h1) * f1) / (h1 * h2 * (h1 + h2));
}

/// Three-point second derivative at x1 on nonuniform nodes.
inline double d2_three(double x0, double x1, double x2, double f0, double f1, double f2) {
  const double h1 = x1 - x0;
  const double h2 = x2 - x1;
  return 2.0 * (h1 * f2 - (h1 + h2) * f1 + h2 * f0) / (h1 * h2 * (h1 + h2));
}

/// Linear interpolation of y(x) on increasing x at xq (clamped to the ends).
inline double interp_linear(std::span<const double> x, std::span<const double> y, double xq) {
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  std::size_t lo = 0, hi = x.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (x[mid] <= xq ? lo : hi) = mid;
  }
  const double w = (xq - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + w * (y[hi] - y[lo]);
}

}  // namespace csf::detail
