#include "csf/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "detail/numeric.hpp"

namespace csf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateTriple: return "degenerate triple";
    case ErrorKind::Underresolved: return "underresolved";
    case ErrorKind::BudgetExceeded: return "budget exceeded";
    case ErrorKind::PreconditionViolated: return "precondition violated";
    case ErrorKind::InvalidArc: return "invalid arc";
    case ErrorKind::ResolutionCollapse: return "resolution collapse";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Parse: return "parse error";
  }
  return "unknown";
}

namespace {

std::string join_indices(const std::vector<std::size_t>& idx) {
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(idx.size(), 12);
  for (std::size_t k = 0; k < shown; ++k) os << (k ? "," : "") << idx[k];
  if (shown < idx.size()) os << ",...";
  return os.str();
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  while (a > pi) a -= 2 * pi;
  while (a <= -pi) a += 2 * pi;
  return a;
}

/// Turning angle at q for the path p -> q -> r (counterclockwise positive).
double turning(Point2 p, Point2 q, Point2 r) {
  const Point2 a = q - p;
  const Point2 b = r - q;
  return std::atan2(cross(a, b), dot(a, b));
}

/// Neighbours of vertex i of a quarter arc, substituting the symmetry ghost
/// points past either end.
std::pair<Point2, Point2> arc_neighbours(std::span<const Point2> v, std::size_t i) {
  const std::size_t n = v.size();
  if (i == 0) return {-v[1], v[1]};
  if (i + 1 == n) return {v[n - 2], mirror_x(v[n - 2])};
  return {v[i - 1], v[i + 1]};
}

}  // namespace

ClosedPolyline::ClosedPolyline(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw Error(ErrorKind::InvalidArc, "closed polyline needs at least 3 vertices");
  }
  std::vector<std::size_t> dup;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] == vertices_[(i + 1) % vertices_.size()]) dup.push_back(i);
  }
  if (!dup.empty()) {
    throw Error(ErrorKind::InvalidArc, "closed polyline has repeated consecutive vertices at " +
                                           join_indices(dup),
                dup);
  }
}

std::vector<std::size_t> arc_violations(std::span<const Point2> v) {
  std::vector<std::size_t> bad;
  const std::size_t n = v.size();
  if (n < 3) {
    for (std::size_t i = 0; i < n; ++i) bad.push_back(i);
    return bad;
  }
  const double tol = QuarterArc::kEndpointTol * std::max(std::abs(v.back().x), 1e-300);
  auto flag = [&](std::size_t i) {
    if (bad.empty() || bad.back() != i) bad.push_back(i);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = v[i];
    bool ok = std::isfinite(p.x) && std::isfinite(p.y);
    if (i == 0) ok = ok && norm(p) <= tol;
    if (i + 1 == n) ok = ok && std::abs(p.y) <= tol;
    if (i > 0) ok = ok && p.x > v[i - 1].x;
    if (i > 0 && i + 1 < n) {
      ok = ok && p.x > 0.0 && p.y > 0.0;
      ok = ok && cross(p - v[i - 1], v[i + 1] - p) <= 0.0;
    }
    if (!ok) flag(i);
  }
  return bad;
}

QuarterArc::QuarterArc(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < kMinVertices) {
    throw Error(ErrorKind::Underresolved,
                "underresolved: quarter arc needs at least " + std::to_string(kMinVertices) +
                    " vertices, got " + std::to_string(vertices_.size()));
  }
  auto bad = arc_violations(vertices_);
  if (!bad.empty()) {
    throw Error(ErrorKind::InvalidArc, "invalid quarter arc at vertices " + join_indices(bad),
                std::move(bad));
  }
}

double QuarterArc::min_segment() const {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    h = std::min(h, distance(vertices_[i - 1], vertices_[i]));
  }
  return h;
}

double QuarterArc::max_segment() const {
  double h = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    h = std::max(h, distance(vertices_[i - 1], vertices_[i]));
  }
  return h;
}

double QuarterArc::length() const {
  double s = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) s += distance(vertices_[i - 1], vertices_[i]);
  return s;
}

double menger_curvature(Point2 p, Point2 q, Point2 r) {
  const double a = distance(p, q);
  const double b = distance(q, r);
  const double c = distance(p, r);
  if (a == 0.0 || b == 0.0 || c == 0.0) {
    throw Error(ErrorKind::DegenerateTriple, "degenerate triple");
  }
  // Divide in stages: the product of three lengths underflows on tiny arcs.
  return 2.0 * (cross(q - p, r - q) / (a * b)) / c;
}

double shoelace_area(std::span<const Point2> loop) {
  double twice = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    twice += cross(loop[i], loop[(i + 1) % loop.size()]);
  }
  return 0.5 * twice;
}

double area_under(std::span<const Point2> polyline) {
  double area = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    area += (polyline[i].x - polyline[i - 1].x) * (polyline[i].y + polyline[i - 1].y);
  }
  return std::abs(0.5 * area);
}

ArcStencil arc_stencil(std::span<const Point2> v) {
  const std::size_t n = v.size();
  ArcStencil st;
  st.kappa.resize(n);
  st.tangent.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [p, r] = arc_neighbours(v, i);
    const Point2 q = v[i];
    try {
      st.kappa[i] = -menger_curvature(p, q, r);
    } catch (const Error&) {
      throw Error(ErrorKind::DegenerateTriple,
                  "degenerate triple at vertex " + std::to_string(i), {i});
    }
    const double h1 = distance(p, q);
    const double h2 = distance(q, r);
    const double phi1 = std::atan2(q.y - p.y, q.x - p.x);
    const double phi2 = std::atan2(r.y - q.y, r.x - q.x);
    st.tangent[i] = phi1 + wrap_angle(phi2 - phi1) * h1 / (h1 + h2);
  }
  st.tangent.front() = std::atan2(v[1].y, v[1].x);
  st.tangent.back() = -std::numbers::pi / 2;
  return st;
}

ArcMeasures arc_measures(const QuarterArc& arc) {
  const auto v = arc.vertices();
  const std::size_t n = v.size();
  if (n < QuarterArc::kMinVertices) {
    throw Error(ErrorKind::Underresolved, "underresolved");
  }
  ArcMeasures m;
  m.A = 4.0 * area_under(v);
  m.X = v.back().x;

  // Height: quadratic through the highest vertex and its neighbours,
  // parametrised by chord length.
  std::size_t top = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i].y > v[top].y) top = i;
  }
  m.Y = v[top].y;
  if (top > 0 && top + 1 < n) {
    const double s0 = -distance(v[top - 1], v[top]);
    const double s2 = distance(v[top], v[top + 1]);
    const double y0 = v[top - 1].y, y1 = v[top].y, y2 = v[top + 1].y;
    // y(s) = y1 + b s + c s^2 through (s0,y0), (0,y1), (s2,y2).
    const double d0 = (y0 - y1) / s0;
    const double d2 = (y2 - y1) / s2;
    const double c = (d2 - d0) / (s2 - s0);
    const double b = d0 - c * s0;
    if (c < 0.0) m.Y = std::max(m.Y, y1 - b * b / (4.0 * c));
  }

  m.alpha = std::atan2(v[1].y, v[1].x);

  const ArcStencil st = arc_stencil(v);
  m.kappa_right = st.kappa.back();
  // Tangent angle decreases from alpha to -pi/2; interpolate kappa at psi=0.
  m.kappa_top = st.kappa[top];
  for (std::size_t i = 1; i < n; ++i) {
    if (st.tangent[i - 1] >= 0.0 && st.tangent[i] < 0.0) {
      const double w = st.tangent[i - 1] / (st.tangent[i - 1] - st.tangent[i]);
      m.kappa_top = st.kappa[i - 1] + w * (st.kappa[i] - st.kappa[i - 1]);
      break;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Resampling

namespace {

enum class EndRule { Free, QuarterArc };

/// Cubic Hermite interpolant of a polyline against chord arclength. Node
/// derivatives use fourth-order finite-difference weights on five points;
/// in QuarterArc mode the stencil extends through the symmetry ghosts so
/// both ends are treated as interior points of the full figure-eight.
class HermiteCurve {
 public:
  HermiteCurve(std::span<const Point2> v, EndRule rule) : pts_(v.begin(), v.end()) {
    const std::size_t n = pts_.size();
    s_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) s_[i] = s_[i - 1] + distance(pts_[i - 1], pts_[i]);

    // Extended node list (with ghosts) for derivative stencils.
    constexpr std::size_t g = 2;
    std::vector<double> es;
    std::vector<Point2> ev;
    const double L = s_.back();
    if (rule == EndRule::QuarterArc) {
      for (std::size_t k = g; k >= 1; --k) {
        es.push_back(-s_[k]);
        ev.push_back(-pts_[k]);
      }
    }
    es.insert(es.end(), s_.begin(), s_.end());
    ev.insert(ev.end(), pts_.begin(), pts_.end());
    if (rule == EndRule::QuarterArc) {
      for (std::size_t k = 1; k <= g; ++k) {
        es.push_back(2.0 * L - s_[n - 1 - k]);
        ev.push_back(mirror_x(pts_[n - 1 - k]));
      }
    }
    const std::size_t off = rule == EndRule::QuarterArc ? g : 0;
    const std::size_t en = es.size();
    const std::size_t width = std::min<std::size_t>(5, en);

    d_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = i + off;
      std::size_t lo = c >= width / 2 ? c - width / 2 : 0;
      lo = std::min(lo, en - width);
      const auto w = detail::fd_weights(es[c], std::span(es).subspan(lo, width), 1);
      Point2 d{};
      for (std::size_t k = 0; k < width; ++k) d += w[1][k] * ev[lo + k];
      d_[i] = d;
    }
    if (rule == EndRule::QuarterArc) {
      // Keep x(s) monotone (Fritsch-Carlson bound) so the arc stays a graph.
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double secant = (pts_[i + 1].x - pts_[i].x) / (s_[i + 1] - s_[i]);
        d_[i].x = std::clamp(d_[i].x, 0.0, 3.0 * secant);
        d_[i + 1].x = std::clamp(d_[i + 1].x, 0.0, 3.0 * secant);
      }
      d_.back().x = 0.0;
    }
  }

  double length() const { return s_.back(); }
  std::span<const double> nodes() const { return s_; }

  Point2 eval(double s) const {
    const std::size_t n = s_.size();
    if (s <= 0.0) return pts_.front();
    if (s >= s_.back()) return pts_.back();
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - s_.begin()) - 1, n - 2);
    const double h = s_[i + 1] - s_[i];
    const double u = (s - s_[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    return h00 * pts_[i] + (h10 * h) * d_[i] + h01 * pts_[i + 1] + (h11 * h) * d_[i + 1];
  }

 private:
  std::vector<Point2> pts_;
  std::vector<double> s_;
  std::vector<Point2> d_;
};

/// Lobe curvature magnitude at each vertex for target spacing purposes.
std::vector<double> spacing_curvature(std::span<const Point2> v, EndRule rule) {
  const std::size_t n = v.size();
  if (rule == EndRule::QuarterArc) {
    auto k = arc_stencil(v).kappa;
    for (auto& x : k) x = std::abs(x);
    return k;
  }
  std::vector<double> k(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) k[i] = std::abs(menger_curvature(v[i - 1], v[i], v[i + 1]));
  if (n >= 3) {
    k.front() = k[1];
    k.back() = k[n - 2];
  }
  return k;
}

/// Turning magnitude at every vertex; ends use the symmetry ghosts in
/// QuarterArc mode and are zero otherwise.
std::vector<double> turning_magnitudes(std::span<const Point2> v, EndRule rule) {
  const std::size_t n = v.size();
  std::vector<double> t(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rule == EndRule::Free && (i == 0 || i + 1 == n)) continue;
    const auto [p, r] = arc_neighbours(v, i);
    t[i] = std::abs(turning(p, v[i], r));
  }
  return t;
}

double local_target(double kappa, const ResamplePolicy& pol, double fraction) {
  double g = pol.h_max;
  if (kappa > 0.0) g = std::min(g, fraction * pol.dtheta_max / kappa);
  return g;
}

bool conforms_impl(std::span<const Point2> v, const ResamplePolicy& pol, EndRule rule) {
  const std::size_t n = v.size();
  const double h_tol = pol.h_max * (1.0 + 1e-12);
  for (std::size_t i = 1; i < n; ++i) {
    if (distance(v[i - 1], v[i]) > h_tol) return false;
  }
  const auto turn = turning_magnitudes(v, rule);
  for (double t : turn) {
    if (t > pol.dtheta_max) return false;
  }
  if (pol.min_ratio > 0.0) {
    const auto k = spacing_curvature(v, rule);
    for (std::size_t i = 1; i < n; ++i) {
      const double g = local_target(std::max(k[i - 1], k[i]), pol, 1.0);
      if (distance(v[i - 1], v[i]) < pol.min_ratio * g) return false;
    }
  }
  return true;
}

std::vector<Point2> redistribute(std::span<const Point2> v, const ResamplePolicy& pol,
                                 EndRule rule) {
  const std::size_t n = v.size();
  const HermiteCurve curve(v, rule);
  const auto s = curve.nodes();
  const double L = curve.length();

  // Target spacing at the old nodes, graded so it varies slowly in s.
  const auto kappa = spacing_curvature(v, rule);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = local_target(kappa[i], pol, pol.target_fraction);
  for (std::size_t i = 1; i < n; ++i) g[i] = std::min(g[i], g[i - 1] + pol.grading * (s[i] - s[i - 1]));
  for (std::size_t i = n - 1; i-- > 0;) g[i] = std::min(g[i], g[i + 1] + pol.grading * (s[i + 1] - s[i]));

  // Cumulative point density M(s) = int ds / g.
  std::vector<double> M(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    M[i] = M[i - 1] + 0.5 * (s[i] - s[i - 1]) * (1.0 / g[i - 1] + 1.0 / g[i]);
  }
  const double total = M.back();
  const auto segments = static_cast<std::size_t>(std::max(1.0, std::ceil(total - 1e-9)));
  if (segments + 1 > pol.max_points) {
    throw Error(ErrorKind::BudgetExceeded, "budget exceeded: resampling needs " +
                                               std::to_string(segments + 1) + " points, budget " +
                                               std::to_string(pol.max_points));
  }

  std::vector<double> params(segments + 1);
  params.front() = 0.0;
  params.back() = L;
  std::size_t j = 0;
  for (std::size_t k = 1; k < segments; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(segments);
    while (j + 2 < n && M[j + 1] < target) ++j;
    const double w = (target - M[j]) / (M[j + 1] - M[j]);
    params[k] = s[j] + w * (s[j + 1] - s[j]);
  }

  auto evaluate = [&](const std::vector<double>& ps) {
    std::vector<Point2> out(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) out[k] = curve.eval(ps[k]);
    out.front() = v.front();
    out.back() = v.back();
    return out;
  };

  std::vector<Point2> out = evaluate(params);
  // Local bisection until the caps hold on the new vertices.
  for (int pass = 0; pass < 60; ++pass) {
    const std::size_t m = out.size();
    const auto turn = turning_magnitudes(out, rule);
    std::vector<char> split(m - 1, 0);
    bool any = false;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (distance(out[i], out[i + 1]) > pol.h_max) split[i] = 1;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (turn[i] <= pol.dtheta_max) continue;
      if (i > 0) split[i - 1] = 1;
      if (i + 1 < m) split[i] = 1;
    }
    std::vector<double> next;
    next.reserve(m * 2);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      next.push_back(params[i]);
      if (split[i]) {
        next.push_back(0.5 * (params[i] + params[i + 1]));
        any = true;
      }
    }
    next.push_back(params.back());
    if (!any) return out;
    if (next.size() > pol.max_points) {
      throw Error(ErrorKind::BudgetExceeded, "budget exceeded: refinement needs more than " +
                                                 std::to_string(pol.max_points) + " points");
    }
    params = std::move(next);
    out = evaluate(params);
  }
  throw Error(ErrorKind::BudgetExceeded, "budget exceeded: refinement did not converge");
}

}  // namespace

bool conforms(const QuarterArc& arc, const ResamplePolicy& policy) {
  return conforms_impl(arc.vertices(), policy, EndRule::QuarterArc);
}

QuarterArc resample_arc(const QuarterArc& arc, const ResamplePolicy& policy) {
  if (conforms(arc, policy)) return arc;
  return QuarterArc(redistribute(arc.vertices(), policy, EndRule::QuarterArc));
}

std::vector<Point2> resample_polyline(std::span<const Point2> polyline,
                                      const ResamplePolicy& policy) {
  if (polyline.size() < 2) throw Error(ErrorKind::Underresolved, "underresolved: polyline");
  if (polyline.size() >= 3 && conforms_impl(polyline, policy, EndRule::Free)) {
    return {polyline.begin(), polyline.end()};
  }
  if (polyline.size() == 2) {
    // A single segment carries no curvature; split uniformly.
    const double L = distance(polyline[0], polyline[1]);
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(L / policy.h_max)));
    std::vector<Point2> out;
    for (std::size_t k = 0; k <= m; ++k) {
      const double u = static_cast<double>(k) / static_cast<double>(m);
      out.push_back(polyline[0] + u * (polyline[1] - polyline[0]));
    }
    return out;
  }
  return redistribute(polyline, policy, EndRule::Free);
}

// ---------------------------------------------------------------------------
// Distances

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double u = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + u * ab);
}

namespace {

std::vector<Point2> sample_closed(std::span<const Point2> v, double eps) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % v.size()];
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(distance(a, b) / eps)));
    for (std::size_t k = 0; k < m; ++k) {
      out.push_back(a + (static_cast<double>(k) / static_cast<double>(m)) * (b - a));
    }
  }
  return out;
}

/// Directed distance sup_{p in samples} dist(p, polyline), with the
/// early-break search: a sample stops scanning segments as soon as it is
/// provably not the new maximum.
double directed_hausdorff(std::vector<Point2> samples, std::span<const Point2> poly,
                          std::mt19937_64& rng) {
  std::vector<std::size_t> seg(poly.size());
  std::iota(seg.begin(), seg.end(), std::size_t{0});
  std::shuffle(samples.begin(), samples.end(), rng);
  std::shuffle(seg.begin(), seg.end(), rng);
  double cmax = 0.0;
  std::size_t last_hit = 0;
  for (const Point2& p : samples) {
    // Try the segment that closed the previous search first; neighbours on
    // the curve tend to be close to the same segment.
    const std::size_t h = seg[last_hit];
    double cmin = point_segment_distance(p, poly[h], poly[(h + 1) % poly.size()]);
    if (cmin < cmax) continue;
    for (std::size_t k = 0; k < seg.size(); ++k) {
      const std::size_t i = seg[k];
      const double d = point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]);
      if (d < cmin) {
        cmin = d;
        last_hit = k;
        if (cmin < cmax) break;
      }
    }
    cmax = std::max(cmax, cmin);
  }
  return cmax;
}

double min_closed_segment(std::span<const Point2> v) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) h = std::min(h, distance(v[i], v[(i + 1) % v.size()]));
  return h;
}

}  // namespace

double hausdorff_distance(const ClosedPolyline& a, const ClosedPolyline& b,
                          std::optional<double> eps, std::uint64_t shuffle_seed) {
  const double spacing =
      eps.value_or(0.25 * std::min(min_closed_segment(a.vertices()), min_closed_segment(b.vertices())));
  std::mt19937_64 rng(shuffle_seed);
  const double ab = directed_hausdorff(sample_closed(a.vertices(), spacing), b.vertices(), rng);
  const double ba = directed_hausdorff(sample_closed(b.vertices(), spacing), a.vertices(), rng);
  return std::max(ab, ba);
}

ClosedPolyline reconstruct_figure_eight(const QuarterArc& arc) {
  const auto v = arc.vertices();
  const std::size_t n = v.size();
  std::vector<Point2> right(v.begin(), v.end());
  for (std::size_t i = n - 2; i >= 1; --i) right.push_back(mirror_x(v[i]));
  right.front() = Point2{0.0, 0.0};
  const std::size_t m = right.size();
  std::vector<Point2> all = right;
  all.reserve(2 * m);
  for (std::size_t k = 0; k < m; ++k) all.push_back(-right[(m - k) % m]);
  return ClosedPolyline(std::move(all));
}

// ---------------------------------------------------------------------------
// Osculating disks

NestingReport osculating_disks_nested(std::span<const Point2> v, double tol_nest) {
  if (v.size() < 6) throw Error(ErrorKind::PreconditionViolated, "precondition violated: need >= 6 points");
  struct Disk {
    Point2 c;
    double r;
  };
  std::vector<Disk> disks;
  double prev_k = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double k = std::abs(menger_curvature(v[i - 1], v[i], v[i + 1]));
    if (!(k > 0.0) || (i > 1 && !(k > prev_k))) {
      throw Error(ErrorKind::PreconditionViolated,
                  "precondition violated: curvature not strictly increasing at vertex " +
                      std::to_string(i),
                  {i});
    }
    prev_k = k;
    // Circumcentre of (p, q, r).
    const Point2 p = v[i - 1], q = v[i], r = v[i + 1];
    const Point2 b = p - q, c = r - q;
    const double d = 2.0 * cross(b, c);
    const Point2 u{(c.y * dot(b, b) - b.y * dot(c, c)) / d, (b.x * dot(c, c) - c.x * dot(b, b)) / d};
    disks.push_back({q + u, 1.0 / k});
  }
  NestingReport rep;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  // Circles whose stencils share a vertex meet at that vertex and cannot be
  // strictly nested, whatever the curve; only disjoint stencils are compared.
  constexpr std::size_t kDisjoint = 3;
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + kDisjoint; j < disks.size(); ++j) {
      const double viol = distance(disks[i].c, disks[j].c) - (disks[i].r - disks[j].r);
      rep.worst_violation = std::max(rep.worst_violation, viol);
    }
  }
  rep.nested = rep.worst_violation <= tol_nest;
  return rep;
}

NestingReport osculating_disks_nested(const QuarterArc& arc, double theta_lo, double theta_hi,
                                      double tol_nest) {
  const auto v = arc.vertices();
  const auto st = arc_stencil(v);
  std::size_t first = v.size(), last = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double theta = -st.tangent[i];
    if (theta >= theta_lo && theta <= theta_hi) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  if (first > last) throw Error(ErrorKind::PreconditionViolated, "precondition violated: empty window");
  return osculating_disks_nested(v.subspan(first - 1, last - first + 3), tol_nest);
}

}  // namespace csf
