#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "csf/runner.hpp"

namespace csf {

namespace {

struct Viewport {
  double cx = 0.0, cy = 0.0, scale = 1.0, size = 600.0;

  Point2 map(Point2 p) const { return {size / 2 + scale * (p.x - cx), size / 2 - scale * (p.y - cy)}; }
};

/// Box mode pins [-1, 1]^2 to the margins; other modes fit the curve.
Viewport viewport_for(const ClosedPolyline& curve, RenormKind kind, const SvgOptions& opts) {
  Viewport vp;
  vp.size = opts.size;
  const double inner = opts.size - 2.0 * opts.margin;
  if (kind == RenormKind::Box) {
    vp.scale = inner / 2.0;
    return vp;
  }
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
  for (const Point2& p : curve.vertices()) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  vp.cx = 0.5 * (lo_x + hi_x);
  vp.cy = 0.5 * (lo_y + hi_y);
  vp.scale = inner / std::max(hi_x - lo_x, hi_y - lo_y);
  return vp;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string open_svg(const SvgOptions& opts) {
  const std::string s = num(opts.size);
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + s + "\" height=\"" + s + "\" viewBox=\"0 0 " + s +
         " " + s + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string polygon(std::span<const Point2> pts, const Viewport& vp, const std::string& attrs) {
  std::string out = "<polygon " + attrs + " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 q = vp.map(pts[i]);
    out += (i ? " " : "") + num(q.x) + "," + num(q.y);
  }
  return out + "\"/>\n";
}

std::string dot(Point2 p, const Viewport& vp, const char* fill, const char* cls) {
  const Point2 q = vp.map(p);
  return std::string("<circle class=\"") + cls + "\" cx=\"" + num(q.x) + "\" cy=\"" + num(q.y) +
         "\" r=\"5\" fill=\"" + fill + "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
}

const char* kBowtieAttrs = "class=\"bowtie\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"";

}  // namespace

std::string render_bowtie_svg(const SvgOptions& opts) {
  const Viewport vp = viewport_for(bowtie(), RenormKind::Box, opts);
  return open_svg(opts) + polygon(bowtie().vertices(), vp, kBowtieAttrs) + "</svg>\n";
}

std::string render_svg(const QuarterArc& arc, const RenormMode& mode, const SvgOptions& opts) {
  const ClosedPolyline curve = normalize(reconstruct_figure_eight(arc), mode);
  const Viewport vp = viewport_for(curve, mode.kind, opts);
  std::string out = open_svg(opts);
  out += "<!-- renormalisation: " + std::string(to_string(mode.kind)) + " -->\n";
  if (mode.kind == RenormKind::Box && opts.overlay_bowtie) out += polygon(bowtie().vertices(), vp, kBowtieAttrs);
  out += polygon(curve.vertices(), vp, "class=\"curve\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"");
  if (mode.kind == RenormKind::Box) {
    // Top of the right lobe (horizontal tangent) and its mirror below the axis.
    const Point2 top = migration_point(curve);
    out += dot(top, vp, "black", "theta0");
    out += dot({top.x, -top.y}, vp, "white", "thetapi");
  }
  return out + "</svg>\n";
}

void snapshot_svg(const Checkpoint& cp, const RenormMode& mode, const std::filesystem::path& svg_path,
                  const SvgOptions& opts) {
  RenormMode m = mode;
  if (m.kind == RenormKind::Parabolic && !m.T_hat) {
    m.T_hat = cp.T_hat;
    m.t = cp.t;
  }
  const std::string svg = render_svg(QuarterArc(cp.vertices), m, opts);
  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + svg_path.string());
  out << svg;
  if (!out) throw Error(ErrorKind::Io, "write failed: " + svg_path.string());
}

}  // namespace csf
