#include "gilbert/render.hpp"

#include <algorithm>
#include <array>
#include <ostream>

#include "gilbert/format.hpp"

namespace gilbert {
namespace {

std::string num(double v) { return format_double(v); }

double stroke_width(const SvgOptions& o, const Window& box) {
  return o.stroke > 0.0 ? o.stroke : std::max(box.width(), box.height()) / 400.0;
}

void open_svg(std::ostream& out, const Window& box, const SvgOptions& o) {
  const double h = o.pixels * box.height() / box.width();
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!o.comment.empty()) out << "<!-- " << o.comment << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(o.pixels) << "\" height=\"" << num(h)
      << "\" viewBox=\"" << num(box.x0) << ' ' << num(box.y0) << ' ' << num(box.width()) << ' '
      << num(box.height()) << "\">\n";
  // Flip y about the middle of the box so the origin sits bottom-left.
  out << "<g transform=\"matrix(1 0 0 -1 0 " << num(box.y0 + box.y1) << ")\">\n";
  out << "<rect x=\"" << num(box.x0) << "\" y=\"" << num(box.y0) << "\" width=\"" << num(box.width())
      << "\" height=\"" << num(box.height()) << "\" fill=\"white\" stroke=\"black\" stroke-width=\""
      << num(2 * stroke_width(o, box)) << "\"/>\n";
}

void close_svg(std::ostream& out) { out << "</g>\n</svg>\n"; }

void line(std::ostream& out, Point2 a, Point2 b, double w, const char* colour) {
  out << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y)
      << "\" stroke=\"" << colour << "\" stroke-width=\"" << num(w) << "\"/>\n";
}

// Clips the axis-aligned segment [a, b] to the window; false if nothing is left.
bool clip(Point2& a, Point2& b, const Window& w) {
  const Point2 lo{std::min(a.x, b.x), std::min(a.y, b.y)};
  const Point2 hi{std::max(a.x, b.x), std::max(a.y, b.y)};
  const Point2 c0{std::max(lo.x, w.x0), std::max(lo.y, w.y0)};
  const Point2 c1{std::min(hi.x, w.x1), std::min(hi.y, w.y1)};
  if (c0.x > c1.x || c0.y > c1.y) return false;
  a = c0;
  b = c1;
  return true;
}

}  // namespace

void write_tessellation_svg(std::ostream& out, const Tessellation& t, const Window& box, const SvgOptions& o) {
  open_svg(out, box, o);
  const double w = stroke_width(o, box);
  for (const auto& r : t.half_rays()) {
    Point2 a = t.seed(r.seed_id).position;
    Point2 b = t.tip(r);
    if (clip(a, b, box)) line(out, a, b, w, "black");
  }
  if (o.show_seeds) {
    for (const auto& s : t.seeds().seeds) {
      if (!box.contains(s.position)) continue;
      out << "<circle cx=\"" << num(s.position.x) << "\" cy=\"" << num(s.position.y) << "\" r=\"" << num(2.5 * w)
          << "\" fill=\"" << (s.pinned ? "red" : "steelblue") << "\"/>\n";
    }
  }
  close_svg(out);
}

void write_graph_svg(std::ostream& out, const PlanarGraph& g, const SvgOptions& o) {
  open_svg(out, g.box, o);
  const double w = stroke_width(o, g.box);
  if (o.fill_faces) {
    static constexpr std::array<const char*, 6> palette{"#f4d35e", "#ee964b", "#f95738", "#0d3b66", "#7fb069",
                                                        "#a3c4f3"};
    const int outer = g.outer_face();
    for (std::size_t f = 0; f < g.faces.size(); ++f) {
      if (static_cast<int>(f) == outer) continue;
      out << "<polygon fill=\"" << palette[f % palette.size()] << "\" points=\"";
      for (std::size_t k = 0; k < g.faces[f].cycle.size(); ++k) {
        const Point2 p = g.vertices[static_cast<std::size_t>(g.faces[f].cycle[k])].position;
        out << (k ? " " : "") << num(p.x) << ',' << num(p.y);
      }
      out << "\"/>\n";
    }
  }
  for (const auto& e : g.edges) {
    line(out, g.vertices[static_cast<std::size_t>(e.v0)].position, g.vertices[static_cast<std::size_t>(e.v1)].position,
         w, "black");
  }
  close_svg(out);
}

void write_lattice_svg(std::ostream& out, const lattice::LatticeRayResult& r, const SvgOptions& o) {
  const double n = static_cast<double>(r.config.box_side);
  const Window box{0.0, 0.0, n, n};
  open_svg(out, box, o);
  const double w = stroke_width(o, box) * 2;
  for (const auto& ray : r.rays) {
    const auto& seed = r.config.seeds[ray.seed];
    Point2 a{static_cast<double>(seed.position.x), static_cast<double>(seed.position.y)};
    Point2 b{ray.tip.x / 2.0, ray.tip.y / 2.0};
    if (clip(a, b, box)) line(out, a, b, w, ray.stop == lattice::LatticeStop::HeadOn ? "darkred" : "black");
  }
  if (o.show_seeds) {
    for (const auto& s : r.config.seeds) {
      out << "<circle cx=\"" << s.position.x << "\" cy=\"" << s.position.y << "\" r=\"" << num(2 * w)
          << "\" fill=\"steelblue\"/>\n";
    }
  }
  close_svg(out);
}

}  // namespace gilbert
