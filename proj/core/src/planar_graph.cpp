#include "gilbert/planar_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "gilbert/format.hpp"

namespace gilbert {

namespace {

struct Segment {
  double line;  // y for horizontal, x for vertical
  double lo, hi;
  bool boundary;
  std::vector<double> stops;  // positions along the segment that are vertices
};

std::string at(Point2 p) { return "(" + format_double(p.x) + ", " + format_double(p.y) + ")"; }

// E, N, W, S: counter-clockwise order.
int heading(Point2 from, Point2 to) {
  if (to.x > from.x) return 0;
  if (to.y > from.y) return 1;
  if (to.x < from.x) return 2;
  return 3;
}

}  // namespace

std::vector<int> PlanarGraph::degrees() const {
  std::vector<int> deg(vertices.size(), 0);
  for (const auto& e : edges) {
    ++deg[static_cast<std::size_t>(e.v0)];
    ++deg[static_cast<std::size_t>(e.v1)];
  }
  return deg;
}

int PlanarGraph::outer_face() const {
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (faces[f].signed_area < 0.0) return static_cast<int>(f);
  }
  return -1;
}

int PlanarGraph::rectangle_count() const {
  return static_cast<int>(std::count_if(faces.begin(), faces.end(), [](const GraphFace& f) {
    return f.signed_area > 0.0 && f.rectangle;
  }));
}

PlanarGraph extract_graph(const Tessellation& t) {
  const Window box = t.window();
  if (t.horizon() < std::max(box.width(), box.height())) {
    throw std::invalid_argument("extract_graph: horizon is shorter than the box side");
  }

  std::vector<Segment> hs, vs;
  hs.push_back({box.y0, box.x0, box.x1, true, {}});
  hs.push_back({box.y1, box.x0, box.x1, true, {}});
  vs.push_back({box.x0, box.y0, box.y1, true, {}});
  vs.push_back({box.x1, box.y0, box.y1, true, {}});

  for (const auto& s : t.seeds().seeds) {
    const Point2 p = s.position;
    if (!(p.x > box.x0 && p.x < box.x1 && p.y > box.y0 && p.y < box.y1)) {
      if (box.contains(p)) throw DegenerateInput("seed " + std::to_string(s.id) + " lies on the box boundary at " + at(p));
      throw std::invalid_argument("seed " + std::to_string(s.id) + " lies outside the box");
    }
    const Direction d = s.mark;
    const double lo_box = d == Direction::Horizontal ? box.x0 : box.y0;
    const double hi_box = d == Direction::Horizontal ? box.x1 : box.y1;
    const double lo = std::max(lo_box, along(t.tip(t.ray(s.id, Side::Minus)), d));
    const double hi = std::min(hi_box, along(t.tip(t.ray(s.id, Side::Plus)), d));
    (d == Direction::Horizontal ? hs : vs).push_back({across(p, d), lo, hi, false, {}});
  }

  std::sort(vs.begin(), vs.end(), [](const Segment& a, const Segment& b) { return a.line < b.line; });

  std::vector<std::pair<Point2, VertexKind>> incidences;
  for (auto& h : hs) {
    auto it = std::lower_bound(vs.begin(), vs.end(), h.lo,
                               [](const Segment& s, double v) { return s.line < v; });
    for (; it != vs.end() && it->line <= h.hi; ++it) {
      Segment& v = *it;
      if (h.line < v.lo || h.line > v.hi) continue;
      const Point2 q{v.line, h.line};
      const bool end_h = q.x == h.lo || q.x == h.hi;
      const bool end_v = q.y == v.lo || q.y == v.hi;
      if (!end_h && !end_v) throw DegenerateInput("segments cross transversally at " + at(q));
      if (end_h && end_v) {
        if (!(h.boundary && v.boundary)) throw DegenerateInput("segment ends meet without a T-junction at " + at(q));
        incidences.push_back({q, VertexKind::Corner});
      } else {
        incidences.push_back({q, VertexKind::TJunction});
      }
      h.stops.push_back(q.x);
      v.stops.push_back(q.y);
    }
  }

  std::sort(incidences.begin(), incidences.end(), [](const auto& a, const auto& b) {
    return std::pair(a.first.y, a.first.x) < std::pair(b.first.y, b.first.x);
  });
  incidences.erase(std::unique(incidences.begin(), incidences.end(),
                               [](const auto& a, const auto& b) { return a.first == b.first; }),
                   incidences.end());

  PlanarGraph g;
  g.box = box;
  std::map<std::pair<double, double>, int> index;
  for (const auto& [p, kind] : incidences) {
    index.emplace(std::pair(p.x, p.y), static_cast<int>(g.vertices.size()));
    g.vertices.push_back({p, kind});
  }
  auto vertex_at = [&](Point2 p) {
    auto it = index.find({p.x, p.y});
    if (it == index.end()) throw DegenerateInput("dangling segment end at " + at(p));
    return it->second;
  };

  auto add_edges = [&](Segment& s, bool horizontal) {
    auto point = [&](double pos) { return horizontal ? Point2{pos, s.line} : Point2{s.line, pos}; };
    std::sort(s.stops.begin(), s.stops.end());
    s.stops.erase(std::unique(s.stops.begin(), s.stops.end()), s.stops.end());
    if (s.stops.empty() || s.stops.front() != s.lo) throw DegenerateInput("dangling segment end at " + at(point(s.lo)));
    if (s.stops.back() != s.hi) throw DegenerateInput("dangling segment end at " + at(point(s.hi)));
    for (std::size_t k = 1; k < s.stops.size(); ++k) {
      g.edges.push_back({vertex_at(point(s.stops[k - 1])), vertex_at(point(s.stops[k]))});
    }
  };
  for (auto& h : hs) add_edges(h, true);
  for (auto& v : vs) add_edges(v, false);

  // Half-edge walk. out[v][dir] is the neighbour of v in that heading, or -1.
  const std::size_t nv = g.vertices.size();
  std::vector<std::array<int, 4>> out(nv, {-1, -1, -1, -1});
  for (const auto& e : g.edges) {
    const Point2 a = g.vertices[static_cast<std::size_t>(e.v0)].position;
    const Point2 b = g.vertices[static_cast<std::size_t>(e.v1)].position;
    out[static_cast<std::size_t>(e.v0)][static_cast<std::size_t>(heading(a, b))] = e.v1;
    out[static_cast<std::size_t>(e.v1)][static_cast<std::size_t>(heading(b, a))] = e.v0;
  }
  std::vector<std::array<char, 4>> used(nv, {0, 0, 0, 0});
  for (std::size_t start = 0; start < nv; ++start) {
    for (int d0 = 0; d0 < 4; ++d0) {
      if (out[start][static_cast<std::size_t>(d0)] < 0 || used[start][static_cast<std::size_t>(d0)]) continue;
      GraphFace face;
      std::size_t v = start;
      int d = d0;
      int turns = 0;
      while (!used[v][static_cast<std::size_t>(d)]) {
        used[v][static_cast<std::size_t>(d)] = 1;
        face.cycle.push_back(static_cast<int>(v));
        const std::size_t w = static_cast<std::size_t>(out[v][static_cast<std::size_t>(d)]);
        // Relative to the start vertex, so thin faces far from the origin keep their area.
        const Point2 o = g.vertices[start].position;
        const Point2 a{g.vertices[v].position.x - o.x, g.vertices[v].position.y - o.y};
        const Point2 b{g.vertices[w].position.x - o.x, g.vertices[w].position.y - o.y};
        face.signed_area += a.x * b.y - b.x * a.y;
        // Leftmost turn: first outgoing heading clockwise from the reverse one.
        const int back = (d + 2) % 4;
        int next = -1;
        for (int k = 1; k <= 4; ++k) {
          const int cand = (back - k + 4) % 4;
          if (out[w][static_cast<std::size_t>(cand)] >= 0) {
            next = cand;
            break;
          }
        }
        if (next != d) ++turns;
        v = w;
        d = next;
      }
      face.signed_area *= 0.5;
      if (face.signed_area > 0.0) {
        double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
        for (int k : face.cycle) {
          const Point2 p = g.vertices[static_cast<std::size_t>(k)].position;
          x0 = std::min(x0, p.x);
          y0 = std::min(y0, p.y);
          x1 = std::max(x1, p.x);
          y1 = std::max(y1, p.y);
        }
        bool on_boundary = true;
        for (int k : face.cycle) {
          const Point2 p = g.vertices[static_cast<std::size_t>(k)].position;
          on_boundary = on_boundary && (p.x == x0 || p.x == x1 || p.y == y0 || p.y == y1);
        }
        face.rectangle = turns == 4 && on_boundary;
      }
      g.faces.push_back(std::move(face));
    }
  }
  return g;
}

EulerReport euler_check(const PlanarGraph& g, int n_seeds) {
  EulerReport r;
  r.seeds = n_seeds;
  r.vertices = static_cast<int>(g.vertices.size());
  r.edges = static_cast<int>(g.edges.size());
  r.faces = static_cast<int>(g.faces.size());
  r.rectangles = g.rectangle_count();

  const auto deg = g.degrees();
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const int want = g.vertices[v].kind == VertexKind::Corner ? 2 : 3;
    if (deg[v] != want) ++r.bad_degree_vertices;
  }

  auto expect = [&](const char* what, long long got, long long want) {
    if (got != want) {
      r.failures.push_back(std::string(what) + " = " + std::to_string(got) + ", expected " + std::to_string(want));
    }
  };
  expect("rectangles", r.rectangles, n_seeds + 1LL);
  expect("edges", r.edges, 3LL * n_seeds + 4);
  expect("vertices", r.vertices, 2LL * n_seeds + 4);
  expect("V - E + F", static_cast<long long>(r.vertices) - r.edges + r.faces, 2);
  expect("vertices with wrong degree", r.bad_degree_vertices, 0);
  return r;
}

void write_graph_json(std::ostream& out, const PlanarGraph& g) {
  nlohmann::ordered_json doc;
  doc["box"] = {g.box.x0, g.box.y0, g.box.x1, g.box.y1};
  auto& vertices = doc["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : g.vertices) {
    vertices.push_back({{"x", v.position.x},
                        {"y", v.position.y},
                        {"kind", v.kind == VertexKind::Corner ? "corner" : "t_junction"}});
  }
  auto& edges = doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) edges.push_back({{"v0", e.v0}, {"v1", e.v1}});
  auto& faces = doc["faces"] = nlohmann::ordered_json::array();
  for (const auto& f : g.faces) faces.push_back(f.cycle);
  doc["outer_face"] = g.outer_face();
  out << doc.dump(1) << '\n';
}

}  // namespace gilbert
