#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gilbert/geometry.hpp"
#include "gilbert/growth.hpp"

namespace gilbert {

enum class VertexKind { Corner, TJunction };

struct GraphVertex {
  Point2 position;
  VertexKind kind = VertexKind::TJunction;
};

struct GraphEdge {
  int v0 = 0;
  int v1 = 0;
};

struct GraphFace {
  std::vector<int> cycle;  // vertex indices; interior faces counter-clockwise
  double signed_area = 0.0;
  bool rectangle = false;  // axis-aligned rectangle once collinear runs are merged
};

/// Planar subdivision of the box by the clipped final segments and the box
/// boundary. Vertices are T-junctions and the four box corners.
struct PlanarGraph {
  Window box;
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;
  std::vector<GraphFace> faces;

  std::vector<int> degrees() const;
  /// Index of the clockwise (negative area) face, or -1 if there is none.
  int outer_face() const;
  int rectangle_count() const;
};

/// Builds the subdivision of t.window() induced by the tessellation.
///
/// Every incidence between a segment (or box side) and another becomes a
/// vertex; coordinates are compared exactly because each incidence inherits one
/// coordinate from each line involved. Faces are traced on half-edges, turning
/// as far left as possible at every vertex.
///
/// Throws std::invalid_argument if the horizon is shorter than the box side or a
/// seed lies outside the open box, and DegenerateInput on a transversal crossing,
/// an L-shaped meeting inside the box, or a dangling segment end.
PlanarGraph extract_graph(const Tessellation& t);

struct EulerReport {
  int seeds = 0;
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int rectangles = 0;
  int bad_degree_vertices = 0;
  std::vector<std::string> failures;

  bool pass() const noexcept { return failures.empty(); }
};

/// Checks rectangles = n+1, E = 3n+4, V = 2n+4, V-E+F = 2, degree 3 at every
/// T-junction and degree 2 at every corner.
EulerReport euler_check(const PlanarGraph& g, int n_seeds);

/// JSON document with `vertices` (x, y, kind), `edges` (v0, v1) and `faces`
/// (vertex cycles), plus `outer_face`.
void write_graph_json(std::ostream& out, const PlanarGraph& g);

}  // namespace gilbert
