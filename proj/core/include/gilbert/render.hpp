#pragma once

#include <iosfwd>
#include <string>

#include "gilbert/geometry.hpp"
#include "gilbert/growth.hpp"
#include "gilbert/lattice.hpp"
#include "gilbert/planar_graph.hpp"

namespace gilbert {

struct SvgOptions {
  double pixels = 800.0;       // width of the rendered image
  double stroke = 0.0;         // line width in domain units; 0 picks side/400
  bool show_seeds = true;
  bool fill_faces = false;     // graph rendering only
  std::string comment;         // written as <!-- ... --> (e.g. a timestamp)
};

/// Segments clipped to `box`, seeds as dots. The viewBox is the box and the y
/// axis points up.
void write_tessellation_svg(std::ostream& out, const Tessellation& t, const Window& box,
                            const SvgOptions& options = {});

/// Edges of the subdivision; interior faces filled with a colour derived from
/// their index when requested.
void write_graph_svg(std::ostream& out, const PlanarGraph& g, const SvgOptions& options = {});

/// Lattice ray trace in [0, N]^2 in lattice units.
void write_lattice_svg(std::ostream& out, const lattice::LatticeRayResult& r, const SvgOptions& options = {});

}  // namespace gilbert
