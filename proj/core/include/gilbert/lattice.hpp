#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gilbert/geometry.hpp"

namespace gilbert::lattice {

struct LatticePoint {
  long x = 0;
  long y = 0;

  friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// Inclusive integer box {x0..x1} x {y0..y1}.
struct LatticeBox {
  long x0 = 0;
  long y0 = 0;
  long x1 = 0;
  long y1 = 0;

  static LatticeBox square(long side) { return {0, 0, side, side}; }
  bool contains(LatticePoint p) const noexcept { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  friend constexpr bool operator==(const LatticeBox&, const LatticeBox&) = default;
};

/// Inhibitory sites have both coordinates even; every other site is excitatory.
constexpr bool inhibitory(LatticePoint p) noexcept { return p.x % 2 == 0 && p.y % 2 == 0; }

/// Active sites, sorted and unique. Without a domain the lattice is all of Z^2.
struct LatticeState {
  std::vector<LatticePoint> active;
  std::optional<LatticeBox> domain;

  LatticeState() = default;
  LatticeState(std::vector<LatticePoint> points, std::optional<LatticeBox> box);

  bool is_active(LatticePoint p) const;
  std::size_t size() const noexcept { return active.size(); }
  friend bool operator==(const LatticeState&, const LatticeState&) = default;
};

/// One synchronous update: a site becomes active iff among its (domain-clipped)
/// four neighbours the active excitatory ones outnumber the active inhibitory
/// ones by at least one. The site's own state and type play no role.
LatticeState ca_step(const LatticeState& state);

struct CaCycle {
  std::size_t first_step = 0;  // first step of the repeating segment
  std::size_t period = 0;
};

struct CaTrajectory {
  std::vector<LatticeState> states;  // states[t] = A(t), t = 0..steps
  std::optional<CaCycle> cycle;      // first recurrence seen within the history window

  std::vector<std::size_t> sizes() const;
};

CaTrajectory ca_run(const LatticeState& initial, std::size_t steps, std::size_t history_window = 64);

/// Plain-text grid: `#` active, `.` inactive, top row = largest y. Requires a domain.
void write_grid(std::ostream& out, const LatticeState& state);
/// Reads a grid into a state whose domain is {0..w-1} x {0..h-1}.
LatticeState read_grid(std::istream& in);
/// CSV `step,active` of |A(t)|.
void write_sizes_csv(std::ostream& out, const CaTrajectory& trajectory);

// ---------------------------------------------------------------------------
// Lattice ray growth
// ---------------------------------------------------------------------------

enum class LatticeStop { TJunction, Corner, HeadOn, FreeAtHorizon };
const char* stop_name(LatticeStop s) noexcept;

struct LatticeSeed {
  LatticePoint position;
  Direction mark = Direction::Horizontal;
};

struct LatticeRayConfig {
  long box_side = 0;  // N; seeds must lie in {1..N-1}^2
  std::vector<LatticeSeed> seeds;
};

/// Coordinates doubled, so every meeting of tips happens at an integer cell and
/// an integer number of half time units.
struct HalfPoint {
  long x = 0;
  long y = 0;

  friend constexpr auto operator<=>(const HalfPoint&, const HalfPoint&) = default;
};

struct LatticeRay {
  std::size_t seed = 0;
  Side side = Side::Plus;
  long half_length = 0;  // extent in half edges; also the stop time in half units
  LatticeStop stop = LatticeStop::FreeAtHorizon;
  HalfPoint tip;
};

struct LatticeRayResult {
  LatticeRayConfig config;
  long horizon = 0;
  std::vector<LatticeRay> rays;  // [2k] Plus, [2k+1] Minus

  const LatticeRay& ray(std::size_t seed, Side side) const { return rays[2 * seed + (side == Side::Minus)]; }
  /// Every covered cell (doubled coordinates), sorted.
  std::vector<HalfPoint> trace() const;
  /// Covered cells inside the box [0, 2N]^2 (doubled coordinates).
  std::vector<HalfPoint> trace_in_box() const;
  /// Lattice sites covered by the trace, restricted to {0..N}^2.
  std::vector<LatticePoint> sites_in_box() const;
};

/// Grows two rays from each seed along the lattice at one edge per time unit,
/// resolved at half-integer times. A tip stops on the first cell already covered
/// by another ray's trace, or when it reaches a cell simultaneously with another
/// tip. Stop causes: TJunction (interior of an orthogonal trace), Corner
/// (endpoint of an orthogonal trace, or an orthogonal tip arriving at the same
/// instant), HeadOn (a collinear tip).
///
/// Throws std::invalid_argument if N <= 2, a seed lies outside {1..N-1}^2, two
/// seeds coincide, or the horizon is negative.
LatticeRayResult lattice_ray_simulate(const LatticeRayConfig& config, long horizon);

struct ComparisonRow {
  long step = 0;
  std::size_t ca_active = 0;
  std::size_t ray_sites = 0;
  std::size_t symmetric_difference = 0;
};

/// A_U(t) from the automaton next to V_N intersected with the ray trace at time
/// t, for t = 0..steps, both started from the seed sites.
std::vector<ComparisonRow> compare_ca_with_rays(const LatticeRayConfig& config, long steps);

}  // namespace gilbert::lattice
