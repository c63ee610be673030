#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gilbert/geometry.hpp"
#include "gilbert/sampling.hpp"

namespace gilbert {

/// The orthogonal half-ray that stopped a tip, and where.
struct BlockedBy {
  int seed_id = 0;
  Side side = Side::Plus;
  Point2 point;

  friend bool operator==(const BlockedBy&, const BlockedBy&) = default;
};

/// Final state of one side of a seed's segment.
///
/// A half-ray without a blocker grew freely up to the horizon; its length is the
/// horizon and it is censored. `degenerate` marks measure-zero resolutions: a tip
/// that arrives at the meeting point at the same instant as the blocker's tip, or a
/// tip that grazes the blocker's stopped endpoint.
struct HalfRay {
  int seed_id = 0;
  Side side = Side::Plus;
  double length = 0.0;
  std::optional<BlockedBy> blocker;
  bool degenerate = false;

  bool free() const noexcept { return !blocker.has_value(); }
  bool censored() const noexcept { return free(); }
};

class Tessellation {
 public:
  Tessellation(SeedSet seeds, double horizon, std::vector<HalfRay> rays);

  const SeedSet& seeds() const noexcept { return seeds_; }
  double horizon() const noexcept { return horizon_; }
  const Window& window() const noexcept { return seeds_.window; }
  /// Two entries per seed, in seed order: [2k] is Plus, [2k+1] is Minus.
  const std::vector<HalfRay>& half_rays() const noexcept { return rays_; }

  const HalfRay& ray(int seed_id, Side side) const;
  const SeedPoint& seed(int seed_id) const { return seeds_.by_id(seed_id); }

  /// Endpoint of the half-ray's segment; for a blocked ray, exactly the blocking point.
  Point2 tip(const HalfRay& r) const;

 private:
  SeedSet seeds_;
  double horizon_;
  std::vector<HalfRay> rays_;
  std::vector<std::size_t> index_of_id_;
};

/// Exact event-driven resolution of the growth dynamics up to `horizon`.
///
/// Each half-ray walks the orthogonal seed lines ahead of it in order of arrival
/// time. Crossing seed j's line at time t_hit, at offset delta from j, blocks the
/// tip iff delta <= t_hit and j's half-ray towards the crossing point has either
/// already stopped with length >= delta or is still growing. Crossings are
/// resolved globally in nondecreasing t_hit (ties by seed id, then side), so the
/// state of the blocker at time delta is always settled when it is consulted.
/// Rays are not clipped: growth happens on the whole plane.
///
/// Throws DegenerateInput if seeds share a coordinate and std::invalid_argument
/// for a non-positive horizon.
Tessellation simulate(const SeedSet& seeds, double horizon);

/// Time-stepping reference used to validate simulate(). Every step of length dt
/// moves each living tip forward; a tip stops at the first orthogonal line in the
/// swept interval whose segment covers the crossing point at the crossing time,
/// judged from the state at the start of the step.
Tessellation oracle_simulate(const SeedSet& seeds, double horizon, double dt);

struct RayLength {
  double length = 0.0;
  bool censored = false;
};

/// L+ + L- for one seed; censored if either side is free at the horizon.
RayLength ray_length_total(const Tessellation& t, int seed_id);

/// Number of half-rays whose closed segment meets the boundary of the
/// tessellation's window. Requires horizon >= the window's larger side, so that
/// the configuration inside the window is final.
int escaping_rays(const Tessellation& t);

/// Human-readable violations of the structural invariants (empty when valid):
/// lengths within the horizon, blockers orthogonal and covering the meeting
/// point, and no transversal crossings between segments.
std::vector<std::string> check_invariants(const Tessellation& t);

/// `seed_id,x,y,mark,len_plus,stop_plus,len_minus,stop_minus`; stop is `free`
/// or `blocked:<id><side>`.
void write_tessellation_csv(std::ostream& out, const Tessellation& t);
std::string stop_code(const HalfRay& r);

}  // namespace gilbert
