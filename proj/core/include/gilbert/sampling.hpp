#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gilbert/geometry.hpp"

namespace gilbert {

/// Raised when seeds violate general position (shared coordinates, duplicates,
/// seeds on the box boundary). The message names the offending coordinates.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Law of the direction mark: Vertical with probability p_vertical.
class MarkDistribution {
 public:
  explicit MarkDistribution(double p_vertical = 0.5);
  double p_vertical() const noexcept { return p_vertical_; }

 private:
  double p_vertical_;
};

struct SeedPoint {
  int id = 0;
  Point2 position;
  Direction mark = Direction::Horizontal;
  bool pinned = false;

  friend bool operator==(const SeedPoint&, const SeedPoint&) = default;
};

struct SeedSet {
  std::vector<SeedPoint> seeds;
  Window window;
  double intensity = 0.0;
  std::uint64_t rng_seed = 0;

  std::size_t size() const noexcept { return seeds.size(); }
  bool empty() const noexcept { return seeds.empty(); }
  const SeedPoint& by_id(int id) const;
  int next_id() const noexcept;

  friend bool operator==(const SeedSet&, const SeedSet&) = default;
};

/// Marked homogeneous Poisson sample on the window: K ~ Poisson(intensity * area)
/// points, i.i.d. uniform positions, i.i.d. marks. A pure function of its arguments.
SeedSet sample_poisson(const Window& window, double intensity, const MarkDistribution& marks,
                       std::uint64_t rng_seed);
SeedSet sample_poisson(const BoxDomain& domain, double intensity, const MarkDistribution& marks,
                       std::uint64_t rng_seed);

/// A point to add with probability one (Palm conditioning on it being a seed).
struct PinnedPoint {
  Point2 position;
  Direction mark = Direction::Horizontal;
};

/// Appends the given points as pinned seeds; sampled seeds are left untouched.
/// Throws DegenerateInput on a duplicate position, or in strict mode on any
/// shared x or y coordinate.
SeedSet insert_palm(const SeedSet& set, std::span<const PinnedPoint> points, bool strict = true);

/// Throws DegenerateInput if two seeds share an x or a y coordinate.
void require_general_position(std::span<const SeedPoint> seeds);
bool in_general_position(std::span<const SeedPoint> seeds) noexcept;

/// Perturbs every coordinate by an independent uniform(-eps, eps) draw until the
/// set is in general position.
SeedSet jitter(const SeedSet& set, double eps, std::uint64_t rng_seed);

/// Seeds lying inside the window (closed). Ids and pin flags are preserved.
SeedSet restrict_to(const SeedSet& set, const Window& window);

/// Same seeds shifted by offset (window moves along).
SeedSet translated(const SeedSet& set, Point2 offset);

/// CSV with header `id,x,y,mark,pinned`; coordinates round-trip exactly.
void write_seed_csv(std::ostream& out, const SeedSet& set);
SeedSet read_seed_csv(std::istream& in);

}  // namespace gilbert
