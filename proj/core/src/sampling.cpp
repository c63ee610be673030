#include "gilbert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <string>

#include "gilbert/format.hpp"
#include "gilbert/rng.hpp"

namespace gilbert {

namespace {

std::string describe(Point2 p) { return "(" + format_double(p.x) + ", " + format_double(p.y) + ")"; }

// Index of the first pair of seeds whose projections on one axis coincide.
template <typename Coord>
std::optional<std::pair<std::size_t, std::size_t>> find_shared(std::span<const SeedPoint> seeds,
                                                                Coord coord) {
  std::vector<std::size_t> order(seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return coord(seeds[a].position) < coord(seeds[b].position);
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (coord(seeds[order[k - 1]].position) == coord(seeds[order[k]].position)) {
      return std::pair{order[k - 1], order[k]};
    }
  }
  return std::nullopt;
}

constexpr auto x_of = [](Point2 p) { return p.x; };
constexpr auto y_of = [](Point2 p) { return p.y; };

}  // namespace

MarkDistribution::MarkDistribution(double p_vertical) : p_vertical_(p_vertical) {
  if (!(p_vertical > 0.0 && p_vertical < 1.0)) {
    throw std::invalid_argument("mark probability must lie strictly between 0 and 1");
  }
}

const SeedPoint& SeedSet::by_id(int id) const {
  // Ids are dense and ordered for sampled sets; fall back to a scan otherwise.
  if (id >= 0 && static_cast<std::size_t>(id) < seeds.size() && seeds[id].id == id) return seeds[id];
  auto it = std::find_if(seeds.begin(), seeds.end(), [id](const SeedPoint& s) { return s.id == id; });
  if (it == seeds.end()) throw std::out_of_range("no seed with id " + std::to_string(id));
  return *it;
}

int SeedSet::next_id() const noexcept {
  int next = 0;
  for (const auto& s : seeds) next = std::max(next, s.id + 1);
  return next;
}

SeedSet sample_poisson(const Window& window, double intensity, const MarkDistribution& marks,
                       std::uint64_t rng_seed) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    throw std::invalid_argument("intensity must be positive");
  }
  if (!(window.width() > 0.0) || !(window.height() > 0.0)) {
    throw std::invalid_argument("sampling window must have positive side lengths");
  }
  SeedSet set;
  set.window = window;
  set.intensity = intensity;
  set.rng_seed = rng_seed;

  Engine rng = make_engine(rng_seed);
  const double mean = intensity * window.area();
  std::poisson_distribution<long long> count_dist(mean);
  const long long count = count_dist(rng);
  set.seeds.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    SeedPoint s;
    s.id = static_cast<int>(i);
    s.position = {uniform(rng, window.x0, window.x1), uniform(rng, window.y0, window.y1)};
    s.mark = uniform01(rng) < marks.p_vertical() ? Direction::Vertical : Direction::Horizontal;
    set.seeds.push_back(s);
  }
  return set;
}

SeedSet sample_poisson(const BoxDomain& domain, double intensity, const MarkDistribution& marks,
                       std::uint64_t rng_seed) {
  return sample_poisson(Window::of(domain), intensity, marks, rng_seed);
}

bool in_general_position(std::span<const SeedPoint> seeds) noexcept {
  return !find_shared(seeds, x_of) && !find_shared(seeds, y_of);
}

void require_general_position(std::span<const SeedPoint> seeds) {
  if (auto hit = find_shared(seeds, x_of)) {
    const auto& a = seeds[hit->first];
    const auto& b = seeds[hit->second];
    throw DegenerateInput("seeds " + std::to_string(a.id) + " " + describe(a.position) + " and " +
                          std::to_string(b.id) + " " + describe(b.position) +
                          " share x = " + format_double(a.position.x));
  }
  if (auto hit = find_shared(seeds, y_of)) {
    const auto& a = seeds[hit->first];
    const auto& b = seeds[hit->second];
    throw DegenerateInput("seeds " + std::to_string(a.id) + " " + describe(a.position) + " and " +
                          std::to_string(b.id) + " " + describe(b.position) +
                          " share y = " + format_double(a.position.y));
  }
}

SeedSet insert_palm(const SeedSet& set, std::span<const PinnedPoint> points, bool strict) {
  SeedSet out = set;
  int id = set.next_id();
  for (const auto& p : points) {
    for (const auto& s : out.seeds) {
      if (s.position == p.position) {
        throw DegenerateInput("pinned point " + describe(p.position) + " duplicates seed " +
                              std::to_string(s.id));
      }
    }
    out.seeds.push_back({id++, p.position, p.mark, true});
  }
  if (strict) require_general_position(out.seeds);
  return out;
}

SeedSet jitter(const SeedSet& set, double eps, std::uint64_t rng_seed) {
  if (!(eps > 0.0)) throw std::invalid_argument("jitter amplitude must be positive");
  Engine rng = make_engine(rng_seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    SeedSet out = set;
    for (auto& s : out.seeds) {
      s.position.x += uniform(rng, -eps, eps);
      s.position.y += uniform(rng, -eps, eps);
    }
    if (in_general_position(out.seeds)) return out;
  }
  throw DegenerateInput("jitter failed to reach general position");
}

SeedSet restrict_to(const SeedSet& set, const Window& window) {
  SeedSet out;
  out.window = window;
  out.intensity = set.intensity;
  out.rng_seed = set.rng_seed;
  for (const auto& s : set.seeds) {
    if (window.contains(s.position)) out.seeds.push_back(s);
  }
  return out;
}

SeedSet translated(const SeedSet& set, Point2 offset) {
  SeedSet out = set;
  for (auto& s : out.seeds) s.position = s.position + offset;
  out.window = {set.window.x0 + offset.x, set.window.y0 + offset.y, set.window.x1 + offset.x,
                set.window.y1 + offset.y};
  return out;
}

void write_seed_csv(std::ostream& out, const SeedSet& set) {
  out << "id,x,y,mark,pinned\n";
  for (const auto& s : set.seeds) {
    out << s.id << ',' << format_double(s.position.x) << ',' << format_double(s.position.y) << ','
        << direction_code(s.mark) << ',' << (s.pinned ? 1 : 0) << '\n';
  }
}

SeedSet read_seed_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("seed CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,x,y,mark,pinned") throw std::invalid_argument("seed CSV: unexpected header '" + line + "'");

  SeedSet set;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 5) throw std::invalid_argument("seed CSV: row " + std::to_string(row) + " needs 5 fields");
    SeedPoint s;
    s.id = static_cast<int>(parse_integer(f[0]));
    s.position = {parse_double(f[1]), parse_double(f[2])};
    s.mark = parse_direction(f[3]);
    if (f[4] != "0" && f[4] != "1") throw std::invalid_argument("seed CSV: pinned must be 0 or 1");
    s.pinned = f[4] == "1";
    if (set.seeds.empty()) {
      x0 = x1 = s.position.x;
      y0 = y1 = s.position.y;
    }
    x0 = std::min(x0, s.position.x);
    x1 = std::max(x1, s.position.x);
    y0 = std::min(y0, s.position.y);
    y1 = std::max(y1, s.position.y);
    set.seeds.push_back(s);
  }
  set.window = {x0, y0, x1, y1};
  return set;
}

}  // namespace gilbert
