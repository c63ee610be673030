#include "gilbert/growth.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "gilbert/format.hpp"

namespace gilbert {

namespace {

constexpr std::size_t ray_index(std::size_t seed_index, Side side) noexcept {
  return 2 * seed_index + (side == Side::Minus ? 1 : 0);
}

void require_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be a positive finite number");
  }
}

/// Seed lines of one orientation, sorted by their position along the axis a
/// perpendicular ray travels.
struct LineIndex {
  struct Line {
    double pos;    // coordinate along the crossing ray's axis
    double other;  // coordinate across it (the seed's own along-coordinate)
    std::size_t seed;
  };
  std::vector<Line> lines;

  LineIndex(const std::vector<SeedPoint>& seeds, Direction line_mark) {
    const Direction crossing = orthogonal(line_mark);
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      if (seeds[k].mark != line_mark) continue;
      lines.push_back({along(seeds[k].position, crossing), across(seeds[k].position, crossing), k});
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.pos < b.pos; });
  }

  /// First index ahead of `from` in direction `side` (may be out of range).
  std::ptrdiff_t first_ahead(double from, Side side) const {
    if (side == Side::Plus) {
      auto it = std::upper_bound(lines.begin(), lines.end(), from,
                                 [](double v, const Line& l) { return v < l.pos; });
      return it - lines.begin();
    }
    auto it = std::lower_bound(lines.begin(), lines.end(), from,
                               [](const Line& l, double v) { return l.pos < v; });
    return (it - lines.begin()) - 1;
  }

  bool valid(std::ptrdiff_t k) const { return k >= 0 && k < static_cast<std::ptrdiff_t>(lines.size()); }
};

struct RayGeometry {
  Direction dir;
  Side side;
  double along0;  // origin coordinate along the ray
  double line;    // the ray's own line coordinate (across)
};

RayGeometry geometry_of(const SeedPoint& s, Side side) {
  return {s.mark, side, along(s.position, s.mark), across(s.position, s.mark)};
}

Point2 crossing_point(const RayGeometry& g, double pos) {
  return g.dir == Direction::Horizontal ? Point2{pos, g.line} : Point2{g.line, pos};
}

/// The blocker's half-ray that heads towards the crossing point.
Side side_towards(double line, double blocker_other) { return line > blocker_other ? Side::Plus : Side::Minus; }

}  // namespace

Tessellation::Tessellation(SeedSet seeds, double horizon, std::vector<HalfRay> rays)
    : seeds_(std::move(seeds)), horizon_(horizon), rays_(std::move(rays)) {
  if (rays_.size() != 2 * seeds_.size()) throw std::invalid_argument("Tessellation: need two half-rays per seed");
  int max_id = -1;
  for (const auto& s : seeds_.seeds) {
    if (s.id < 0) throw std::invalid_argument("Tessellation: negative seed id");
    max_id = std::max(max_id, s.id);
  }
  index_of_id_.assign(static_cast<std::size_t>(max_id + 1), static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < seeds_.seeds.size(); ++k) {
    auto& slot = index_of_id_[static_cast<std::size_t>(seeds_.seeds[k].id)];
    if (slot != static_cast<std::size_t>(-1)) throw std::invalid_argument("Tessellation: duplicate seed id");
    slot = k;
  }
}

const HalfRay& Tessellation::ray(int seed_id, Side side) const {
  if (seed_id < 0 || static_cast<std::size_t>(seed_id) >= index_of_id_.size() ||
      index_of_id_[static_cast<std::size_t>(seed_id)] == static_cast<std::size_t>(-1)) {
    throw std::out_of_range("unknown seed id " + std::to_string(seed_id));
  }
  return rays_[ray_index(index_of_id_[static_cast<std::size_t>(seed_id)], side)];
}

Point2 Tessellation::tip(const HalfRay& r) const {
  if (r.blocker) return r.blocker->point;
  const auto& s = seed(r.seed_id);
  return s.position + (sign(r.side) * r.length) * unit(s.mark);
}

Tessellation simulate(const SeedSet& seeds, double horizon) {
  require_horizon(horizon);
  require_general_position(seeds.seeds);

  const auto& pts = seeds.seeds;
  const std::size_t n = pts.size();
  const LineIndex vertical_lines(pts, Direction::Vertical);
  const LineIndex horizontal_lines(pts, Direction::Horizontal);
  auto lines_for = [&](Direction ray_dir) -> const LineIndex& {
    return ray_dir == Direction::Horizontal ? vertical_lines : horizontal_lines;
  };

  std::vector<HalfRay> rays(2 * n);
  std::vector<char> stopped(2 * n, 0);
  std::vector<RayGeometry> geom(2 * n);

  struct Event {
    double t;
    int id;
    Side side;
    std::size_t ray;
    std::ptrdiff_t cursor;
  };
  auto later = [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t > b.t;
    if (a.id != b.id) return a.id > b.id;
    return a.side > b.side;
  };
  std::priority_queue<Event, std::vector<Event>, decltype(later)> queue(later);

  // Advance to the next orthogonal line whose seed lies in the ray's cone
  // (|delta| <= t_hit) and is reached within the horizon; otherwise the ray is free.
  auto schedule = [&](std::size_t r, std::ptrdiff_t cursor) {
    const RayGeometry& g = geom[r];
    const LineIndex& idx = lines_for(g.dir);
    const std::ptrdiff_t step = g.side == Side::Plus ? 1 : -1;
    for (; idx.valid(cursor); cursor += step) {
      const auto& line = idx.lines[static_cast<std::size_t>(cursor)];
      const double t_hit = sign(g.side) * (line.pos - g.along0);
      if (t_hit > horizon) break;
      if (std::abs(line.other - g.line) <= t_hit) {
        queue.push({t_hit, rays[r].seed_id, g.side, r, cursor});
        return;
      }
    }
    rays[r].length = horizon;
    stopped[r] = 1;
  };

  for (std::size_t k = 0; k < n; ++k) {
    for (Side side : {Side::Plus, Side::Minus}) {
      const std::size_t r = ray_index(k, side);
      rays[r].seed_id = pts[k].id;
      rays[r].side = side;
      geom[r] = geometry_of(pts[k], side);
    }
  }
  for (std::size_t r = 0; r < 2 * n; ++r) {
    const RayGeometry& g = geom[r];
    schedule(r, lines_for(g.dir).first_ahead(g.along0, g.side));
  }

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    const RayGeometry& g = geom[ev.ray];
    const auto& line = lines_for(g.dir).lines[static_cast<std::size_t>(ev.cursor)];
    const double delta = std::abs(line.other - g.line);
    const Side blocker_side = side_towards(g.line, line.other);
    const std::size_t blocker = ray_index(line.seed, blocker_side);

    // Still growing at t_hit means its length is t_hit >= delta.
    const bool covered = !stopped[blocker] || rays[blocker].length >= delta;
    if (!covered) {
      schedule(ev.ray, ev.cursor + (g.side == Side::Plus ? 1 : -1));
      continue;
    }
    HalfRay& ray = rays[ev.ray];
    ray.length = ev.t;
    ray.blocker = BlockedBy{pts[line.seed].id, blocker_side, crossing_point(g, line.pos)};
    ray.degenerate = delta == ev.t || (stopped[blocker] && rays[blocker].length == delta);
    stopped[ev.ray] = 1;
  }

  return Tessellation(seeds, horizon, std::move(rays));
}

Tessellation oracle_simulate(const SeedSet& seeds, double horizon, double dt) {
  require_horizon(horizon);
  if (!(dt > 0.0)) throw std::invalid_argument("oracle time step must be positive");
  require_general_position(seeds.seeds);

  const auto& pts = seeds.seeds;
  const std::size_t n = pts.size();

  // Orthogonal lines sorted by position: plain arrays, no cone pruning.
  struct Line {
    double pos;
    double other;
    std::size_t seed;
  };
  std::vector<Line> by_x, by_y;  // vertical seed lines by x, horizontal by y
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 p = pts[k].position;
    if (pts[k].mark == Direction::Vertical) by_x.push_back({p.x, p.y, k});
    else by_y.push_back({p.y, p.x, k});
  }
  auto by_pos = [](const Line& a, const Line& b) { return a.pos < b.pos; };
  std::sort(by_x.begin(), by_x.end(), by_pos);
  std::sort(by_y.begin(), by_y.end(), by_pos);

  std::vector<HalfRay> rays(2 * n);
  std::vector<char> alive(2 * n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    for (Side side : {Side::Plus, Side::Minus}) {
      rays[ray_index(k, side)].seed_id = pts[k].id;
      rays[ray_index(k, side)].side = side;
    }
  }

  struct Stop {
    std::size_t ray;
    double length;
    BlockedBy blocker;
  };
  std::vector<Stop> stops;
  std::vector<std::size_t> living(2 * n);
  for (std::size_t r = 0; r < living.size(); ++r) living[r] = r;

  const auto steps = static_cast<long long>(std::ceil(horizon / dt));
  for (long long k = 0; k < steps && !living.empty(); ++k) {
    const double t0 = static_cast<double>(k) * dt;
    const double t1 = std::min(static_cast<double>(k + 1) * dt, horizon);
    stops.clear();
    for (std::size_t r : living) {
      const std::size_t s = r / 2;
      const Side side = rays[r].side;
      const Direction dir = pts[s].mark;
      const double a0 = along(pts[s].position, dir);
      const double c = across(pts[s].position, dir);
      const auto& lines = dir == Direction::Horizontal ? by_x : by_y;

      // Lines crossed while the tip sweeps (a0 + t0, a0 + t1], ordered by crossing time.
      const double lo = side == Side::Plus ? a0 + t0 : a0 - t1;
      const double hi = side == Side::Plus ? a0 + t1 : a0 - t0;
      auto first = std::lower_bound(lines.begin(), lines.end(), lo,
                                    [](const Line& l, double v) { return l.pos < v; });
      auto last = std::upper_bound(lines.begin(), lines.end(), hi,
                                   [](double v, const Line& l) { return v < l.pos; });
      std::optional<Stop> best;
      for (auto it = first; it != last; ++it) {
        const double tau = std::abs(it->pos - a0);
        if (tau <= t0 || tau > t1) continue;
        if (best && best->length <= tau) continue;
        const double delta = std::abs(it->other - c);
        const Side bside = c > it->other ? Side::Plus : Side::Minus;
        const std::size_t b = ray_index(it->seed, bside);
        const double extent = alive[b] ? tau : rays[b].length;
        if (extent >= delta) {
          const Point2 p = dir == Direction::Horizontal ? Point2{it->pos, c} : Point2{c, it->pos};
          best = Stop{r, tau, BlockedBy{pts[it->seed].id, bside, p}};
        }
      }
      if (best) stops.push_back(*best);
    }
    for (const auto& st : stops) {
      alive[st.ray] = 0;
      rays[st.ray].length = st.length;
      rays[st.ray].blocker = st.blocker;
    }
    std::erase_if(living, [&](std::size_t r) { return !alive[r]; });
  }
  for (std::size_t r : living) rays[r].length = horizon;

  return Tessellation(seeds, horizon, std::move(rays));
}

RayLength ray_length_total(const Tessellation& t, int seed_id) {
  const HalfRay& plus = t.ray(seed_id, Side::Plus);
  const HalfRay& minus = t.ray(seed_id, Side::Minus);
  return {plus.length + minus.length, plus.censored() || minus.censored()};
}

int escaping_rays(const Tessellation& t) {
  const Window& w = t.window();
  if (t.horizon() < std::max(w.width(), w.height())) {
    throw std::invalid_argument("escaping_rays: horizon is shorter than the box side; configuration not final");
  }
  int count = 0;
  for (const auto& r : t.half_rays()) {
    const Point2 tip = t.tip(r);
    if (tip.x <= w.x0 || tip.x >= w.x1 || tip.y <= w.y0 || tip.y >= w.y1) ++count;
  }
  return count;
}

std::vector<std::string> check_invariants(const Tessellation& t) {
  std::vector<std::string> problems;
  const double horizon = t.horizon();
  for (const auto& r : t.half_rays()) {
    const std::string name = std::to_string(r.seed_id) + side_code(r.side);
    if (r.length < 0.0 || r.length > horizon) problems.push_back(name + ": length outside [0, horizon]");
    if (!r.blocker) continue;
    const auto& self = t.seed(r.seed_id);
    const auto& other = t.seed(r.blocker->seed_id);
    if (other.mark == self.mark) problems.push_back(name + ": blocked by a parallel seed");
    const Point2 p = r.blocker->point;
    if (across(p, self.mark) != across(self.position, self.mark) ||
        std::abs(along(p, self.mark) - along(self.position, self.mark)) != r.length) {
      problems.push_back(name + ": blocking point is not at the tip");
    }
    if (across(p, other.mark) != across(other.position, other.mark)) {
      problems.push_back(name + ": blocking point is off the blocker's line");
    }
    const double offset = std::abs(along(p, other.mark) - along(other.position, other.mark));
    const HalfRay& b = t.ray(r.blocker->seed_id, r.blocker->side);
    if (b.length < offset) problems.push_back(name + ": blocker does not reach the meeting point");
    if (sign(r.blocker->side) * (along(p, other.mark) - along(other.position, other.mark)) < 0.0) {
      problems.push_back(name + ": blocker side points away from the meeting point");
    }
  }

  // Transversal crossings: a horizontal and a vertical segment meeting at a point
  // that is interior to both.
  struct Seg {
    double line, lo, hi;
  };
  std::vector<Seg> hs, vs;
  for (const auto& s : t.seeds().seeds) {
    // Tips rather than origin +/- length: blocked tips sit exactly on the blocker's line.
    const double lo = along(t.tip(t.ray(s.id, Side::Minus)), s.mark);
    const double hi = along(t.tip(t.ray(s.id, Side::Plus)), s.mark);
    (s.mark == Direction::Horizontal ? hs : vs).push_back({across(s.position, s.mark), lo, hi});
  }
  std::sort(vs.begin(), vs.end(), [](const Seg& a, const Seg& b) { return a.line < b.line; });
  for (const auto& h : hs) {
    auto it = std::lower_bound(vs.begin(), vs.end(), h.lo, [](const Seg& s, double v) { return s.line < v; });
    for (; it != vs.end() && it->line <= h.hi; ++it) {
      const bool interior_h = it->line > h.lo && it->line < h.hi;
      const bool interior_v = h.line > it->lo && h.line < it->hi;
      if (interior_h && interior_v) {
        problems.push_back("segments cross transversally at (" + format_double(it->line) + ", " +
                           format_double(h.line) + ")");
      }
    }
  }
  return problems;
}

std::string stop_code(const HalfRay& r) {
  if (!r.blocker) return "free";
  return "blocked:" + std::to_string(r.blocker->seed_id) + side_code(r.blocker->side);
}

void write_tessellation_csv(std::ostream& out, const Tessellation& t) {
  out << "seed_id,x,y,mark,len_plus,stop_plus,len_minus,stop_minus\n";
  for (const auto& s : t.seeds().seeds) {
    const HalfRay& plus = t.ray(s.id, Side::Plus);
    const HalfRay& minus = t.ray(s.id, Side::Minus);
    out << s.id << ',' << format_double(s.position.x) << ',' << format_double(s.position.y) << ','
        << direction_code(s.mark) << ',' << format_double(plus.length) << ',' << stop_code(plus) << ','
        << format_double(minus.length) << ',' << stop_code(minus) << '\n';
  }
}

}  // namespace gilbert
