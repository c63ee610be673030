#include "gilbert/lattice.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gilbert::lattice {

LatticeState::LatticeState(std::vector<LatticePoint> points, std::optional<LatticeBox> box)
    : active(std::move(points)), domain(box) {
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  if (domain) {
    for (const auto& p : active) {
      if (!domain->contains(p)) throw std::invalid_argument("active site outside the domain");
    }
  }
}

bool LatticeState::is_active(LatticePoint p) const { return std::binary_search(active.begin(), active.end(), p); }

LatticeState ca_step(const LatticeState& state) {
  // Net drive received by each neighbour of an active site.
  std::map<LatticePoint, int> drive;
  constexpr LatticePoint offsets[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& a : state.active) {
    const int contribution = inhibitory(a) ? -1 : 1;
    for (const auto& o : offsets) {
      const LatticePoint v{a.x + o.x, a.y + o.y};
      if (state.domain && !state.domain->contains(v)) continue;
      drive[v] += contribution;
    }
  }
  std::vector<LatticePoint> next;
  for (const auto& [v, net] : drive) {
    if (net >= 1) next.push_back(v);
  }
  return LatticeState(std::move(next), state.domain);
}

std::vector<std::size_t> CaTrajectory::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.size());
  return out;
}

CaTrajectory ca_run(const LatticeState& initial, std::size_t steps, std::size_t history_window) {
  CaTrajectory run;
  run.states.reserve(steps + 1);
  run.states.push_back(initial);
  for (std::size_t t = 1; t <= steps; ++t) {
    run.states.push_back(ca_step(run.states.back()));
    if (run.cycle) continue;
    const std::size_t earliest = t > history_window ? t - history_window : 0;
    for (std::size_t s = t; s-- > earliest;) {
      if (run.states[s] == run.states[t]) {
        run.cycle = CaCycle{s, t - s};
        break;
      }
    }
  }
  return run;
}

void write_grid(std::ostream& out, const LatticeState& state) {
  if (!state.domain) throw std::invalid_argument("write_grid: state has no bounded domain");
  const LatticeBox& b = *state.domain;
  for (long y = b.y1; y >= b.y0; --y) {
    std::string row;
    for (long x = b.x0; x <= b.x1; ++x) row += state.is_active({x, y}) ? '#' : '.';
    out << row << '\n';
  }
}

LatticeState read_grid(std::istream& in) {
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!rows.empty() && line.size() != rows.front().size()) throw std::invalid_argument("grid rows differ in length");
    rows.push_back(line);
  }
  if (rows.empty()) throw std::invalid_argument("grid is empty");
  const long height = static_cast<long>(rows.size());
  const long width = static_cast<long>(rows.front().size());
  std::vector<LatticePoint> active;
  for (long r = 0; r < height; ++r) {
    for (long x = 0; x < width; ++x) {
      const char c = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
      if (c == '#') active.push_back({x, height - 1 - r});
      else if (c != '.') throw std::invalid_argument(std::string("unexpected grid character '") + c + "'");
    }
  }
  return LatticeState(std::move(active), LatticeBox{0, 0, width - 1, height - 1});
}

void write_sizes_csv(std::ostream& out, const CaTrajectory& trajectory) {
  out << "step,active\n";
  const auto sizes = trajectory.sizes();
  for (std::size_t t = 0; t < sizes.size(); ++t) out << t << ',' << sizes[t] << '\n';
}

const char* stop_name(LatticeStop s) noexcept {
  switch (s) {
    case LatticeStop::TJunction: return "t_junction";
    case LatticeStop::Corner: return "corner";
    case LatticeStop::HeadOn: return "head_on";
    case LatticeStop::FreeAtHorizon: return "free";
  }
  return "?";
}

namespace {

void validate(const LatticeRayConfig& config, long horizon) {
  if (config.box_side <= 2) throw std::invalid_argument("lattice rays: box side must exceed 2");
  if (horizon < 0) throw std::invalid_argument("lattice rays: negative horizon");
  std::vector<LatticePoint> seen;
  for (const auto& s : config.seeds) {
    const auto p = s.position;
    if (p.x < 1 || p.y < 1 || p.x > config.box_side - 1 || p.y > config.box_side - 1) {
      throw std::invalid_argument("lattice rays: seed (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                  ") outside {1..N-1}^2");
    }
    seen.push_back(p);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("lattice rays: duplicate seed");
  }
}

/// Dense occupancy of doubled-coordinate cells; each cell remembers up to two
/// covering seeds.
class CellGrid {
 public:
  CellGrid(long lo, long hi) : lo_(lo), span_(hi - lo + 1), cells_(static_cast<std::size_t>(span_ * span_)) {}

  struct Cell {
    int first = -1;
    int second = -1;
  };

  Cell& at(HalfPoint p) { return cells_[static_cast<std::size_t>((p.y - lo_) * span_ + (p.x - lo_))]; }

  void cover(HalfPoint p, int seed) {
    Cell& c = at(p);
    if (c.first == seed || c.second == seed) return;
    if (c.first < 0) c.first = seed;
    else if (c.second < 0) c.second = seed;
  }

 private:
  long lo_;
  long span_;
  std::vector<Cell> cells_;
};

HalfPoint step_of(Direction d, Side s) {
  const long k = s == Side::Plus ? 1 : -1;
  return d == Direction::Horizontal ? HalfPoint{k, 0} : HalfPoint{0, k};
}

}  // namespace

LatticeRayResult lattice_ray_simulate(const LatticeRayConfig& config, long horizon) {
  validate(config, horizon);
  const std::size_t n = config.seeds.size();
  const long steps = 2 * horizon;
  CellGrid grid(-steps - 2, 2 * config.box_side + steps + 2);

  LatticeRayResult result;
  result.config = config;
  result.horizon = horizon;
  result.rays.resize(2 * n);
  std::vector<char> alive(2 * n, 1);
  std::vector<HalfPoint> dir(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const HalfPoint origin{2 * config.seeds[k].position.x, 2 * config.seeds[k].position.y};
    grid.cover(origin, static_cast<int>(k));
    for (Side side : {Side::Plus, Side::Minus}) {
      auto& r = result.rays[2 * k + (side == Side::Minus)];
      r.seed = k;
      r.side = side;
      r.tip = origin;
      dir[2 * k + (side == Side::Minus)] = step_of(config.seeds[k].mark, side);
    }
  }

  auto collinear = [&](std::size_t seed_a, std::size_t seed_b) {
    return config.seeds[seed_a].mark == config.seeds[seed_b].mark;
  };
  // Endpoint of seed o's trace (before this step's moves) at cell c.
  auto is_stopped_end = [&](int o, HalfPoint c) {
    for (std::size_t r : {2 * static_cast<std::size_t>(o), 2 * static_cast<std::size_t>(o) + 1}) {
      if (!alive[r] && result.rays[r].tip == c) return true;
    }
    return false;
  };

  std::vector<HalfPoint> target(2 * n);
  std::map<HalfPoint, std::vector<std::size_t>> arrivals;
  std::vector<std::pair<std::size_t, LatticeStop>> stops;
  for (long s = 1; s <= steps; ++s) {
    arrivals.clear();
    stops.clear();
    for (std::size_t r = 0; r < 2 * n; ++r) {
      if (!alive[r]) continue;
      target[r] = {result.rays[r].tip.x + dir[r].x, result.rays[r].tip.y + dir[r].y};
      arrivals[target[r]].push_back(r);
    }
    if (arrivals.empty()) break;
    for (const auto& [cell, movers] : arrivals) {
      const CellGrid::Cell covered = grid.at(cell);
      for (std::size_t r : movers) {
        const std::size_t me = result.rays[r].seed;
        std::optional<LatticeStop> cause;
        for (int o : {covered.first, covered.second}) {
          if (o < 0 || static_cast<std::size_t>(o) == me) continue;
          LatticeStop c = LatticeStop::TJunction;
          if (collinear(me, static_cast<std::size_t>(o))) c = LatticeStop::HeadOn;
          else if (is_stopped_end(o, cell)) c = LatticeStop::Corner;
          if (!cause || c == LatticeStop::HeadOn || (c == LatticeStop::Corner && *cause == LatticeStop::TJunction)) {
            cause = c;
          }
        }
        if (!cause) {
          for (std::size_t other : movers) {
            if (other == r) continue;
            const LatticeStop c = collinear(me, result.rays[other].seed) ? LatticeStop::HeadOn : LatticeStop::Corner;
            if (!cause || c == LatticeStop::HeadOn) cause = c;
          }
        }
        if (cause) stops.emplace_back(r, *cause);
      }
    }
    for (const auto& [cell, movers] : arrivals) {
      for (std::size_t r : movers) {
        result.rays[r].tip = cell;
        result.rays[r].half_length = s;
        grid.cover(cell, static_cast<int>(result.rays[r].seed));
      }
    }
    for (const auto& [r, cause] : stops) {
      alive[r] = 0;
      result.rays[r].stop = cause;
    }
  }
  return result;
}

std::vector<HalfPoint> LatticeRayResult::trace() const {
  std::vector<HalfPoint> cells;
  for (const auto& r : rays) {
    const auto& seed = config.seeds[r.seed];
    const HalfPoint origin{2 * seed.position.x, 2 * seed.position.y};
    const HalfPoint d = step_of(seed.mark, r.side);
    for (long k = 0; k <= r.half_length; ++k) cells.push_back({origin.x + k * d.x, origin.y + k * d.y});
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

std::vector<HalfPoint> LatticeRayResult::trace_in_box() const {
  auto cells = trace();
  const long hi = 2 * config.box_side;
  std::erase_if(cells, [hi](HalfPoint p) { return p.x < 0 || p.y < 0 || p.x > hi || p.y > hi; });
  return cells;
}

std::vector<LatticePoint> LatticeRayResult::sites_in_box() const {
  std::vector<LatticePoint> sites;
  for (const auto& c : trace_in_box()) {
    if (c.x % 2 == 0 && c.y % 2 == 0) sites.push_back({c.x / 2, c.y / 2});
  }
  return sites;
}

std::vector<ComparisonRow> compare_ca_with_rays(const LatticeRayConfig& config, long steps) {
  std::vector<LatticePoint> initial;
  for (const auto& s : config.seeds) initial.push_back(s.position);
  const CaTrajectory ca =
      ca_run(LatticeState(initial, LatticeBox::square(config.box_side)), static_cast<std::size_t>(std::max(0L, steps)));
  std::vector<ComparisonRow> rows;
  for (long t = 0; t <= steps; ++t) {
    const auto sites = lattice_ray_simulate(config, t).sites_in_box();
    const auto& active = ca.states[static_cast<std::size_t>(t)].active;
    std::vector<LatticePoint> diff;
    std::set_symmetric_difference(active.begin(), active.end(), sites.begin(), sites.end(), std::back_inserter(diff));
    rows.push_back({t, active.size(), sites.size(), diff.size()});
  }
  return rows;
}

}  // namespace gilbert::lattice
