#include "gilbert/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gilbert {

char direction_code(Direction d) noexcept { return d == Direction::Horizontal ? 'H' : 'V'; }

Direction parse_direction(std::string_view code) {
  if (code == "H" || code == "h") return Direction::Horizontal;
  if (code == "V" || code == "v") return Direction::Vertical;
  throw std::invalid_argument("unknown direction '" + std::string(code) + "', expected H or V");
}

char side_code(Side s) noexcept { return s == Side::Plus ? '+' : '-'; }

double l1_distance(Point2 u, Point2 v) noexcept { return std::abs(u.x - v.x) + std::abs(u.y - v.y); }

BoxDomain::BoxDomain(double side) : side_(side) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw std::invalid_argument("box side must be a positive finite number");
  }
}

DependenceRegion::DependenceRegion(Point2 apex, Direction direction, Side side, double horizon)
    : apex_(apex), direction_(direction), side_(side), horizon_(horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("dependence region horizon must be positive");
  }
}

Point2 DependenceRegion::centre() const noexcept {
  return apex_ + (sign(side_) * horizon_) * unit(direction_);
}

Point2 DependenceRegion::far_corner() const noexcept {
  return apex_ + (sign(side_) * 2.0 * horizon_) * unit(direction_);
}

bool DependenceRegion::square_contains(Point2 p) const noexcept {
  return l1_distance(p, centre()) <= horizon_;
}

bool DependenceRegion::cone_contains(Point2 p) const noexcept {
  // Points of D no farther from the apex (along the mark) than the centre.
  const double forward = sign(side_) * (along(p, direction_) - along(apex_, direction_));
  const double lateral = std::abs(across(p, direction_) - across(apex_, direction_));
  return forward >= 0.0 && lateral <= forward && forward <= horizon_;
}

Window DependenceRegion::bounding_box() const noexcept {
  const Point2 c = centre();
  return {c.x - horizon_, c.y - horizon_, c.x + horizon_, c.y + horizon_};
}

bool regions_intersect(const DependenceRegion& a, const DependenceRegion& b) {
  if (a.horizon() != b.horizon()) {
    throw std::invalid_argument("regions_intersect: horizons differ");
  }
  const Point2 ca = a.centre();
  const Point2 cb = b.centre();
  // Rotated frame: each square is |s - s_c| <= t, |w - w_c| <= t.
  const double ds = (ca.x + ca.y) - (cb.x + cb.y);
  const double dw = (ca.x - ca.y) - (cb.x - cb.y);
  const double reach = a.horizon() + b.horizon();
  return std::abs(ds) <= reach && std::abs(dw) <= reach;
}

double independence_horizon(Point2 u, Point2 v) {
  if (u == v) throw std::invalid_argument("independence_horizon: points coincide");
  return l1_distance(u, v) / 4.0;
}

}  // namespace gilbert
