#pragma once

#include <cstdint>
#include <string_view>

namespace gilbert {

enum class Direction : std::uint8_t { Horizontal, Vertical };

constexpr Direction orthogonal(Direction d) noexcept {
  return d == Direction::Horizontal ? Direction::Vertical : Direction::Horizontal;
}

/// Single-letter code used in CSV files: H or V.
char direction_code(Direction d) noexcept;
Direction parse_direction(std::string_view code);

/// Which way along the mark a half-ray grows: Plus follows +d, Minus follows -d.
enum class Side : std::uint8_t { Plus, Minus };

constexpr Side opposite(Side s) noexcept { return s == Side::Plus ? Side::Minus : Side::Plus; }
constexpr double sign(Side s) noexcept { return s == Side::Plus ? 1.0 : -1.0; }
char side_code(Side s) noexcept;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator*(double s, Point2 p) noexcept { return {s * p.x, s * p.y}; }

/// Unit vector of the mark: (1,0) for Horizontal, (0,1) for Vertical.
constexpr Point2 unit(Direction d) noexcept {
  return d == Direction::Horizontal ? Point2{1.0, 0.0} : Point2{0.0, 1.0};
}

/// Coordinate along the mark (x for Horizontal, y for Vertical).
constexpr double along(Point2 p, Direction d) noexcept {
  return d == Direction::Horizontal ? p.x : p.y;
}

/// Coordinate across the mark; constant on the seed's line.
constexpr double across(Point2 p, Direction d) noexcept {
  return d == Direction::Horizontal ? p.y : p.x;
}

double l1_distance(Point2 u, Point2 v) noexcept;

/// The square [0, N]^2.
class BoxDomain {
 public:
  explicit BoxDomain(double side);

  double side() const noexcept { return side_; }
  bool contains(Point2 p) const noexcept {
    return p.x >= 0.0 && p.x <= side_ && p.y >= 0.0 && p.y <= side_;
  }
  /// True for points on the boundary of the closed square.
  bool on_boundary(Point2 p) const noexcept {
    return contains(p) && (p.x == 0.0 || p.y == 0.0 || p.x == side_ || p.y == side_);
  }

 private:
  double side_;
};

/// Closed axis-aligned rectangle [x0,x1] x [y0,y1]; the sampling window.
struct Window {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  static Window of(const BoxDomain& box) noexcept { return {0.0, 0.0, box.side(), box.side()}; }
  /// Square of the given side centred at c.
  static Window centred(Point2 c, double side) noexcept {
    return {c.x - side / 2, c.y - side / 2, c.x + side / 2, c.y + side / 2};
  }

  double width() const noexcept { return x1 - x0; }
  double height() const noexcept { return y1 - y0; }
  double area() const noexcept { return width() * height(); }
  bool contains(Point2 p) const noexcept {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }

  friend bool operator==(const Window&, const Window&) = default;
};

/// Dependence square D and cone C attached to the half-ray (apex, direction, side)
/// at horizon t.
///
/// D is the square with a corner at the apex whose diagonal is the segment
/// [apex, apex +/- 2t d]. Equivalently it is the L1 ball of radius t centred at
/// apex +/- t d. The cone C is the triangular half of D that has its apex at the
/// seed; the half-ray itself runs along the centre line of C.
///
/// In the rotated frame s = x + y, w = x - y an L1 ball becomes an axis-aligned
/// square, which is how intersection and membership are evaluated.
class DependenceRegion {
 public:
  DependenceRegion(Point2 apex, Direction direction, Side side, double horizon);

  Point2 apex() const noexcept { return apex_; }
  Direction direction() const noexcept { return direction_; }
  Side side() const noexcept { return side_; }
  double horizon() const noexcept { return horizon_; }

  /// Centre of the square D.
  Point2 centre() const noexcept;
  /// Far corner of D: apex +/- 2t d.
  Point2 far_corner() const noexcept;

  double square_area() const noexcept { return 2.0 * horizon_ * horizon_; }
  double cone_area() const noexcept { return horizon_ * horizon_; }

  bool square_contains(Point2 p) const noexcept;
  bool cone_contains(Point2 p) const noexcept;

  /// Axis-aligned bounding box of D.
  Window bounding_box() const noexcept;

  DependenceRegion translated(Point2 offset) const {
    return {apex_ + offset, direction_, side_, horizon_};
  }

 private:
  Point2 apex_;
  Direction direction_;
  Side side_;
  double horizon_;
};

/// True iff the closed squares D_a and D_b share at least one point.
/// Throws std::invalid_argument when the horizons differ.
bool regions_intersect(const DependenceRegion& a, const DependenceRegion& b);

/// ||u - v||_1 / 4: up to this horizon the dependence squares of any two half-rays
/// from u and v have disjoint interiors. Throws std::invalid_argument if u == v.
double independence_horizon(Point2 u, Point2 v);

}  // namespace gilbert
