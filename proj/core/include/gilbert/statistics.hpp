#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gilbert/geometry.hpp"
#include "gilbert/growth.hpp"
#include "gilbert/sampling.hpp"

namespace gilbert {

// ---------------------------------------------------------------------------
// Palm experiments
//
// Conditioning on a few points being seeds is realised by inserting them into an
// independent Poisson background. The background is sampled only on a window
// that covers the dependence squares of the events of interest, which makes
// those events exactly distributed as in the whole plane. An intensity of zero
// means an empty background.
// ---------------------------------------------------------------------------

/// Square of side 4t centred at each pinned point, merged into one bounding
/// rectangle; covers D+ and D- of every pinned point at horizon t.
Window palm_window(std::span<const PinnedPoint> pins, double horizon);

/// One Palm replicate: background on the window plus the pinned points (which
/// receive the ids following the background's), simulated up to the horizon.
Tessellation palm_replicate(std::span<const PinnedPoint> pins, const Window& window, double intensity,
                            double horizon, std::uint64_t rng_seed,
                            const MarkDistribution& marks = MarkDistribution{});

struct LengthSample {
  double length = 0.0;
  bool censored = false;
};

/// Total length L+ + L- of the segment through a pinned seed at the centre of a
/// window of side 4 t_max, one sample per replicate.
std::vector<LengthSample> sample_ray_lengths(double intensity, double t_max, int replicates,
                                             std::uint64_t rng_seed, Direction mark, int threads = 1);

// ---------------------------------------------------------------------------
// Tail estimation
// ---------------------------------------------------------------------------

struct SurvivalCurve {
  std::vector<double> grid;
  std::vector<double> survival;  // fraction of samples strictly greater than grid[k]
  std::size_t sample_size = 0;
  double censor_point = std::numeric_limits<double>::infinity();
};

/// Empirical survival on a strictly increasing grid. Throws std::invalid_argument
/// on an empty sample or a non-increasing grid.
SurvivalCurve estimate_survival(std::span<const double> lengths, std::span<const double> grid,
                                double censor_point = std::numeric_limits<double>::infinity());

struct TailFit {
  double rate = 0.0;  // -slope of log S, per unit length
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t points = 0;
};

/// Least squares of log S(t) against t over grid points in [t_lo, t_hi] with
/// S > 0 and t below the censor point. Needs at least three such points.
TailFit fit_exponential_tail(const SurvivalCurve& curve, double t_lo, double t_hi);

/// Empirical quantile of order q (linear interpolation between order statistics).
double quantile(std::vector<double> values, double q);

struct FitRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// [median, 95th percentile] of the uncensored lengths, capped below the censor point.
FitRange default_fit_range(std::span<const LengthSample> samples, double censor_point);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Event probabilities and covariances
// ---------------------------------------------------------------------------

struct ProbabilityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int replicates = 0;
};

/// Frequency of A(t) = {L(t) = t} for the given half-ray of a pinned seed.
ProbabilityEstimate estimate_event_probability(Point2 v, Direction mark, Side side, double t,
                                               double intensity, int replicates, std::uint64_t rng_seed,
                                               int threads = 1);

/// A half-ray of a pinned seed whose event {L(t) = t} is being tracked.
struct EventSpec {
  Point2 position;
  Direction mark = Direction::Horizontal;
  Side side = Side::Plus;
};

struct CovarianceEstimate {
  double value = 0.0;  // P(A and B) - P(A) P(B), plug-in
  double std_error = 0.0;
  int replicates = 0;
  double p_a = 0.0;
  double p_b = 0.0;
  double p_joint = 0.0;
  long long joint_count = 0;
  EventSpec a;
  EventSpec b;
  double horizon = 0.0;
};

/// Covariance of the indicators of A_a(t) and A_b(t) given that both points are
/// seeds. Standard error from the per-replicate products of centred indicators.
/// Throws std::invalid_argument if the two positions coincide.
CovarianceEstimate estimate_covariance(const EventSpec& a, const EventSpec& b, double t, double intensity,
                                       int replicates, std::uint64_t rng_seed, int threads = 1);

/// Covariance of A+(t) and A-(t) at one pinned seed.
CovarianceEstimate estimate_plus_minus_covariance(Point2 v, Direction mark, double t, double intensity,
                                                  int replicates, std::uint64_t rng_seed, int threads = 1);

/// How the second point of each pair is placed relative to the first.
struct PairLayout {
  Direction mark_u = Direction::Horizontal;
  Direction mark_v = Direction::Horizontal;
  Side side_u = Side::Plus;
  Side side_v = Side::Plus;
  /// Offset direction of v from u; rescaled to the requested L1 distance.
  Point2 offset{0.5, 0.5};
};

struct SweepRow {
  double distance = 0.0;
  CovarianceEstimate estimate;
};

/// estimate_covariance at each L1 distance (strictly increasing), u at the origin.
std::vector<SweepRow> covariance_decay_sweep(const PairLayout& layout, std::span<const double> distances,
                                             double t, double intensity, int replicates,
                                             std::uint64_t rng_seed, int threads = 1);

// ---------------------------------------------------------------------------
// Escaping rays
// ---------------------------------------------------------------------------

struct EscapeRow {
  double box_side = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double scaled = 0.0;  // mean / (sqrt(lambda) N)
  int replicates = 0;
};

/// Monte Carlo mean of the number of escaping rays in [0,N]^2 for each N.
std::vector<EscapeRow> escaping_expectation(double intensity, std::span<const double> box_sides,
                                            int replicates, std::uint64_t rng_seed, int threads = 1);

}  // namespace gilbert
