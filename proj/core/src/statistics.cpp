#include "gilbert/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gilbert/parallel.hpp"
#include "gilbert/rng.hpp"

namespace gilbert {

namespace {

void require_replicates(int replicates) {
  if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
}

void require_intensity(double intensity) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw std::invalid_argument("intensity must be non-negative");
  }
}

bool reached(const Tessellation& t, int seed_id, Side side, double horizon) {
  return t.ray(seed_id, side).length >= horizon;
}

// Indicator pairs -> plug-in covariance with the standard error of the mean of
// the centred products.
void fill_covariance(CovarianceEstimate& est, const std::vector<unsigned char>& xa,
                     const std::vector<unsigned char>& xb) {
  const auto n = static_cast<double>(xa.size());
  long long ca = 0, cb = 0, cab = 0;
  for (std::size_t k = 0; k < xa.size(); ++k) {
    ca += xa[k];
    cb += xb[k];
    cab += xa[k] & xb[k];
  }
  est.replicates = static_cast<int>(xa.size());
  est.p_a = static_cast<double>(ca) / n;
  est.p_b = static_cast<double>(cb) / n;
  est.p_joint = static_cast<double>(cab) / n;
  est.joint_count = cab;
  est.value = est.p_joint - est.p_a * est.p_b;
  double ss = 0.0;
  for (std::size_t k = 0; k < xa.size(); ++k) {
    const double z = (xa[k] - est.p_a) * (xb[k] - est.p_b) - est.value;
    ss += z * z;
  }
  est.std_error = xa.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
}

}  // namespace

Window palm_window(std::span<const PinnedPoint> pins, double horizon) {
  if (pins.empty()) throw std::invalid_argument("palm_window: no pinned points");
  if (!(horizon > 0.0)) throw std::invalid_argument("palm_window: horizon must be positive");
  Window w = Window::centred(pins.front().position, 4.0 * horizon);
  for (const auto& p : pins.subspan(1)) {
    const Window s = Window::centred(p.position, 4.0 * horizon);
    w = {std::min(w.x0, s.x0), std::min(w.y0, s.y0), std::max(w.x1, s.x1), std::max(w.y1, s.y1)};
  }
  return w;
}

Tessellation palm_replicate(std::span<const PinnedPoint> pins, const Window& window, double intensity,
                            double horizon, std::uint64_t rng_seed, const MarkDistribution& marks) {
  require_intensity(intensity);
  SeedSet background;
  if (intensity > 0.0) {
    background = sample_poisson(window, intensity, marks, rng_seed);
  } else {
    background.window = window;
    background.rng_seed = rng_seed;
  }
  return simulate(insert_palm(background, pins), horizon);
}

std::vector<LengthSample> sample_ray_lengths(double intensity, double t_max, int replicates,
                                             std::uint64_t rng_seed, Direction mark, int threads) {
  require_replicates(replicates);
  const PinnedPoint pin{{0.0, 0.0}, mark};
  const Window window = palm_window({&pin, 1}, t_max);
  std::vector<LengthSample> out(static_cast<std::size_t>(replicates));
  parallel_for(out.size(), threads, [&](std::size_t k) {
    const Tessellation t = palm_replicate({&pin, 1}, window, intensity, t_max,
                                          stream_seed(rng_seed, k, "ray-lengths"));
    const int id = t.seeds().seeds.back().id;
    const RayLength total = ray_length_total(t, id);
    out[k] = {total.length, total.censored};
  });
  return out;
}

SurvivalCurve estimate_survival(std::span<const double> lengths, std::span<const double> grid,
                                double censor_point) {
  if (lengths.empty()) throw std::invalid_argument("estimate_survival: empty sample");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("estimate_survival: grid must be strictly increasing");
  }
  std::vector<double> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end());
  SurvivalCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.sample_size = sorted.size();
  curve.censor_point = censor_point;
  curve.survival.reserve(grid.size());
  for (double t : grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    curve.survival.push_back(static_cast<double>(above) / static_cast<double>(sorted.size()));
  }
  return curve;
}

TailFit fit_exponential_tail(const SurvivalCurve& curve, double t_lo, double t_hi) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    const double t = curve.grid[k];
    if (t < t_lo || t > t_hi || t >= curve.censor_point || !(curve.survival[k] > 0.0)) continue;
    xs.push_back(t);
    ys.push_back(std::log(curve.survival[k]));
  }
  if (xs.size() < 3) throw std::invalid_argument("fit_exponential_tail: fewer than three usable grid points");

  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponential_tail: degenerate grid");
  const double slope = sxy / sxx;
  TailFit fit;
  fit.rate = -slope;
  fit.intercept = my - slope * mx;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = xs.size();
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (fit.intercept + slope * xs[k]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: order must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

FitRange default_fit_range(std::span<const LengthSample> samples, double censor_point) {
  std::vector<double> uncensored;
  for (const auto& s : samples) {
    if (!s.censored) uncensored.push_back(s.length);
  }
  if (uncensored.empty()) throw std::invalid_argument("default_fit_range: every sample is censored");
  const double lo = quantile(uncensored, 0.5);
  const double hi = std::min(quantile(uncensored, 0.95), std::nextafter(censor_point, 0.0));
  return {lo, hi};
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

ProbabilityEstimate estimate_event_probability(Point2 v, Direction mark, Side side, double t,
                                               double intensity, int replicates, std::uint64_t rng_seed,
                                               int threads) {
  require_replicates(replicates);
  require_intensity(intensity);
  if (t < 0.0) throw std::invalid_argument("estimate_event_probability: negative horizon");
  if (t == 0.0) return {1.0, 0.0, replicates};  // L(0) = 0 = t always

  const PinnedPoint pin{v, mark};
  const Window window = palm_window({&pin, 1}, t);
  std::vector<unsigned char> hit(static_cast<std::size_t>(replicates));
  parallel_for(hit.size(), threads, [&](std::size_t k) {
    const Tessellation tess =
        palm_replicate({&pin, 1}, window, intensity, t, stream_seed(rng_seed, k, "event"));
    hit[k] = reached(tess, tess.seeds().seeds.back().id, side, t);
  });
  long long count = 0;
  for (auto h : hit) count += h;
  const double p = static_cast<double>(count) / replicates;
  return {p, std::sqrt(p * (1.0 - p) / replicates), replicates};
}

CovarianceEstimate estimate_covariance(const EventSpec& a, const EventSpec& b, double t, double intensity,
                                       int replicates, std::uint64_t rng_seed, int threads) {
  require_replicates(replicates);
  require_intensity(intensity);
  if (a.position == b.position) throw std::invalid_argument("estimate_covariance: points coincide");
  if (!(t > 0.0)) throw std::invalid_argument("estimate_covariance: horizon must be positive");

  const std::array<PinnedPoint, 2> pins{PinnedPoint{a.position, a.mark}, PinnedPoint{b.position, b.mark}};
  const Window window = palm_window(pins, t);
  std::vector<unsigned char> xa(static_cast<std::size_t>(replicates)), xb(xa.size());
  parallel_for(xa.size(), threads, [&](std::size_t k) {
    const Tessellation tess = palm_replicate(pins, window, intensity, t, stream_seed(rng_seed, k, "covariance"));
    const auto& seeds = tess.seeds().seeds;
    const int id_b = seeds[seeds.size() - 1].id;
    const int id_a = seeds[seeds.size() - 2].id;
    xa[k] = reached(tess, id_a, a.side, t);
    xb[k] = reached(tess, id_b, b.side, t);
  });
  CovarianceEstimate est;
  est.a = a;
  est.b = b;
  est.horizon = t;
  fill_covariance(est, xa, xb);
  return est;
}

CovarianceEstimate estimate_plus_minus_covariance(Point2 v, Direction mark, double t, double intensity,
                                                  int replicates, std::uint64_t rng_seed, int threads) {
  require_replicates(replicates);
  require_intensity(intensity);
  if (!(t > 0.0)) throw std::invalid_argument("estimate_plus_minus_covariance: horizon must be positive");
  const PinnedPoint pin{v, mark};
  const Window window = palm_window({&pin, 1}, t);
  std::vector<unsigned char> xa(static_cast<std::size_t>(replicates)), xb(xa.size());
  parallel_for(xa.size(), threads, [&](std::size_t k) {
    const Tessellation tess =
        palm_replicate({&pin, 1}, window, intensity, t, stream_seed(rng_seed, k, "plus-minus"));
    const int id = tess.seeds().seeds.back().id;
    xa[k] = reached(tess, id, Side::Plus, t);
    xb[k] = reached(tess, id, Side::Minus, t);
  });
  CovarianceEstimate est;
  est.a = {v, mark, Side::Plus};
  est.b = {v, mark, Side::Minus};
  est.horizon = t;
  fill_covariance(est, xa, xb);
  return est;
}

std::vector<SweepRow> covariance_decay_sweep(const PairLayout& layout, std::span<const double> distances,
                                             double t, double intensity, int replicates,
                                             std::uint64_t rng_seed, int threads) {
  const double norm = std::abs(layout.offset.x) + std::abs(layout.offset.y);
  if (!(norm > 0.0)) throw std::invalid_argument("covariance_decay_sweep: zero offset direction");
  for (std::size_t k = 0; k < distances.size(); ++k) {
    if (!(distances[k] > 0.0) || (k > 0 && !(distances[k] > distances[k - 1]))) {
      throw std::invalid_argument("covariance_decay_sweep: distances must be positive and increasing");
    }
  }
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < distances.size(); ++k) {
    const double d = distances[k];
    const EventSpec u{{0.0, 0.0}, layout.mark_u, layout.side_u};
    const EventSpec v{(d / norm) * layout.offset, layout.mark_v, layout.side_v};
    rows.push_back({d, estimate_covariance(u, v, t, intensity, replicates, stream_seed(rng_seed, k, "sweep"),
                                           threads)});
  }
  return rows;
}

std::vector<EscapeRow> escaping_expectation(double intensity, std::span<const double> box_sides,
                                            int replicates, std::uint64_t rng_seed, int threads) {
  require_replicates(replicates);
  if (!(intensity > 0.0)) throw std::invalid_argument("escaping_expectation: intensity must be positive");
  for (std::size_t k = 0; k < box_sides.size(); ++k) {
    if (!(box_sides[k] > 0.0) || (k > 0 && !(box_sides[k] > box_sides[k - 1]))) {
      throw std::invalid_argument("escaping_expectation: box sides must be positive and increasing");
    }
  }
  std::vector<EscapeRow> rows;
  for (std::size_t k = 0; k < box_sides.size(); ++k) {
    const double side = box_sides[k];
    const BoxDomain box(side);
    std::vector<int> counts(static_cast<std::size_t>(replicates));
    parallel_for(counts.size(), threads, [&](std::size_t r) {
      const SeedSet seeds = sample_poisson(box, intensity, MarkDistribution{},
                                           stream_seed(rng_seed, r, "escape/" + std::to_string(k)));
      counts[r] = escaping_rays(simulate(seeds, side));
    });
    double sum = 0.0, sum2 = 0.0;
    for (int c : counts) {
      sum += c;
      sum2 += static_cast<double>(c) * c;
    }
    const double n = replicates;
    EscapeRow row;
    row.box_side = side;
    row.replicates = replicates;
    row.mean = sum / n;
    row.std_error = replicates > 1 ? std::sqrt(std::max(0.0, sum2 - n * row.mean * row.mean) / (n - 1.0) / n) : 0.0;
    row.scaled = row.mean / (std::sqrt(intensity) * side);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gilbert
