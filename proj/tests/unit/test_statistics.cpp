#include <doctest.h>

#include <cmath>
#include <vector>

#include "gilbert/rng.hpp"
#include "gilbert/statistics.hpp"

using namespace gilbert;

TEST_CASE("survival examples") {
  const std::vector<double> lengths{1, 2, 3};
  const std::vector<double> grid{2};
  CHECK(estimate_survival(lengths, grid).survival[0] == doctest::Approx(1.0 / 3.0));
  const std::vector<double> same{1.5, 1.5, 1.5};
  const std::vector<double> at{1.5};
  CHECK(estimate_survival(same, at).survival[0] == 0.0);
  const std::vector<double> none;
  CHECK_THROWS_AS(estimate_survival(none, grid), std::invalid_argument);
  const std::vector<double> bad_grid{1, 1};
  CHECK_THROWS_AS(estimate_survival(lengths, bad_grid), std::invalid_argument);
}

TEST_CASE("survival is monotone and bounded") {
  auto rng = make_engine(4);
  std::vector<double> xs(500), grid;
  for (auto& x : xs) x = -std::log(1.0 - uniform01(rng));
  for (int k = 0; k <= 40; ++k) grid.push_back(0.1 * k);
  const auto s = estimate_survival(xs, grid);
  CHECK(s.survival[0] == 1.0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    CHECK(s.survival[k] <= s.survival[k - 1]);
    CHECK(s.survival[k] >= 0.0);
  }
}

TEST_CASE("exponential fit examples") {
  SurvivalCurve curve;
  for (int k = 1; k <= 10; ++k) {
    curve.grid.push_back(0.5 * k);
    curve.survival.push_back(std::exp(-2.0 * 0.5 * k));
  }
  const auto fit = fit_exponential_tail(curve, 0.0, 10.0);
  CHECK(std::abs(fit.rate - 2.0) < 1e-9);
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.points == 10);

  for (auto& s : curve.survival) s = 0.5;
  CHECK(std::abs(fit_exponential_tail(curve, 0.0, 10.0).rate) < 1e-12);
  CHECK_THROWS_AS(fit_exponential_tail(curve, 0.4, 1.2), std::invalid_argument);

  curve.censor_point = 1.6;
  CHECK(fit_exponential_tail(curve, 0.0, 10.0).points == 3);
}

TEST_CASE("quantile and fit range") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({1, 2, 3, 4}, 1.0) == 4.0);
  CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
  std::vector<LengthSample> s;
  for (int k = 1; k <= 101; ++k) s.push_back({double(k), false});
  s.push_back({200.0, true});
  const auto r = default_fit_range(s, 200.0);
  CHECK(r.lo == 51.0);
  CHECK(r.hi == 96.0);
}

TEST_CASE("two-sample KS distance") {
  const std::vector<double> a{1, 2, 3, 4}, b{1, 2, 3, 4}, c{5, 6, 7, 8}, d{1, 2, 5, 6};
  CHECK(ks_distance(a, b) == 0.0);
  CHECK(ks_distance(a, c) == 1.0);
  CHECK(ks_distance(a, d) == 0.5);
  CHECK(ks_distance(d, a) == 0.5);
}

TEST_CASE("event probability: trivial limits") {
  CHECK(estimate_event_probability({0, 0}, Direction::Horizontal, Side::Plus, 0.0, 1.0, 10, 1).value == 1.0);
  CHECK(estimate_event_probability({0, 0}, Direction::Horizontal, Side::Plus, 3.0, 0.0, 50, 1).value == 1.0);
  CHECK(estimate_event_probability({0, 0}, Direction::Vertical, Side::Minus, 3.0, 1e-9, 50, 1).value == 1.0);
}

TEST_CASE("event probability decreases in t") {
  std::vector<ProbabilityEstimate> p;
  for (double t : {1.0, 2.0, 4.0}) {
    p.push_back(estimate_event_probability({0, 0}, Direction::Horizontal, Side::Plus, t, 1.0, 3000, 17));
  }
  for (std::size_t k = 1; k < p.size(); ++k) {
    const double gap = p[k - 1].value - p[k].value;
    CHECK(gap > 3 * std::hypot(p[k - 1].std_error, p[k].std_error));
  }
}

TEST_CASE("event at t matches {L >= t} at a larger horizon on the same replicates") {
  const PinnedPoint pin{{0, 0}, Direction::Vertical};
  const double t = 2.0;
  const Window w = palm_window({&pin, 1}, t);
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto s = stream_seed(5, k, "horizon-event");
    const auto short_run = palm_replicate({&pin, 1}, w, 1.0, t, s);
    const auto long_run = palm_replicate({&pin, 1}, w, 1.0, 4 * t, s);
    const int id = short_run.seeds().seeds.back().id;
    for (Side side : {Side::Plus, Side::Minus}) {
      CHECK((short_run.ray(id, side).length >= t) == (long_run.ray(id, side).length >= t));
    }
  }
}

TEST_CASE("ray length samples") {
  const auto empty = sample_ray_lengths(1e-9, 5.0, 20, 3, Direction::Horizontal);
  for (const auto& s : empty) {
    CHECK(s.length == 10.0);
    CHECK(s.censored);
  }
  const auto a = sample_ray_lengths(1.0, 5.0, 200, 9, Direction::Vertical, 1);
  const auto b = sample_ray_lengths(1.0, 5.0, 200, 9, Direction::Vertical, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].length == b[k].length);
    CHECK(a[k].length <= 10.0);
  }
}

TEST_CASE("covariance basics") {
  const EventSpec u{{0, 0}, Direction::Horizontal, Side::Plus};
  CHECK_THROWS_AS(estimate_covariance(u, u, 1.0, 1.0, 10, 1), std::invalid_argument);

  const EventSpec v{{8, 0.5}, Direction::Vertical, Side::Plus};
  const auto est = estimate_covariance(u, v, 2.0, 1.0, 4000, 3);
  CHECK(std::abs(est.value) <= 0.25);
  CHECK(std::abs(est.value) < 3 * est.std_error + 1e-12);

  const auto swapped = estimate_covariance(v, u, 2.0, 1.0, 4000, 3);
  CHECK(std::abs(swapped.value - est.value) < 3 * std::hypot(est.std_error, swapped.std_error) + 1e-12);
}

TEST_CASE("plus and minus events at one seed are uncorrelated") {
  const auto est = estimate_plus_minus_covariance({0, 0}, Direction::Horizontal, 1.5, 1.0, 4000, 8);
  CHECK(std::abs(est.value) < 3 * est.std_error + 1e-12);
}

TEST_CASE("perpendicular trap off the tie without background") {
  const EventSpec v{{0, 0}, Direction::Horizontal, Side::Plus};
  const EventSpec u{{1.5, -1}, Direction::Vertical, Side::Plus};
  const auto est = estimate_covariance(v, u, 3.0, 0.0, 5, 1);
  CHECK(est.joint_count == 0);
  CHECK(est.p_a + est.p_b == 1.0);
}

TEST_CASE("sweep and escape tables have the requested rows") {
  const std::vector<double> d{1, 2};
  const auto rows = covariance_decay_sweep(PairLayout{}, d, 1.0, 1.0, 50, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].estimate.b.position.x + rows[1].estimate.b.position.y == doctest::Approx(2.0));
  const std::vector<double> bad{2, 1};
  CHECK_THROWS_AS(covariance_decay_sweep(PairLayout{}, bad, 1.0, 1.0, 5, 2), std::invalid_argument);

  const std::vector<double> sides{5, 10};
  const auto esc = escaping_expectation(1.0, sides, 20, 4);
  REQUIRE(esc.size() == 2);
  CHECK(esc[0].mean > 0);
  CHECK(esc[1].scaled == doctest::Approx(esc[1].mean / 10.0));
}
