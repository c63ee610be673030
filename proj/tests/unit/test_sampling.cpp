#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "gilbert/rng.hpp"
#include "gilbert/sampling.hpp"

using namespace gilbert;

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(BoxDomain(0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_poisson(BoxDomain(1.0), 0.0, MarkDistribution{}, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_poisson(BoxDomain(1.0), -2.0, MarkDistribution{}, 1), std::invalid_argument);
  CHECK_THROWS_AS(MarkDistribution(0.0), std::invalid_argument);
  CHECK_THROWS_AS(MarkDistribution(1.0), std::invalid_argument);
}

TEST_CASE("tiny box is almost always empty") {
  int nonempty = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    nonempty += !sample_poisson(BoxDomain(1e-6), 1.0, MarkDistribution{}, stream_seed(3, k, "tiny")).empty();
  }
  CHECK(nonempty == 0);
}

TEST_CASE("Poisson counts and mark fraction") {
  const int reps = 2000;
  double sum = 0, sum_sq = 0;
  long long vertical = 0, total = 0;
  for (int k = 0; k < reps; ++k) {
    const auto s = sample_poisson(BoxDomain(20.0), 1.0, MarkDistribution{}, stream_seed(7, k, "count"));
    sum += s.size();
    sum_sq += double(s.size()) * s.size();
    for (const auto& p : s.seeds) {
      vertical += p.mark == Direction::Vertical;
      CHECK(BoxDomain(20.0).contains(p.position));
    }
    total += s.size();
  }
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  CHECK(std::abs(mean - 400.0) < 3 * std::sqrt(400.0 / reps));
  CHECK(var == doctest::Approx(400.0).epsilon(0.1));
  const double frac = double(vertical) / total;
  CHECK(std::abs(frac - 0.5) < 3 * std::sqrt(0.25 / total));
}

TEST_CASE("mark probability is respected") {
  long long vertical = 0, total = 0;
  for (int k = 0; k < 200; ++k) {
    const auto s = sample_poisson(BoxDomain(20.0), 1.0, MarkDistribution{0.2}, stream_seed(8, k, "p"));
    for (const auto& p : s.seeds) vertical += p.mark == Direction::Vertical;
    total += s.size();
  }
  CHECK(std::abs(double(vertical) / total - 0.2) < 3 * std::sqrt(0.16 / total));
}

TEST_CASE("determinism and stream independence") {
  const auto a = sample_poisson(BoxDomain(10.0), 2.0, MarkDistribution{}, 99);
  const auto b = sample_poisson(BoxDomain(10.0), 2.0, MarkDistribution{}, 99);
  CHECK(a == b);
  std::ostringstream sa, sb;
  write_seed_csv(sa, a);
  write_seed_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(stream_seed(1, 0, "x") != stream_seed(1, 1, "x"));
  CHECK(stream_seed(1, 0, "x") != stream_seed(1, 0, "y"));
  CHECK(stream_seed(1, 0, "x") != stream_seed(2, 0, "x"));
}

TEST_CASE("thinning: restriction of a 2N sample behaves like a direct N sample") {
  const int reps = 2000;
  double restricted = 0, direct = 0;
  for (int k = 0; k < reps; ++k) {
    const auto big = sample_poisson(BoxDomain(10.0), 1.0, MarkDistribution{}, stream_seed(21, k, "big"));
    restricted += restrict_to(big, Window::of(BoxDomain(5.0))).size();
    direct += sample_poisson(BoxDomain(5.0), 1.0, MarkDistribution{}, stream_seed(21, k, "small")).size();
  }
  const double se = std::sqrt(2 * 25.0 / reps);
  CHECK(std::abs(restricted / reps - direct / reps) < 3 * se);
  CHECK(std::abs(restricted / reps - 25.0) < 3 * std::sqrt(25.0 / reps));
}

TEST_CASE("Palm insertion") {
  SeedSet empty;
  const std::vector<PinnedPoint> pins{{{1, 2}, Direction::Horizontal}, {{3, 4}, Direction::Vertical}};
  const auto out = insert_palm(empty, pins);
  REQUIRE(out.size() == 2);
  CHECK(out.seeds[0].pinned);
  CHECK(out.seeds[1].position == Point2{3, 4});

  const auto base = sample_poisson(BoxDomain(5.0), 1.0, MarkDistribution{}, 4);
  const std::vector<PinnedPoint> one{{{2.5, 2.5}, Direction::Horizontal}};
  const auto with = insert_palm(base, one);
  CHECK(std::equal(base.seeds.begin(), base.seeds.end(), with.seeds.begin()));
  CHECK(with.seeds.back().id == base.next_id());

  const std::vector<PinnedPoint> dup{{{1, 2}, Direction::Vertical}};
  CHECK_THROWS_AS(insert_palm(out, dup), DegenerateInput);
  const std::vector<PinnedPoint> shared_x{{{1, 7}, Direction::Vertical}};
  CHECK_THROWS_AS(insert_palm(out, shared_x), DegenerateInput);
  CHECK_NOTHROW(insert_palm(out, shared_x, false));
}

TEST_CASE("Palm insertion leaves the background law unchanged") {
  const int reps = 2000;
  double with = 0, without = 0;
  const std::vector<PinnedPoint> pin{{{5.0, 5.0}, Direction::Horizontal}};
  for (int k = 0; k < reps; ++k) {
    const auto bg = sample_poisson(BoxDomain(10.0), 1.0, MarkDistribution{}, stream_seed(5, k, "bg"));
    const auto inserted = insert_palm(bg, pin, false);
    for (const auto& s : inserted.seeds) with += !s.pinned;
    without += sample_poisson(BoxDomain(10.0), 1.0, MarkDistribution{}, stream_seed(6, k, "bg")).size();
  }
  CHECK(std::abs(with / reps - without / reps) < 3 * std::sqrt(2 * 100.0 / reps));
}

TEST_CASE("general position and jitter") {
  SeedSet s;
  s.seeds = {{0, {1, 1}, Direction::Horizontal, false}, {1, {1, 3}, Direction::Vertical, false}};
  CHECK_FALSE(in_general_position(s.seeds));
  try {
    require_general_position(s.seeds);
    FAIL("expected DegenerateInput");
  } catch (const DegenerateInput& e) {
    CHECK(std::string(e.what()).find("share x = 1") != std::string::npos);
  }
  const auto j = jitter(s, 1e-6, 3);
  CHECK(in_general_position(j.seeds));
  CHECK(std::abs(j.seeds[0].position.x - 1.0) <= 1e-6);
}

TEST_CASE("seed CSV round trip is exact") {
  auto s = sample_poisson(BoxDomain(3.0), 2.0, MarkDistribution{}, 12);
  const std::vector<PinnedPoint> pin{{{1.0 / 3.0, 2.0 / 7.0}, Direction::Vertical}};
  s = insert_palm(s, pin);
  std::stringstream ss;
  write_seed_csv(ss, s);
  const auto back = read_seed_csv(ss);
  CHECK(back.seeds == s.seeds);
  std::istringstream bad("id,x,y\n");
  CHECK_THROWS_AS(read_seed_csv(bad), std::invalid_argument);
}
