#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "gilbert/geometry.hpp"
#include "gilbert/growth.hpp"
#include "gilbert/rng.hpp"
#include "gilbert/sampling.hpp"

using namespace gilbert;

namespace {

SeedSet make_set(std::vector<SeedPoint> seeds, Window w) {
  SeedSet s;
  s.seeds = std::move(seeds);
  s.window = w;
  s.intensity = 1.0;
  return s;
}

SeedSet two_seed() {
  return make_set({{0, {1, 1}, Direction::Horizontal, false}, {1, {2, 3}, Direction::Vertical, false}},
                  {0, 0, 4, 4});
}

SeedSet random_set(std::uint64_t seed, double side = 10.0) {
  return sample_poisson(BoxDomain(side), 1.0, MarkDistribution{}, seed);
}

}  // namespace

TEST_CASE("single seed grows freely") {
  const auto s = make_set({{0, {2, 2}, Direction::Horizontal, false}}, {0, 0, 4, 4});
  const auto t = simulate(s, 4.0);
  for (Side side : {Side::Plus, Side::Minus}) {
    CHECK(t.ray(0, side).free());
    CHECK(t.ray(0, side).length == 4.0);
  }
  const auto total = ray_length_total(t, 0);
  CHECK(total.length == 8.0);
  CHECK(total.censored);
  CHECK(escaping_rays(t) == 2);
}

TEST_CASE("two-seed example") {
  const auto t = simulate(two_seed(), 4.0);
  const HalfRay& down = t.ray(1, Side::Minus);
  REQUIRE(down.blocker);
  CHECK(down.blocker->seed_id == 0);
  CHECK(down.blocker->side == Side::Plus);
  CHECK(down.blocker->point == Point2{2, 1});
  CHECK(down.length == 2.0);
  CHECK(t.ray(0, Side::Plus).free());
  CHECK(t.ray(0, Side::Minus).free());
  CHECK(t.ray(1, Side::Plus).free());
  const auto total = ray_length_total(t, 1);
  CHECK(total.length == 6.0);
  CHECK(total.censored);
  CHECK(escaping_rays(t) == 3);
  CHECK(stop_code(down) == "blocked:0+");
  CHECK(check_invariants(t).empty());
  CHECK_THROWS_AS(ray_length_total(t, 7), std::out_of_range);
}

TEST_CASE("oracle reproduces the small examples") {
  const double dt = 1e-3;
  const auto single = make_set({{0, {2, 2}, Direction::Horizontal, false}}, {0, 0, 4, 4});
  const auto a = simulate(single, 4.0), b = oracle_simulate(single, 4.0, dt);
  CHECK(b.ray(0, Side::Plus).length == a.ray(0, Side::Plus).length);
  CHECK(b.ray(0, Side::Minus).free());

  const auto o = oracle_simulate(two_seed(), 4.0, dt);
  const HalfRay& down = o.ray(1, Side::Minus);
  REQUIRE(down.blocker);
  CHECK(down.blocker->seed_id == 0);
  CHECK(down.length >= 2 - 2 * dt);
  CHECK(down.length <= 2.0);
}

TEST_CASE("perpendicular trap: the tie stops both, never both reach 2") {
  const auto s = make_set({{0, {0, 0}, Direction::Horizontal, false}, {1, {1, -1}, Direction::Vertical, false}},
                          {-3, -3, 3, 3});
  const auto t = simulate(s, 3.0);
  const bool v_reaches = t.ray(0, Side::Plus).length >= 2.0;
  const bool u_reaches = t.ray(1, Side::Plus).length >= 2.0;
  CHECK_FALSE((v_reaches && u_reaches));
  CHECK(t.ray(0, Side::Plus).degenerate);
  CHECK(t.ray(1, Side::Plus).degenerate);
}

TEST_CASE("perpendicular trap off the tie: exactly one reaches 2") {
  const auto s = make_set({{0, {0, 0}, Direction::Horizontal, false}, {1, {1.5, -1}, Direction::Vertical, false}},
                          {-3, -3, 3, 3});
  const auto t = simulate(s, 3.0);
  const bool v_reaches = t.ray(0, Side::Plus).length >= 2.0;
  const bool u_reaches = t.ray(1, Side::Plus).length >= 2.0;
  CHECK(v_reaches != u_reaches);
  CHECK(t.ray(0, Side::Plus).length == 1.5);
  CHECK(t.ray(1, Side::Plus).free());
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(simulate(two_seed(), 0.0), std::invalid_argument);
  const auto bad = make_set({{0, {1, 1}, Direction::Horizontal, false}, {1, {1, 3}, Direction::Vertical, false}},
                            {0, 0, 4, 4});
  CHECK_THROWS_AS(simulate(bad, 1.0), DegenerateInput);
  CHECK_THROWS_AS(oracle_simulate(two_seed(), 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(escaping_rays(simulate(two_seed(), 3.0)), std::invalid_argument);
  CHECK(escaping_rays(simulate(make_set({}, {0, 0, 4, 4}), 4.0)) == 0);
}

TEST_CASE("engine matches the time-stepping oracle on random instances") {
  const double dt = 1e-3;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto s = random_set(stream_seed(31, k, "oracle"));
    const auto a = simulate(s, 10.0);
    const auto b = oracle_simulate(s, 10.0, dt);
    for (std::size_t r = 0; r < a.half_rays().size(); ++r) {
      const HalfRay& x = a.half_rays()[r];
      const HalfRay& y = b.half_rays()[r];
      CHECK(std::abs(x.length - y.length) <= 2 * dt);
      CHECK(x.blocker.has_value() == y.blocker.has_value());
      if (x.blocker && y.blocker) {
        CHECK(x.blocker->seed_id == y.blocker->seed_id);
        CHECK(x.blocker->side == y.blocker->side);
      }
    }
  }
}

TEST_CASE("structural invariants on random instances") {
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto t = simulate(random_set(stream_seed(41, k, "inv"), 15.0), 15.0);
    const auto problems = check_invariants(t);
    CHECK_MESSAGE(problems.empty(), (problems.empty() ? "" : problems.front()));
    for (const auto& r : t.half_rays()) {
      CHECK(r.length <= t.horizon());
      if (r.blocker) CHECK(t.seed(r.blocker->seed_id).mark != t.seed(r.seed_id).mark);
    }
    for (const auto& s : t.seeds().seeds) CHECK(ray_length_total(t, s.id).length <= 2 * t.horizon());
  }
}

TEST_CASE("monotone stopping under a shorter horizon") {
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto s = random_set(stream_seed(51, k, "mono"));
    const auto full = simulate(s, 10.0);
    for (double h : {0.5, 1.7, 4.0}) {
      const auto cut = simulate(s, h);
      for (std::size_t r = 0; r < full.half_rays().size(); ++r) {
        const HalfRay& a = full.half_rays()[r];
        const HalfRay& b = cut.half_rays()[r];
        CHECK(b.length == std::min(a.length, h));
        if (a.blocker && a.length <= h) {
          REQUIRE(b.blocker);
          CHECK(*a.blocker == *b.blocker);
        }
        // Length >= t iff still growing at t.
        CHECK((a.length >= h) == b.free());
      }
    }
  }
}

TEST_CASE("locality: seeds outside the dependence square do not matter") {
  int checked = 0;
  for (std::uint64_t k = 0; k < 40; ++k) {
    auto s = random_set(stream_seed(61, k, "loc"), 12.0);
    const std::vector<PinnedPoint> pin{{{6.0, 6.0}, k % 2 ? Direction::Vertical : Direction::Horizontal}};
    s = insert_palm(s, pin);
    const int id = s.seeds.back().id;
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      const auto full = simulate(s, t);
      for (Side side : {Side::Plus, Side::Minus}) {
        const DependenceRegion d(pin[0].position, pin[0].mark, side, t);
        SeedSet local = s;
        std::erase_if(local.seeds, [&](const SeedPoint& p) { return !d.square_contains(p.position); });
        const auto restricted = simulate(local, t);
        CHECK((full.ray(id, side).length == t) == (restricted.ray(id, side).length == t));
        ++checked;
      }
    }
  }
  CHECK(checked == 320);
}

TEST_CASE("simulate is deterministic and translation invariant") {
  const auto s = random_set(77);
  std::ostringstream a, b;
  write_tessellation_csv(a, simulate(s, 10.0));
  write_tessellation_csv(b, simulate(s, 10.0));
  CHECK(a.str() == b.str());

  // Blocking decisions survive a shift of the whole configuration.
  const auto shifted = translated(s, {1024.0, -512.0});
  const auto t0 = simulate(s, 10.0), t1 = simulate(shifted, 10.0);
  for (std::size_t r = 0; r < t0.half_rays().size(); ++r) {
    CHECK(t0.half_rays()[r].blocker.has_value() == t1.half_rays()[r].blocker.has_value());
    if (t0.half_rays()[r].blocker) CHECK(t0.half_rays()[r].blocker->seed_id == t1.half_rays()[r].blocker->seed_id);
  }
}

TEST_CASE("tessellation CSV layout") {
  std::ostringstream out;
  write_tessellation_csv(out, simulate(two_seed(), 4.0));
  CHECK(out.str() ==
        "seed_id,x,y,mark,len_plus,stop_plus,len_minus,stop_minus\n"
        "0,1,1,H,4,free,4,free\n"
        "1,2,3,V,4,free,2,blocked:0+\n");
}
