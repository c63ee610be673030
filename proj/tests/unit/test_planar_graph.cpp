#include <doctest.h>

#include <sstream>

#include "gilbert/planar_graph.hpp"
#include "gilbert/rng.hpp"

#include <json.hpp>

using namespace gilbert;

namespace {

Tessellation build(std::vector<SeedPoint> seeds, double side) {
  SeedSet s;
  s.seeds = std::move(seeds);
  s.window = {0, 0, side, side};
  s.intensity = 1.0;
  return simulate(s, side);
}

}  // namespace

TEST_CASE("empty box") {
  const auto g = extract_graph(build({}, 4.0));
  CHECK(g.vertices.size() == 4);
  CHECK(g.edges.size() == 4);
  CHECK(g.faces.size() == 2);
  CHECK(g.rectangle_count() == 1);
  const auto report = euler_check(g, 0);
  CHECK(report.pass());
}

TEST_CASE("single seed") {
  const auto g = extract_graph(build({{0, {2, 2}, Direction::Horizontal, false}}, 4.0));
  CHECK(g.vertices.size() == 6);
  CHECK(g.edges.size() == 7);
  CHECK(g.faces.size() == 3);
  CHECK(g.rectangle_count() == 2);
  CHECK(euler_check(g, 1).pass());
}

TEST_CASE("two-seed example") {
  const auto g =
      extract_graph(build({{0, {1, 1}, Direction::Horizontal, false}, {1, {2, 3}, Direction::Vertical, false}}, 4.0));
  CHECK(g.vertices.size() == 8);
  CHECK(g.edges.size() == 10);
  CHECK(g.rectangle_count() == 3);
  const auto report = euler_check(g, 2);
  CHECK(report.pass());
  int t_junctions = 0;
  const auto deg = g.degrees();
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].kind == VertexKind::TJunction) {
      ++t_junctions;
      CHECK(deg[v] == 3);
    } else {
      CHECK(deg[v] == 2);
    }
  }
  CHECK(t_junctions == 4);
  const int outer = g.outer_face();
  REQUIRE(outer >= 0);
  CHECK(g.faces[static_cast<std::size_t>(outer)].signed_area == doctest::Approx(-16.0));
}

TEST_CASE("thin face far from the origin is a rectangle") {
  // Two parallel horizontal segments 1e-8 apart both span the box.
  const auto g = extract_graph(build({{0, {10, 15.55}, Direction::Horizontal, false},
                                      {1, {12, 15.55000001}, Direction::Horizontal, false}},
                                     20.0));
  CHECK(g.rectangle_count() == 3);
  CHECK(euler_check(g, 2).pass());
}

TEST_CASE("Euler identities on Poisson instances") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto seeds = sample_poisson(BoxDomain(20.0), 1.0, MarkDistribution{}, stream_seed(9, k, "euler"));
    const auto g = extract_graph(simulate(seeds, 20.0));
    const auto r = euler_check(g, static_cast<int>(seeds.size()));
    CHECK_MESSAGE(r.pass(), (r.failures.empty() ? "" : r.failures.front()));
    double area = 0;
    for (const auto& f : g.faces) {
      if (f.signed_area > 0) area += f.signed_area;
    }
    CHECK(area == doctest::Approx(400.0));
  }
}

TEST_CASE("graph does not depend on the horizon once frozen") {
  const auto seeds = sample_poisson(BoxDomain(10.0), 1.0, MarkDistribution{}, 123);
  const auto a = extract_graph(simulate(seeds, 10.0));
  const auto b = extract_graph(simulate(seeds, 100.0));
  REQUIRE(a.vertices.size() == b.vertices.size());
  for (std::size_t v = 0; v < a.vertices.size(); ++v) {
    CHECK(a.vertices[v].position == b.vertices[v].position);
    CHECK(a.vertices[v].kind == b.vertices[v].kind);
  }
  CHECK(a.edges.size() == b.edges.size());
}

TEST_CASE("corrupted graph fails the check") {
  auto g = extract_graph(build({{0, {2, 2}, Direction::Horizontal, false}}, 4.0));
  g.edges.pop_back();
  const auto r = euler_check(g, 1);
  CHECK_FALSE(r.pass());
  CHECK(r.edges == 6);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(extract_graph(simulate(SeedSet{{}, {0, 0, 4, 4}, 1.0, 0}, 3.0)), std::invalid_argument);
  CHECK_THROWS_AS(extract_graph(build({{0, {0, 2}, Direction::Horizontal, false}}, 4.0)), DegenerateInput);
}

TEST_CASE("JSON export") {
  const auto g = extract_graph(build({{0, {2, 2}, Direction::Vertical, false}}, 4.0));
  std::ostringstream out;
  write_graph_json(out, g);
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["vertices"].size() == 6);
  CHECK(doc["edges"].size() == 7);
  CHECK(doc["faces"].size() == 3);
  CHECK(doc["vertices"][0]["kind"] == "corner");
}
