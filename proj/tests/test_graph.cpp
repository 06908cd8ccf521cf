#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rim/graph.hpp"
#include "rim/rng.hpp"

using namespace rim;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("load_graph parses a single probabilistic edge") {
  auto path = write_temp("rim_single.tsv", "0\t1\t0.5\n");
  LoadedGraph loaded = load_graph(path, EdgeListFormat::kWithProb);
  CHECK(loaded.graph.n() == 2);
  CHECK(loaded.graph.m() == 1);
  REQUIRE(loaded.theta.has_value());
  CHECK(loaded.theta->p[0] == doctest::Approx(0.5));
}

TEST_CASE("load_graph rejects degenerate and malformed input") {
  CHECK_THROWS_WITH_AS(load_graph(write_temp("rim_empty.tsv", ""), EdgeListFormat::kPlain),
                       doctest::Contains("empty graph"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      load_graph(write_temp("rim_range.tsv", "0\t1\t0.2\n0\t2\t1.3\n"),
                 EdgeListFormat::kWithProb),
      doctest::Contains(":2"), std::runtime_error);
  CHECK_THROWS_AS(load_graph(write_temp("rim_badline.tsv", "0\n"), EdgeListFormat::kPlain),
                  std::runtime_error);
  CHECK_THROWS_WITH_AS(
      load_graph(write_temp("rim_dup.tsv", "0\t1\n0\t1\n"), EdgeListFormat::kPlain),
      doctest::Contains("duplicate"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      load_graph(write_temp("rim_loop.tsv", "1\t1\n"), EdgeListFormat::kPlain),
      doctest::Contains("self-loop"), std::runtime_error);
}

TEST_CASE("plain format rejects a probability column and vice versa") {
  CHECK_THROWS_WITH_AS(
      load_graph(write_temp("rim_cols3.tsv", "0\t1\t0.5\n"), EdgeListFormat::kPlain),
      doctest::Contains("expected 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      load_graph(write_temp("rim_cols2.tsv", "0\t1\n"), EdgeListFormat::kWithProb),
      doctest::Contains("expected 3"), std::runtime_error);
}

TEST_CASE("parameter space files round-trip awkward doubles exactly") {
  ParameterSpace space;
  space.lower = {0.1 / 3.0, 0.0};
  space.upper = {2.0 / 3.0, 1.0 - 1e-16};
  std::string path = (std::filesystem::temp_directory_path() / "rim_space_rt.tsv").string();
  save_parameter_space(path, space);
  ParameterSpace loaded = load_parameter_space(path, 2);
  CHECK(loaded.lower == space.lower);
  CHECK(loaded.upper == space.upper);
}

TEST_CASE("load_graph skips comments and keeps file order as edge ids") {
  auto path = write_temp("rim_comments.tsv", "# header\n2\t0\n0\t1\n");
  LoadedGraph loaded = load_graph(path, EdgeListFormat::kPlain);
  CHECK(loaded.graph.m() == 2);
  CHECK(loaded.graph.source(0) == 2);
  CHECK(loaded.graph.target(1) == 1);
  CHECK_FALSE(loaded.theta.has_value());
}

TEST_CASE("graph round-trips through save and load") {
  auto [g, space] = gen_star_forest(2, 3, 0.2, 0.8);
  ParameterVector theta = ParameterVector::uniform(g.m(), 0.25);
  std::string path = (std::filesystem::temp_directory_path() / "rim_roundtrip.tsv").string();
  save_graph(path, g, &theta);
  LoadedGraph loaded = load_graph(path, EdgeListFormat::kWithProb);
  CHECK(loaded.graph.n() == g.n());
  REQUIRE(loaded.graph.m() == g.m());
  for (int e = 0; e < g.m(); ++e) {
    CHECK(loaded.graph.edges[e] == g.edges[e]);
    CHECK(loaded.theta->p[e] == theta.p[e]);
  }
  CHECK(loaded.graph.out == g.out);
}

TEST_CASE("parameter space round-trips and validates") {
  auto [g, space] = gen_star_forest(1, 2, 0.1, 0.9);
  std::string path = (std::filesystem::temp_directory_path() / "rim_space.tsv").string();
  save_parameter_space(path, space);
  ParameterSpace loaded = load_parameter_space(path, g.m());
  CHECK(loaded.lower == space.lower);
  CHECK(loaded.upper == space.upper);

  CHECK_THROWS_AS(load_parameter_space(write_temp("rim_space_bad.tsv", "0\t0.9\t0.1\n"), 1),
                  std::runtime_error);
  CHECK_THROWS_WITH_AS(
      load_parameter_space(write_temp("rim_space_missing.tsv", "0\t0.1\t0.9\n"), 2),
      doctest::Contains("missing"), std::runtime_error);
}

TEST_CASE("parameter space corners and containment") {
  ParameterSpace space = ParameterSpace::uniform(3, 0.2, 0.7);
  CHECK(space.theta_minus().p == std::vector<double>{0.2, 0.2, 0.2});
  CHECK(space.theta_plus().p == std::vector<double>{0.7, 0.7, 0.7});
  CHECK(space.contains(ParameterVector::uniform(3, 0.5)));
  CHECK_FALSE(space.contains(ParameterVector::uniform(3, 0.1)));
  CHECK_FALSE(space.is_point());
  CHECK(ParameterSpace::uniform(3, 0.4, 0.4).is_point());
}

TEST_CASE("weighted cascade probabilities") {
  // Target 1 has in-degree 4 counting duplicates: three distinct sources
  // plus one duplicate of (0,1).
  std::vector<std::pair<int, int>> raw = {{0, 1}, {0, 1}, {2, 1}, {3, 1}, {1, 2}};
  auto [g, theta] = weighted_cascade_probs(4, raw);
  CHECK(g.m() == 4);
  // (0,1): x=4, y=2 -> 1 - (3/4)^2
  CHECK(theta.p[0] == doctest::Approx(0.4375).epsilon(1e-12));
  // (2,1): x=4, y=1 -> 1 - (3/4)^1
  CHECK(theta.p[1] == doctest::Approx(0.25).epsilon(1e-12));
  // (1,2): x=1, y=1 -> 1
  CHECK(theta.p[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weighted cascade output lands in (0,1] and decreases with in-degree") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + static_cast<int>(rng.next_u64() % 6);
    std::vector<std::pair<int, int>> raw;
    int edges = 2 + static_cast<int>(rng.next_u64() % 20);
    for (int i = 0; i < edges; ++i) {
      int u = static_cast<int>(rng.next_u64() % n);
      int v = static_cast<int>(rng.next_u64() % n);
      if (u != v) raw.emplace_back(u, v);
    }
    if (raw.empty()) continue;
    auto [g, theta] = weighted_cascade_probs(n, raw);
    for (double p : theta.p) CHECK((p > 0.0 && p <= 1.0));
  }
  // Fixed multiplicity, growing in-degree: p falls.
  double prev = 1.0;
  for (int x = 1; x <= 6; ++x) {
    std::vector<std::pair<int, int>> raw;
    for (int s = 0; s < x; ++s) raw.emplace_back(s + 1, 0);
    auto [g, theta] = weighted_cascade_probs(x + 1, raw);
    CHECK(theta.p[0] <= prev);
    prev = theta.p[0];
  }
}

TEST_CASE("star forest generator") {
  auto [g, space] = gen_star_forest(2, 3, 0.2, 0.8);
  CHECK(g.n() == 16);
  CHECK(g.m() == 12);
  for (int e = 0; e < g.m(); ++e) {
    CHECK(space.lower[e] == 0.2);
    CHECK(space.upper[e] == 0.8);
  }
  // Centers have out-degree t, leaves none.
  for (int s = 0; s < 4; ++s) {
    int center = s * 4;
    CHECK(g.out[center].size() == 3);
    for (int j = 1; j <= 3; ++j) CHECK(g.out[center + j].empty());
  }

  auto [g1, point] = gen_star_forest(1, 1, 0.3, 0.3);
  CHECK(point.is_point());

  CHECK_THROWS_AS(gen_star_forest(0, 3, 0.1, 0.2), std::runtime_error);
  CHECK_THROWS_AS(gen_star_forest(1, 0, 0.1, 0.2), std::runtime_error);
}

TEST_CASE("two-cluster generator builds disconnected cliques") {
  auto [g, space] = gen_two_cluster_er(3, 0.6, 0.1, 42);
  CHECK(g.n() == 6);
  CHECK(g.m() == 12);  // two directed 3-cliques, 3*2 edges each
  for (int e = 0; e < g.m(); ++e) {
    CHECK(space.lower[e] == doctest::Approx(0.5));
    CHECK(space.upper[e] == doctest::Approx(0.7));
  }
  // No edge crosses clusters: reachability from any node stays within
  // half_size nodes.
  SeedSet one = SeedSet::of({0});
  auto edges = reachable_edges(g, one);
  CHECK(edges.size() == 6);

  auto [g_pt, space_pt] = gen_two_cluster_er(2, 0.5, 0.0, 7);
  CHECK(space_pt.is_point());
  CHECK_THROWS_AS(gen_two_cluster_er(1, 0.5, 0.1, 7), std::runtime_error);

  // Deterministic for a fixed seed.
  auto [g2, s2] = gen_two_cluster_er(3, 0.6, 0.1, 42);
  CHECK(g2.edges == g.edges);
}

TEST_CASE("seed sets canonicalize") {
  SeedSet s = SeedSet::of({3, 1, 3, 2});
  CHECK(s.nodes == std::vector<int>{1, 2, 3});
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(0));
  CHECK(s.with(0).nodes == std::vector<int>{0, 1, 2, 3});
  CHECK(s.with(2).size() == 3);
}

TEST_CASE("generator output spaces satisfy the interval invariants") {
  auto [g1, s1] = gen_star_forest(3, 2, 0.0, 1.0);
  s1.validate(g1.m());
  auto [g2, s2] = gen_two_cluster_er(4, 0.02, 0.05, 9);  // clamps at 0
  s2.validate(g2.m());
  CHECK(s2.lower[0] == 0.0);
}
