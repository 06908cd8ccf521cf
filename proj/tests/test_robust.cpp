#include "doctest.h"

#include <cmath>

#include "json.hpp"
#include "oracles.hpp"
#include "rim/maximize.hpp"
#include "rim/robust.hpp"

using namespace rim;

TEST_CASE("lugreedy on a point space reduces to plain greedy") {
  auto [g, unused] = gen_star_forest(1, 3, 0.0, 1.0);
  ParameterVector theta = ParameterVector::uniform(g.m(), 0.6);
  ParameterSpace point = ParameterSpace::point(theta);
  ExactEvaluatorFactory factory;
  LuGreedyResult lu = lugreedy(g, 1, point, factory);
  ExactEvaluator ev(g, theta);
  CHECK(lu.s_lu == greedy(g, 1, ev));
  CHECK(lu.s_minus_greedy == lu.s_plus_greedy);
}

TEST_CASE("lugreedy picks star centers on the tight fixture") {
  auto [g, space] = gen_star_forest(2, 3, 0.2, 0.8);
  ExactEvaluatorFactory factory;
  LuGreedyResult lu = lugreedy(g, 2, space, factory);
  CHECK(lu.s_lu.nodes == std::vector<int>{0, 4});
}

TEST_CASE("lugreedy tie at theta- goes to the theta+ greedy set") {
  // theta- is identically zero, so sigma_{theta-} equals k for every set.
  auto [g, unused] = gen_star_forest(1, 2, 0.0, 1.0);
  ParameterSpace space = ParameterSpace::uniform(g.m(), 0.0, 1.0);
  ExactEvaluatorFactory factory;
  LuGreedyResult lu = lugreedy(g, 1, space, factory);
  CHECK(lu.s_lu == lu.s_plus_greedy);
  CHECK(lu.s_lu.nodes == std::vector<int>{0});  // a star center, not node 1
}

TEST_CASE("gap ratio on the tight star fixture is (1+tl)/(1+tr)") {
  auto [g, space] = gen_star_forest(2, 3, 0.2, 0.8);
  ExactEvaluatorFactory factory;
  LuGreedyResult lu = lugreedy(g, 2, space, factory);
  GapRatioResult gap = gap_ratio(g, 2, space, lu.s_lu, lu.s_plus_greedy, factory);
  CHECK(gap.alpha == doctest::Approx(8.0 / 17.0).epsilon(1e-12));
  CHECK(gap.numerator.mean == doctest::Approx(3.2).epsilon(1e-12));
  CHECK(gap.denominator.mean == doctest::Approx(6.8).epsilon(1e-12));
}

TEST_CASE("gap ratio degenerate cases") {
  auto [g, unused] = gen_star_forest(1, 2, 0.0, 1.0);
  ParameterSpace point = ParameterSpace::point(ParameterVector::uniform(g.m(), 0.4));
  ExactEvaluatorFactory factory;
  LuGreedyResult lu = lugreedy(g, 1, point, factory);
  GapRatioResult gap = gap_ratio(g, 1, point, lu.s_lu, lu.s_plus_greedy, factory);
  CHECK(gap.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gap_ratio(g, 0, point, SeedSet{}, SeedSet{}, factory), std::runtime_error);

  DirectedGraph single = DirectedGraph::build(2, {{0, 1}});
  ParameterSpace full = ParameterSpace::uniform(1, 0.0, 1.0);
  LuGreedyResult lu2 = lugreedy(single, 1, full, factory);
  GapRatioResult gap2 = gap_ratio(single, 1, full, lu2.s_lu, lu2.s_plus_greedy, factory);
  CHECK(gap2.alpha == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("robust_ratio_exact closed forms") {
  // Point space: collapses to sigma(S)/sigma(S*).
  DirectedGraph single = DirectedGraph::build(2, {{0, 1}});
  ParameterSpace point = ParameterSpace::point(ParameterVector::uniform(1, 0.7));
  CHECK(robust_ratio_exact(single, 1, point, SeedSet::of({1})) ==
        doctest::Approx(1.0 / 1.7).epsilon(1e-12));

  // Seeding the sink of a fully unknown edge: worst corner is p=1.
  ParameterSpace full = ParameterSpace::uniform(1, 0.0, 1.0);
  CHECK(robust_ratio_exact(single, 1, full, SeedSet::of({1})) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // One star pair: adversary pins S's star to l and the rival star to r.
  auto [g, space] = gen_star_forest(1, 2, 0.2, 0.8);
  CHECK(robust_ratio_exact(g, 1, space, SeedSet::of({0})) ==
        doctest::Approx(1.4 / 2.6).epsilon(1e-12));
}

TEST_CASE("robust_ratio_exact enforces its guards") {
  auto [g, space] = gen_star_forest(4, 2, 0.1, 0.9);  // m = 16 > 12
  CHECK_THROWS_WITH_AS(robust_ratio_exact(g, 1, space, SeedSet::of({0})),
                       doctest::Contains("guard"), std::runtime_error);
  auto [g2, space2] = gen_star_forest(1, 2, 0.1, 0.9);
  CHECK_THROWS_AS(robust_ratio_exact(g2, 2, space2, SeedSet::of({0})), std::runtime_error);
}

TEST_CASE("corner table matches exact_spread at sampled corners") {
  Rng rng(40832);
  for (int trial = 0; trial < 20; ++trial) {
    DirectedGraph g = oracle::random_graph(rng, 6, 8);
    ParameterSpace space = oracle::random_space(rng, g.m());
    SeedSet s = oracle::random_seed_set(rng, g.n(), 1);
    // Evaluate the oracle with a point space at a random corner; it must
    // reproduce sigma at that corner exactly (k=1, T=S included).
    ParameterVector corner;
    corner.p.resize(g.m());
    for (int e = 0; e < g.m(); ++e)
      corner.p[e] = (rng.next_u64() & 1) ? space.upper[e] : space.lower[e];
    double direct = exact_spread(g, corner, s);
    double via_point = robust_ratio_exact(g, 1, ParameterSpace::point(corner), s) *
                       exact_optimal(g, 1, corner).spread;
    CHECK(via_point == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("robust ratio oracle agrees with direct full-corner enumeration") {
  // Independent route: every corner of the full box (including edges
  // unreachable from S and T) evaluated with the brute-force sigma.
  Rng rng(91119);
  for (int trial = 0; trial < 10; ++trial) {
    DirectedGraph g = oracle::random_graph(rng, 5, 6);
    ParameterSpace space = oracle::random_space(rng, g.m());
    int k = 1 + static_cast<int>(rng.next_u64() % 2);
    if (k > g.n()) k = 1;
    SeedSet s = oracle::random_seed_set(rng, g.n(), k);

    std::vector<SeedSet> subsets;
    oracle::enumerate_subsets(g.n(), k, [&](const std::vector<int>& pick) {
      subsets.push_back(SeedSet{pick});
    });
    double direct = std::numeric_limits<double>::infinity();
    ParameterVector corner;
    corner.p.resize(g.m());
    for (uint64_t c = 0; c < (1ull << g.m()); ++c) {
      for (int e = 0; e < g.m(); ++e)
        corner.p[e] = (c >> e & 1) ? space.upper[e] : space.lower[e];
      double num = oracle::sigma_bruteforce(g, corner, s);
      double den = 0.0;
      for (const auto& t : subsets) den = std::max(den, oracle::sigma_bruteforce(g, corner, t));
      direct = std::min(direct, num / den);
    }
    CHECK(robust_ratio_exact(g, k, space, s) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("corner reduction agrees with dense-grid minimization") {
  Rng rng(86021);
  for (int trial = 0; trial < 3; ++trial) {
    DirectedGraph g = oracle::random_graph(rng, 5, 4);
    ParameterSpace space = oracle::random_space(rng, g.m(), 0.3);
    SeedSet s = oracle::random_seed_set(rng, g.n(), 1);
    double corner_min = robust_ratio_exact(g, 1, space, s);
    double grid_min = oracle::robust_ratio_grid(g, 1, space, s, 0.05);
    CHECK(std::abs(corner_min - grid_min) <= 1e-6);
  }
}

TEST_CASE("no seed set beats LUGreedy's robust ratio on the tight fixture") {
  // Disjoint identical stars with one shared interval: the best possible
  // robust ratio over all size-k sets equals the gap ratio, and LUGreedy
  // attains it.
  auto [g, space] = gen_star_forest(2, 2, 0.2, 0.8);
  ExactEvaluatorFactory factory;
  LuGreedyResult lu = lugreedy(g, 2, space, factory);
  double alpha = gap_ratio(g, 2, space, lu.s_lu, lu.s_plus_greedy, factory).alpha;
  double expected = (1.0 + 2.0 * 0.2) / (1.0 + 2.0 * 0.8);
  CHECK(alpha == doctest::Approx(expected).epsilon(1e-12));

  double best = 0.0;
  SeedSet best_set;
  oracle::enumerate_subsets(g.n(), 2, [&](const std::vector<int>& pick) {
    double value = robust_ratio_exact(g, 2, space, SeedSet{pick});
    if (value > best) {
      best = value;
      best_set = SeedSet{pick};
    }
  });
  CHECK(best == doctest::Approx(expected).epsilon(1e-9));
  CHECK(robust_ratio_exact(g, 2, space, lu.s_lu) == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("robust ratio never rises as the box widens") {
  Rng rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    DirectedGraph g = oracle::random_graph(rng, 6, 8);
    ParameterSpace inner = oracle::random_space(rng, g.m(), 0.4);
    ParameterSpace outer = inner;
    for (int e = 0; e < g.m(); ++e) {
      outer.lower[e] = std::max(0.0, inner.lower[e] - 0.2 * rng.next_unit());
      outer.upper[e] = std::min(1.0, inner.upper[e] + 0.2 * rng.next_unit());
    }
    SeedSet s = oracle::random_seed_set(rng, g.n(), 1);
    CHECK(robust_ratio_exact(g, 1, outer, s) <=
          robust_ratio_exact(g, 1, inner, s) + 1e-12);
  }
}

TEST_CASE("alpha_bar is exactly 1 on a point space with exact evaluation") {
  auto [g, unused] = gen_star_forest(1, 3, 0.0, 1.0);
  ParameterSpace point = ParameterSpace::point(ParameterVector::uniform(g.m(), 0.5));
  ExactEvaluatorFactory factory;
  LuGreedyResult lu = lugreedy(g, 1, point, factory);
  AlphaBarResult ab = alpha_bar(g, 1, point, lu.s_lu, 50, 7, factory);
  CHECK(ab.alpha_bar == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("alpha_bar is tight on the star fixture") {
  auto [g, space] = gen_star_forest(2, 3, 0.2, 0.8);
  ExactEvaluatorFactory factory;
  LuGreedyResult lu = lugreedy(g, 2, space, factory);
  AlphaBarResult ab = alpha_bar(g, 2, space, lu.s_lu, 100, 11, factory);
  // Both heuristics pin S_lu's stars at l and the rivals at r, giving
  // exactly (1+3*0.2)/(1+3*0.8).
  CHECK(ab.alpha_bar == doctest::Approx(8.0 / 17.0).epsilon(1e-12));
  CHECK(ab.h1 == doctest::Approx(8.0 / 17.0).epsilon(1e-12));
  CHECK(ab.h2 == doctest::Approx(8.0 / 17.0).epsilon(1e-12));
}

TEST_CASE("sandwich: alpha(1-1/e) <= g <= alpha_bar on random instances") {
  Rng rng(424242);
  ExactEvaluatorFactory factory;
  for (int trial = 0; trial < 25; ++trial) {
    DirectedGraph g = oracle::random_graph(rng, 6, 8);
    ParameterSpace space = oracle::random_space(rng, g.m());
    int k = 1 + static_cast<int>(rng.next_u64() % 2);
    if (k > g.n()) k = 1;
    LuGreedyResult lu = lugreedy(g, k, space, factory);
    double alpha = gap_ratio(g, k, space, lu.s_lu, lu.s_plus_greedy, factory).alpha;
    double ratio = robust_ratio_exact(g, k, space, lu.s_lu);
    double upper = alpha_bar(g, k, space, lu.s_lu, 60, rng.next_u64(), factory).alpha_bar;
    CHECK(alpha * kOneMinusInvE <= ratio + 1e-9);
    CHECK(ratio <= upper + 1e-9);
  }
}

TEST_CASE("certificate serializes its fields") {
  auto [g, space] = gen_star_forest(2, 3, 0.2, 0.8);
  CertifyOptions options;
  options.exact = true;
  options.alpha_bar_cascades = 50;
  options.seed = 3;
  RobustCertificate cert = certify(g, 2, space, options);
  CHECK(cert.alpha == doctest::Approx(8.0 / 17.0).epsilon(1e-12));
  CHECK(cert.lower_bound == doctest::Approx(cert.alpha * kOneMinusInvE).epsilon(1e-12));
  CHECK(cert.alpha_bar >= cert.lower_bound);

  auto parsed = nlohmann::json::parse(cert.to_json());
  CHECK(parsed["seed_set"].get<std::vector<int>>() == cert.seed_set.nodes);
  CHECK(parsed["alpha"].get<double>() == doctest::Approx(cert.alpha));
  CHECK(parsed["lower_bound"].get<double>() == doctest::Approx(cert.lower_bound));
  CHECK(parsed["alpha_bar"].get<double>() == doctest::Approx(cert.alpha_bar));
  CHECK(parsed["estimator"]["num_sims"].get<int64_t>() == 0);
  CHECK(parsed["estimator"]["seed"].get<uint64_t>() == 3);
}

TEST_CASE("certificate with Monte Carlo estimation reports noise metadata") {
  auto [g, space] = gen_star_forest(2, 3, 0.2, 0.8);
  CertifyOptions options;
  options.num_sims = 4000;
  options.seed = 17;
  options.conservative_alpha = true;
  RobustCertificate cert = certify(g, 2, space, options);
  CHECK(cert.alpha == doctest::Approx(8.0 / 17.0).epsilon(0.05));
  CHECK(cert.alpha_numerator_std_error > 0.0);
  CHECK(cert.has_conservative_alpha);
  CHECK(cert.conservative_alpha < cert.alpha);
  CHECK(cert.num_sims == 4000);
}
