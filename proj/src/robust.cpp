#include "rim/robust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "rim/maximize.hpp"
#include "rim/rng.hpp"

namespace rim {

LuGreedyResult lugreedy(const DirectedGraph& g, int k, const ParameterSpace& space,
                        EvaluatorFactory& factory) {
  space.validate(g.m());
  LuGreedyResult result;
  {
    auto ev_minus = factory.make(g, space.theta_minus());
    result.s_minus_greedy = greedy(g, k, *ev_minus);
  }
  {
    auto ev_plus = factory.make(g, space.theta_plus());
    result.s_plus_greedy = greedy(g, k, *ev_plus);
  }
  // Score both candidates under theta- with a shared schedule so the
  // comparison is paired; ties keep the theta+ set.
  auto scorer = factory.make(g, space.theta_minus());
  double v_minus = scorer->spread(result.s_minus_greedy, 0);
  double v_plus = scorer->spread(result.s_plus_greedy, 0);
  result.s_lu = v_minus > v_plus ? result.s_minus_greedy : result.s_plus_greedy;
  return result;
}

GapRatioResult gap_ratio(const DirectedGraph& g, int k, const ParameterSpace& space,
                         const SeedSet& s_lu, const SeedSet& s_plus_greedy,
                         EvaluatorFactory& factory) {
  space.validate(g.m());
  if (k < 1) throw std::runtime_error("gap_ratio: k must be >= 1");
  if (s_lu.size() != k || s_plus_greedy.size() != k)
    throw std::runtime_error("gap_ratio: seed sets must have size k");
  GapRatioResult result;
  // Fresh, independent evaluators for numerator and denominator.
  result.numerator = factory.make(g, space.theta_minus())->estimate(s_lu, 0);
  result.denominator = factory.make(g, space.theta_plus())->estimate(s_plus_greedy, 0);
  result.alpha = result.numerator.mean / result.denominator.mean;
  return result;
}

// ---- Exact robust ratio ---------------------------------------------------

namespace {

// sigma at every corner of the box restricted to `edge_ids`, indexed by
// corner bits (bit j set -> edge_ids[j] at its upper end). Starts from the
// reachability counts of all 2^s live patterns, then folds one edge at a
// time: replacing the live-pattern bit with a corner bit is the standard
// multilinear-extension evaluation.
std::vector<double> corner_spread_table(const DirectedGraph& g, const ParameterSpace& space,
                                        const SeedSet& seeds,
                                        const std::vector<int>& edge_ids) {
  int s = static_cast<int>(edge_ids.size());
  std::vector<std::vector<std::pair<int, int>>> adj(g.n());
  for (int j = 0; j < s; ++j)
    adj[g.source(edge_ids[j])].emplace_back(j, g.target(edge_ids[j]));

  std::vector<double> table(size_t{1} << s);
  std::vector<char> visited(g.n(), 0);
  std::vector<int> queue;
  for (uint64_t mask = 0; mask < (1ull << s); ++mask) {
    queue.clear();
    for (int v : seeds.nodes) {
      if (!visited[v]) {
        visited[v] = 1;
        queue.push_back(v);
      }
    }
    size_t head = 0;
    while (head < queue.size()) {
      int v = queue[head++];
      for (auto [j, w] : adj[v]) {
        if ((mask >> j & 1) && !visited[w]) {
          visited[w] = 1;
          queue.push_back(w);
        }
      }
    }
    table[mask] = static_cast<double>(queue.size());
    for (int v : queue) visited[v] = 0;
  }

  for (int j = 0; j < s; ++j) {
    uint64_t bit = 1ull << j;
    double lo = space.lower[edge_ids[j]];
    double hi = space.upper[edge_ids[j]];
    for (uint64_t idx = 0; idx < (1ull << s); ++idx) {
      if (idx & bit) continue;
      double v0 = table[idx];
      double v1 = table[idx | bit];
      table[idx] = (1.0 - lo) * v0 + lo * v1;
      table[idx | bit] = (1.0 - hi) * v0 + hi * v1;
    }
  }
  return table;
}

}  // namespace

double robust_ratio_exact(const DirectedGraph& g, int k, const ParameterSpace& space,
                          const SeedSet& s) {
  space.validate(g.m());
  if (k < 1) throw std::runtime_error("robust_ratio_exact: k must be >= 1");
  if (s.size() != k) throw std::runtime_error("robust_ratio_exact: |S| must equal k");
  if (g.m() > kRobustRatioMaxEdges)
    throw std::runtime_error("robust_ratio_exact: m=" + std::to_string(g.m()) +
                             " exceeds corner-enumeration guard of " +
                             std::to_string(kRobustRatioMaxEdges));
  if (binomial_capped(g.n(), k, kRobustRatioMaxSubsets) > kRobustRatioMaxSubsets)
    throw std::runtime_error("robust_ratio_exact: C(n,k) exceeds subset guard of " +
                             std::to_string(kRobustRatioMaxSubsets));

  std::vector<int> edges_s = reachable_edges(g, s);
  std::vector<double> table_s = corner_spread_table(g, space, s, edges_s);
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    SeedSet t{pick};
    std::vector<int> edges_t = reachable_edges(g, t);
    std::vector<double> table_t = corner_spread_table(g, space, t, edges_t);

    bool disjoint = true;
    {
      size_t a = 0, b = 0;
      while (a < edges_s.size() && b < edges_t.size()) {
        if (edges_s[a] == edges_t[b]) { disjoint = false; break; }
        if (edges_s[a] < edges_t[b]) ++a; else ++b;
      }
    }
    if (disjoint) {
      double min_s = *std::min_element(table_s.begin(), table_s.end());
      double max_t = *std::max_element(table_t.begin(), table_t.end());
      best = std::min(best, min_s / max_t);
    } else {
      std::vector<int> joint = edges_s;
      joint.insert(joint.end(), edges_t.begin(), edges_t.end());
      std::sort(joint.begin(), joint.end());
      joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
      auto positions = [&](const std::vector<int>& ids) {
        std::vector<int> pos(ids.size());
        for (size_t j = 0; j < ids.size(); ++j)
          pos[j] = static_cast<int>(std::lower_bound(joint.begin(), joint.end(), ids[j]) -
                                    joint.begin());
        return pos;
      };
      std::vector<int> pos_s = positions(edges_s);
      std::vector<int> pos_t = positions(edges_t);
      for (uint64_t c = 0; c < (1ull << joint.size()); ++c) {
        uint64_t idx_s = 0, idx_t = 0;
        for (size_t j = 0; j < pos_s.size(); ++j) idx_s |= (c >> pos_s[j] & 1) << j;
        for (size_t j = 0; j < pos_t.size(); ++j) idx_t |= (c >> pos_t[j] & 1) << j;
        best = std::min(best, table_s[idx_s] / table_t[idx_t]);
      }
    }

    int i = k - 1;
    while (i >= 0 && pick[i] == g.n() - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

// ---- alpha-bar heuristics -------------------------------------------------

namespace {

// One IC cascade from `seeds` under theta; touch[e] counts cascades in
// which edge e was examined (at most once per cascade).
void cascade_touch(const DirectedGraph& g, const ParameterVector& theta,
                   const SeedSet& seeds, Rng& rng, std::vector<int64_t>& touch) {
  std::vector<char> active(g.n(), 0);
  std::vector<int> queue;
  for (int v : seeds.nodes) {
    active[v] = 1;
    queue.push_back(v);
  }
  size_t head = 0;
  while (head < queue.size()) {
    int v = queue[head++];
    for (int eid : g.out[v]) {
      ++touch[eid];
      int w = g.target(eid);
      if (rng.bernoulli(theta.p[eid]) && !active[w]) {
        active[w] = 1;
        queue.push_back(w);
      }
    }
  }
}

// Greedy on the graph with `removed` deleted (nodes and incident edges),
// mapped back to original ids.
SeedSet greedy_with_nodes_removed(const DirectedGraph& g, int k, const ParameterVector& theta,
                                  const SeedSet& removed, EvaluatorFactory& factory) {
  std::vector<int> to_sub(g.n(), -1);
  std::vector<int> to_full;
  for (int v = 0; v < g.n(); ++v) {
    if (!removed.contains(v)) {
      to_sub[v] = static_cast<int>(to_full.size());
      to_full.push_back(v);
    }
  }
  std::vector<std::pair<int, int>> sub_edges;
  std::vector<double> sub_probs;
  for (int e = 0; e < g.m(); ++e) {
    int u = g.source(e), v = g.target(e);
    if (to_sub[u] >= 0 && to_sub[v] >= 0) {
      sub_edges.emplace_back(to_sub[u], to_sub[v]);
      sub_probs.push_back(theta.p[e]);
    }
  }
  DirectedGraph sub = DirectedGraph::build(static_cast<int>(to_full.size()),
                                           std::move(sub_edges));
  int sub_k = std::min(k, sub.n());
  auto evaluator = factory.make(sub, ParameterVector{std::move(sub_probs)});
  SeedSet sub_seeds = greedy(sub, sub_k, *evaluator);
  std::vector<int> ids;
  for (int v : sub_seeds.nodes) ids.push_back(to_full[v]);
  return SeedSet::of(std::move(ids));
}

double bound_for_theta(const DirectedGraph& g, int k, const ParameterVector& theta,
                       const SeedSet& s_lu, EvaluatorFactory& factory) {
  SeedSet s_g;
  {
    auto evaluator = factory.make(g, theta);
    s_g = greedy(g, k, *evaluator);
  }
  auto scorer = factory.make(g, theta);
  double num = scorer->spread(s_lu, 0);
  double den = scorer->spread(s_g, 0);
  return num / den;
}

}  // namespace

AlphaBarResult alpha_bar(const DirectedGraph& g, int k, const ParameterSpace& space,
                         const SeedSet& s_lu, int num_cascades, uint64_t seed,
                         EvaluatorFactory& factory) {
  space.validate(g.m());
  if (s_lu.size() != k || k < 1)
    throw std::runtime_error("alpha_bar: S_lu must have size k >= 1");
  if (num_cascades < 1) throw std::runtime_error("alpha_bar: num_cascades must be >= 1");

  ParameterVector midpoint;
  midpoint.p.resize(g.m());
  for (int e = 0; e < g.m(); ++e) midpoint.p[e] = 0.5 * (space.lower[e] + space.upper[e]);

  SeedSet competitor = greedy_with_nodes_removed(g, k, midpoint, s_lu, factory);

  std::vector<int64_t> touch_lu(g.m(), 0), touch_comp(g.m(), 0);
  Rng rng(mix2(seed, 0xabau));
  for (int c = 0; c < num_cascades; ++c) cascade_touch(g, midpoint, s_lu, rng, touch_lu);
  if (!competitor.empty())
    for (int c = 0; c < num_cascades; ++c)
      cascade_touch(g, midpoint, competitor, rng, touch_comp);

  // H1: lower end where S_lu's cascades dominate, upper end elsewhere
  // (ties, including never-touched edges, favor the competitor).
  ParameterVector theta_h1;
  theta_h1.p.resize(g.m());
  for (int e = 0; e < g.m(); ++e)
    theta_h1.p[e] = touch_lu[e] > touch_comp[e] ? space.lower[e] : space.upper[e];

  // H2: lower end on edges touched in at least 10% of S_lu's cascades.
  ParameterVector theta_h2;
  theta_h2.p.resize(g.m());
  for (int e = 0; e < g.m(); ++e) {
    bool frequent = 10 * touch_lu[e] >= num_cascades;
    theta_h2.p[e] = frequent ? space.lower[e] : space.upper[e];
  }

  AlphaBarResult result;
  result.num_cascades = num_cascades;
  result.h1 = bound_for_theta(g, k, theta_h1, s_lu, factory);
  result.h2 = bound_for_theta(g, k, theta_h2, s_lu, factory);
  result.alpha_bar = std::min(result.h1, result.h2);
  return result;
}

// ---- Certificate ----------------------------------------------------------

std::string RobustCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["seed_set"] = seed_set.nodes;
  j["alpha"] = alpha;
  j["lower_bound"] = lower_bound;
  j["alpha_bar"] = alpha_bar;
  j["estimator"] = {
      {"num_sims", num_sims},
      {"seed", seed},
      {"alpha_numerator_std_error", alpha_numerator_std_error},
      {"alpha_denominator_std_error", alpha_denominator_std_error},
      {"alpha_bar_cascades", alpha_bar_cascades},
  };
  if (has_conservative_alpha) j["conservative_alpha"] = conservative_alpha;
  return j.dump(2);
}

RobustCertificate certify(const DirectedGraph& g, int k, const ParameterSpace& space,
                          const CertifyOptions& options) {
  std::unique_ptr<EvaluatorFactory> factory;
  if (options.exact)
    factory = std::make_unique<ExactEvaluatorFactory>();
  else
    factory = std::make_unique<MonteCarloEvaluatorFactory>(options.num_sims, options.seed,
                                                           options.threads);
  LuGreedyResult lu = lugreedy(g, k, space, *factory);
  GapRatioResult gap = gap_ratio(g, k, space, lu.s_lu, lu.s_plus_greedy, *factory);
  AlphaBarResult ab = alpha_bar(g, k, space, lu.s_lu, options.alpha_bar_cascades,
                                mix2(options.seed, 0xa1ba4u), *factory);

  RobustCertificate cert;
  cert.seed_set = lu.s_lu;
  cert.alpha = gap.alpha;
  cert.lower_bound = gap.alpha * kOneMinusInvE;
  cert.alpha_bar = ab.alpha_bar;
  cert.num_sims = options.exact ? 0 : options.num_sims;
  cert.seed = options.seed;
  cert.alpha_numerator_std_error = gap.numerator.std_error;
  cert.alpha_denominator_std_error = gap.denominator.std_error;
  cert.alpha_bar_cascades = options.alpha_bar_cascades;
  if (options.conservative_alpha && !options.exact) {
    double rel_num = gap.numerator.std_error / gap.numerator.mean;
    double rel_den = gap.denominator.std_error / gap.denominator.mean;
    double se = gap.alpha * std::sqrt(rel_num * rel_num + rel_den * rel_den);
    cert.has_conservative_alpha = true;
    cert.conservative_alpha = std::max(0.0, gap.alpha - 2.0 * se);
  }
  return cert;
}

}  // namespace rim
