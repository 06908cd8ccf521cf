#include "rim/spread.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "rim/rng.hpp"

namespace rim {

namespace {

int hardware_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

LiveEdgeGraph sample_live_edge(const DirectedGraph& g, const ParameterVector& theta,
                               Rng& rng) {
  theta.validate(g.m());
  LiveEdgeGraph live;
  live.live.resize(g.m());
  for (int e = 0; e < g.m(); ++e) live.live[e] = rng.bernoulli(theta.p[e]) ? 1 : 0;
  return live;
}

std::vector<int> reachable_set(const DirectedGraph& g, const LiveEdgeGraph& live,
                               const SeedSet& seeds) {
  if (static_cast<int>(live.live.size()) != g.m())
    throw std::runtime_error("live-edge mask size mismatch");
  std::vector<char> visited(g.n(), 0);
  std::vector<int> stack;
  for (int v : seeds.nodes) {
    if (v < 0 || v >= g.n()) throw std::runtime_error("seed node out of range");
    if (!visited[v]) {
      visited[v] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int eid : g.out[v]) {
      if (!live.live[eid]) continue;
      int w = g.target(eid);
      if (!visited[w]) {
        visited[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::vector<int> result;
  for (int v = 0; v < g.n(); ++v)
    if (visited[v]) result.push_back(v);
  return result;
}

namespace {

struct SimScratch {
  std::vector<int> visit_epoch;
  std::vector<int> queue;
  int epoch = 0;

  void begin(int n) {
    if (static_cast<int>(visit_epoch.size()) < n) visit_epoch.assign(n, 0);
    if (++epoch == 0) {  // wrapped
      std::fill(visit_epoch.begin(), visit_epoch.end(), 0);
      epoch = 1;
    }
    queue.clear();
  }
  bool mark(int v) {
    if (visit_epoch[v] == epoch) return false;
    visit_epoch[v] = epoch;
    queue.push_back(v);
    return true;
  }
};

thread_local SimScratch sim_scratch;

}  // namespace

int simulate_reach_count(const DirectedGraph& g, const ParameterVector& theta,
                         const std::vector<int>& seeds, uint64_t sim_seed) {
  return simulate_reach_mask(g, theta, seeds, sim_seed, nullptr);
}

int simulate_reach_mask(const DirectedGraph& g, const ParameterVector& theta,
                        const std::vector<int>& seeds, uint64_t sim_seed,
                        uint64_t* membership) {
  SimScratch& scratch = sim_scratch;
  scratch.begin(g.n());
  for (int v : seeds) scratch.mark(v);
  size_t head = 0;
  while (head < scratch.queue.size()) {
    int v = scratch.queue[head++];
    for (int eid : g.out[v]) {
      int w = g.target(eid);
      if (scratch.visit_epoch[w] != scratch.epoch &&
          edge_live_draw(sim_seed, eid, theta.p[eid]))
        scratch.mark(w);
    }
  }
  if (membership)
    for (int v : scratch.queue) membership[v >> 6] |= 1ull << (v & 63);
  return static_cast<int>(scratch.queue.size());
}

int simulate_marginal_count(const DirectedGraph& g, const ParameterVector& theta, int v,
                            uint64_t sim_seed, const uint64_t* base_membership) {
  auto absorbed = [&](int w) {
    return (base_membership[w >> 6] >> (w & 63)) & 1ull;
  };
  if (absorbed(v)) return 0;
  SimScratch& scratch = sim_scratch;
  scratch.begin(g.n());
  scratch.mark(v);
  size_t head = 0;
  while (head < scratch.queue.size()) {
    int u = scratch.queue[head++];
    for (int eid : g.out[u]) {
      int w = g.target(eid);
      if (scratch.visit_epoch[w] != scratch.epoch && !absorbed(w) &&
          edge_live_draw(sim_seed, eid, theta.p[eid]))
        scratch.mark(w);
    }
  }
  return static_cast<int>(scratch.queue.size());
}

SpreadEstimate estimate_spread(const DirectedGraph& g, const ParameterVector& theta,
                               const SeedSet& seeds, int64_t num_sims, uint64_t seed,
                               int threads) {
  theta.validate(g.m());
  for (int v : seeds.nodes)
    if (v < 0 || v >= g.n()) throw std::runtime_error("seed node out of range");
  if (num_sims < 1) throw std::runtime_error("estimate_spread: num_sims must be >= 1");
  if (threads <= 0) threads = hardware_threads();
  threads = static_cast<int>(std::min<int64_t>(threads, num_sims));

  std::vector<int64_t> sums(threads, 0), sq_sums(threads, 0);
  auto worker = [&](int t) {
    int64_t lo = num_sims * t / threads;
    int64_t hi = num_sims * (t + 1) / threads;
    int64_t s = 0, sq = 0;
    for (int64_t i = lo; i < hi; ++i) {
      int64_t c = simulate_reach_count(g, theta, seeds.nodes,
                                       mix2(seed, static_cast<uint64_t>(i)));
      s += c;
      sq += c * c;
    }
    sums[t] = s;
    sq_sums[t] = sq;
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  int64_t total = 0, total_sq = 0;
  for (int t = 0; t < threads; ++t) {
    total += sums[t];
    total_sq += sq_sums[t];
  }
  SpreadEstimate est;
  est.num_sims = num_sims;
  est.mean = static_cast<double>(total) / static_cast<double>(num_sims);
  if (num_sims > 1) {
    double var = (static_cast<double>(total_sq) -
                  static_cast<double>(num_sims) * est.mean * est.mean) /
                 static_cast<double>(num_sims - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(num_sims));
  }
  return est;
}

double exact_spread(const DirectedGraph& g, const ParameterVector& theta,
                    const SeedSet& seeds) {
  theta.validate(g.m());
  if (seeds.empty()) return 0.0;
  for (int v : seeds.nodes)
    if (v < 0 || v >= g.n()) throw std::runtime_error("seed node out of range");

  std::vector<int> sub = reachable_edges(g, seeds);
  int s = static_cast<int>(sub.size());
  if (s > kExactSpreadMaxEdges)
    throw std::runtime_error("exact_spread: " + std::to_string(s) +
                             " edges reachable from the seed set, enumeration guard is " +
                             std::to_string(kExactSpreadMaxEdges));

  // Local adjacency over the reachable sub-edges.
  std::vector<std::vector<std::pair<int, int>>> adj(g.n());  // node -> (sub idx, target)
  for (int j = 0; j < s; ++j) adj[g.source(sub[j])].emplace_back(j, g.target(sub[j]));

  std::vector<char> visited(g.n(), 0);
  std::vector<int> queue;
  double total = 0.0;
  for (uint64_t mask = 0; mask < (1ull << s); ++mask) {
    double pr = 1.0;
    for (int j = 0; j < s; ++j) {
      double p = theta.p[sub[j]];
      pr *= (mask >> j & 1) ? p : 1.0 - p;
      if (pr == 0.0) break;
    }
    if (pr == 0.0) continue;

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
    total += pr * static_cast<double>(queue.size());
    for (int v : queue) visited[v] = 0;
  }
  return total;
}

// ---- Evaluators ----------------------------------------------------------

double SpreadEvaluator::marginal(const SeedSet& base, int v, uint64_t nonce) {
  return estimate(base.with(v), nonce).mean - estimate(base, nonce).mean;
}

ExactEvaluator::ExactEvaluator(const DirectedGraph& g, ParameterVector theta)
    : graph_(g), theta_(std::move(theta)) {
  theta_.validate(g.m());
}

SpreadEstimate ExactEvaluator::estimate(const SeedSet& seeds, uint64_t) {
  return {exact_spread(graph_, theta_, seeds), 0.0, 1};
}

double ExactEvaluator::marginal(const SeedSet& base, int v, uint64_t) {
  if (!has_cache_ || !(cached_base_ == base)) {
    cached_base_ = base;
    cached_value_ = exact_spread(graph_, theta_, base);
    has_cache_ = true;
  }
  return exact_spread(graph_, theta_, base.with(v)) - cached_value_;
}

MonteCarloEvaluator::MonteCarloEvaluator(const DirectedGraph& g, ParameterVector theta,
                                         int64_t num_sims, uint64_t seed, int threads)
    : graph_(g), theta_(std::move(theta)), num_sims_(num_sims), seed_(seed),
      threads_(threads) {
  theta_.validate(g.m());
  if (num_sims_ < 1) throw std::runtime_error("evaluator: num_sims must be >= 1");
}

SpreadEstimate MonteCarloEvaluator::estimate(const SeedSet& seeds, uint64_t nonce) {
  return estimate_spread(graph_, theta_, seeds, num_sims_, mix2(seed_, nonce), threads_);
}

const MonteCarloEvaluator::BaseCache& MonteCarloEvaluator::base_cache(const SeedSet& base,
                                                                      uint64_t nonce) {
  if (cache_.valid && cache_.nonce == nonce && cache_.base == base) return cache_;
  cache_.valid = false;
  cache_.nonce = nonce;
  cache_.base = base;
  cache_.words_per_sim = (graph_.n() + 63) / 64;
  cache_.membership.assign(static_cast<size_t>(num_sims_) * cache_.words_per_sim, 0);
  uint64_t schedule = mix2(seed_, nonce);
  if (!base.empty()) {
    int threads = threads_ <= 0 ? hardware_threads() : threads_;
    threads = static_cast<int>(std::min<int64_t>(threads, num_sims_));
    auto worker = [&](int t) {
      for (int64_t i = num_sims_ * t / threads; i < num_sims_ * (t + 1) / threads; ++i)
        simulate_reach_mask(graph_, theta_, base.nodes,
                            mix2(schedule, static_cast<uint64_t>(i)),
                            cache_.membership.data() + i * cache_.words_per_sim);
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }
  }
  cache_.valid = true;
  return cache_;
}

double MonteCarloEvaluator::marginal(const SeedSet& base, int v, uint64_t nonce) {
  const BaseCache& cache = base_cache(base, nonce);
  uint64_t schedule = mix2(seed_, nonce);
  int threads = threads_ <= 0 ? hardware_threads() : threads_;
  threads = static_cast<int>(std::min<int64_t>(threads, num_sims_));

  std::vector<int64_t> deltas(threads, 0);
  auto worker = [&](int t) {
    int64_t lo = num_sims_ * t / threads;
    int64_t hi = num_sims_ * (t + 1) / threads;
    int64_t d = 0;
    for (int64_t i = lo; i < hi; ++i)
      d += simulate_marginal_count(graph_, theta_, v,
                                   mix2(schedule, static_cast<uint64_t>(i)),
                                   cache.membership.data() + i * cache.words_per_sim);
    deltas[t] = d;
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  int64_t total = 0;
  for (int64_t d : deltas) total += d;
  return static_cast<double>(total) / static_cast<double>(num_sims_);
}

std::unique_ptr<SpreadEvaluator> ExactEvaluatorFactory::make(const DirectedGraph& g,
                                                             const ParameterVector& theta) {
  return std::make_unique<ExactEvaluator>(g, theta);
}

std::unique_ptr<SpreadEvaluator> MonteCarloEvaluatorFactory::make(
    const DirectedGraph& g, const ParameterVector& theta) {
  uint64_t sub_seed = mix2(master_seed_, ++counter_);
  return std::make_unique<MonteCarloEvaluator>(g, theta, num_sims_, sub_seed, threads_);
}

}  // namespace rim
