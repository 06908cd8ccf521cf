#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rim/graph.hpp"
#include "rim/rng.hpp"

namespace rim {

class Rng;

// Edges kept after flipping one coin per edge.
struct LiveEdgeGraph {
  std::vector<uint8_t> live;  // indexed by edge id
};

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int64_t num_sims = 0;
};

// Reachable-edge cap for the exact enumerator: 2^20 live patterns.
inline constexpr int kExactSpreadMaxEdges = 20;

LiveEdgeGraph sample_live_edge(const DirectedGraph& g, const ParameterVector& theta,
                               Rng& rng);

// Closure over live edges; the result contains the seeds and is sorted.
std::vector<int> reachable_set(const DirectedGraph& g, const LiveEdgeGraph& live,
                               const SeedSet& seeds);

// Independent live-edge Monte Carlo. Simulation i draws its coins from
// mix2(seed, i), so the result is a deterministic function of
// (seed, num_sims) alone; `threads` only changes wall time (accumulators
// are integer sums combined in chunk order).
SpreadEstimate estimate_spread(const DirectedGraph& g, const ParameterVector& theta,
                               const SeedSet& seeds, int64_t num_sims, uint64_t seed,
                               int threads = 0);

// Exact sigma_theta(S) by enumerating live patterns over the edges
// reachable from S. Refuses when more than kExactSpreadMaxEdges edges are
// reachable.
double exact_spread(const DirectedGraph& g, const ParameterVector& theta,
                    const SeedSet& seeds);

// One lazily-sampled cascade; returns |R_L(S)| for the live-edge graph
// determined by sim_seed (see edge_live_draw).
int simulate_reach_count(const DirectedGraph& g, const ParameterVector& theta,
                         const std::vector<int>& seeds, uint64_t sim_seed);

// As above, but also sets bit v of `membership` for every reached node.
int simulate_reach_mask(const DirectedGraph& g, const ParameterVector& theta,
                        const std::vector<int>& seeds, uint64_t sim_seed,
                        uint64_t* membership);

// |R_L(base + {v})| - |R_L(base)| given the membership mask of R_L(base).
// Reached sets are closed under live-edge reachability, so the expansion
// from v stops at absorbed nodes.
int simulate_marginal_count(const DirectedGraph& g, const ParameterVector& theta, int v,
                            uint64_t sim_seed, const uint64_t* base_membership);

// ---- Evaluator abstraction ----------------------------------------------
//
// Greedy and the robust-ratio machinery evaluate sigma under many different
// theta; the evaluator binds (graph, theta, estimator config). `nonce`
// selects a common-random-numbers schedule: calls sharing a nonce share
// live-edge realizations, distinct nonces are independent.

class SpreadEvaluator {
 public:
  virtual ~SpreadEvaluator() = default;
  virtual SpreadEstimate estimate(const SeedSet& seeds, uint64_t nonce) = 0;
  virtual double marginal(const SeedSet& base, int v, uint64_t nonce);
  virtual bool is_exact() const = 0;

  double spread(const SeedSet& seeds, uint64_t nonce) { return estimate(seeds, nonce).mean; }
};

class ExactEvaluator final : public SpreadEvaluator {
 public:
  ExactEvaluator(const DirectedGraph& g, ParameterVector theta);
  SpreadEstimate estimate(const SeedSet& seeds, uint64_t nonce) override;
  double marginal(const SeedSet& base, int v, uint64_t nonce) override;
  bool is_exact() const override { return true; }

 private:
  const DirectedGraph& graph_;
  ParameterVector theta_;
  SeedSet cached_base_;
  double cached_value_ = -1.0;
  bool has_cache_ = false;
};

class MonteCarloEvaluator final : public SpreadEvaluator {
 public:
  MonteCarloEvaluator(const DirectedGraph& g, ParameterVector theta, int64_t num_sims,
                      uint64_t seed, int threads = 0);
  SpreadEstimate estimate(const SeedSet& seeds, uint64_t nonce) override;
  // Paired per-simulation difference |R(base+v)| - |R(base)| under shared
  // realizations; |R(base)| counts are cached per (nonce, base).
  double marginal(const SeedSet& base, int v, uint64_t nonce) override;
  bool is_exact() const override { return false; }

  int64_t num_sims() const { return num_sims_; }
  uint64_t seed() const { return seed_; }

 private:
  // Per-simulation membership masks of R(base), keyed on (nonce, base).
  struct BaseCache {
    uint64_t nonce = 0;
    SeedSet base;
    bool valid = false;
    int words_per_sim = 0;
    std::vector<uint64_t> membership;  // num_sims * words_per_sim
  };
  const BaseCache& base_cache(const SeedSet& base, uint64_t nonce);

  const DirectedGraph& graph_;
  ParameterVector theta_;
  int64_t num_sims_;
  uint64_t seed_;
  int threads_;
  BaseCache cache_;
};

// Binds estimator configuration; hands out one evaluator per parameter
// vector. Monte Carlo factories derive a fresh sub-seed per make() call,
// so successive evaluators are independent yet the whole run stays
// deterministic.
class EvaluatorFactory {
 public:
  virtual ~EvaluatorFactory() = default;
  virtual std::unique_ptr<SpreadEvaluator> make(const DirectedGraph& g,
                                                const ParameterVector& theta) = 0;
  virtual bool exact() const = 0;
};

class ExactEvaluatorFactory final : public EvaluatorFactory {
 public:
  std::unique_ptr<SpreadEvaluator> make(const DirectedGraph& g,
                                        const ParameterVector& theta) override;
  bool exact() const override { return true; }
};

class MonteCarloEvaluatorFactory final : public EvaluatorFactory {
 public:
  MonteCarloEvaluatorFactory(int64_t num_sims, uint64_t master_seed, int threads = 0)
      : num_sims_(num_sims), master_seed_(master_seed), threads_(threads) {}
  std::unique_ptr<SpreadEvaluator> make(const DirectedGraph& g,
                                        const ParameterVector& theta) override;
  bool exact() const override { return false; }

  int64_t num_sims() const { return num_sims_; }
  uint64_t master_seed() const { return master_seed_; }

 private:
  int64_t num_sims_;
  uint64_t master_seed_;
  int threads_;
  uint64_t counter_ = 0;
};

}  // namespace rim
