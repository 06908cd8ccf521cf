#include "rim/maximize.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace rim {

namespace {

struct Candidate {
  double gain;
  int node;
  int stamp;     // greedy round the gain was computed in
  int confirms;  // consecutive top confirmations in that round
};

// Max-heap on gain; ties resolve to the lowest node id.
struct CandidateOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  }
};

}  // namespace

int64_t binomial_capped(int n, int k, int64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  int64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

SeedSet greedy(const DirectedGraph& g, int k, SpreadEvaluator& evaluator) {
  if (k < 0 || k > g.n())
    throw std::runtime_error("greedy: k must be in [0, n]");
  SeedSet selected;
  if (k == 0) return selected;

  const int required_confirms = evaluator.is_exact() ? 1 : 2;
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> queue;
  std::vector<char> taken(g.n(), 0);
  // Sentinel gains force one evaluation of every candidate in round 1.
  for (int v = g.n() - 1; v >= 0; --v)
    queue.push({std::numeric_limits<double>::infinity(), v, 0, 0});

  for (int round = 1; round <= k; ++round) {
    while (true) {
      Candidate top = queue.top();
      if (taken[top.node]) {
        queue.pop();
        continue;
      }
      if (top.stamp == round && top.confirms >= required_confirms) {
        queue.pop();
        selected = selected.with(top.node);
        taken[top.node] = 1;
        break;
      }
      queue.pop();
      int confirms = top.stamp == round ? top.confirms + 1 : 1;
      uint64_t nonce = mix2(static_cast<uint64_t>(round), static_cast<uint64_t>(confirms));
      double gain = evaluator.marginal(selected, top.node, nonce);
      queue.push({gain, top.node, round, confirms});
    }
  }
  return selected;
}

ExactOptimum exact_optimal(const DirectedGraph& g, int k, const ParameterVector& theta) {
  if (k < 0 || k > g.n()) throw std::runtime_error("exact_optimal: k must be in [0, n]");
  if (binomial_capped(g.n(), k, kExactOptimalMaxSubsets) > kExactOptimalMaxSubsets)
    throw std::runtime_error("exact_optimal: C(n,k) exceeds enumeration guard of " +
                             std::to_string(kExactOptimalMaxSubsets));
  ExactOptimum best;
  if (k == 0) return best;

  // Lexicographic enumeration; strictly-greater keeps the first maximizer.
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    SeedSet s{pick};
    double value = exact_spread(g, theta, s);
    if (value > best.spread) {
      best.spread = value;
      best.seeds = s;
    }
    int i = k - 1;
    while (i >= 0 && pick[i] == g.n() - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace rim
