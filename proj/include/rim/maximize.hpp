#pragma once

#include <cstdint>

#include "rim/graph.hpp"
#include "rim/spread.hpp"

namespace rim {

inline constexpr int64_t kExactOptimalMaxSubsets = 1000000;

// Standard greedy seed selection: k rounds of argmax marginal gain, ties
// broken by lowest node id. Internally lazy (CELF); with a noisy evaluator
// the queue top must survive two fresh re-evaluations before being
// selected, which recovers plain greedy semantics in the exact limit.
SeedSet greedy(const DirectedGraph& g, int k, SpreadEvaluator& evaluator);

struct ExactOptimum {
  SeedSet seeds;
  double spread = 0.0;
};

// Globally optimal size-k seed set by exhaustive subset enumeration; ties
// broken lexicographically. Refuses when C(n,k) exceeds
// kExactOptimalMaxSubsets.
ExactOptimum exact_optimal(const DirectedGraph& g, int k, const ParameterVector& theta);

// C(n,k) with saturation at cap+1; helper for enumeration guards.
int64_t binomial_capped(int n, int k, int64_t cap);

}  // namespace rim
