#pragma once

#include <cstdint>
#include <string>

#include "rim/graph.hpp"
#include "rim/spread.hpp"

namespace rim {

inline constexpr int kRobustRatioMaxEdges = 12;
inline constexpr int64_t kRobustRatioMaxSubsets = 10000;

inline constexpr double kOneMinusInvE = 0.63212055882855767840;  // 1 - 1/e

struct LuGreedyResult {
  SeedSet s_lu;           // argmax of sigma_{theta-} over the two greedy sets
  SeedSet s_minus_greedy; // greedy at theta-
  SeedSet s_plus_greedy;  // greedy at theta+
};

// Lower-Upper Greedy: run greedy at both corner vectors and keep whichever
// set scores higher under theta-. Ties go to the theta+ greedy set.
LuGreedyResult lugreedy(const DirectedGraph& g, int k, const ParameterSpace& space,
                        EvaluatorFactory& factory);

struct GapRatioResult {
  double alpha = 0.0;
  SpreadEstimate numerator;    // sigma_{theta-}(S_lu)
  SpreadEstimate denominator;  // sigma_{theta+}(S^g_{theta+})
};

// alpha(Theta) = sigma_{theta-}(S_lu) / sigma_{theta+}(S^g_{theta+}).
// alpha * (1 - 1/e) lower-bounds the robust ratio of S_lu.
GapRatioResult gap_ratio(const DirectedGraph& g, int k, const ParameterSpace& space,
                         const SeedSet& s_lu, const SeedSet& s_plus_greedy,
                         EvaluatorFactory& factory);

// Exact robust ratio g(Theta,S) = min over size-k sets T and corners theta
// of sigma_theta(S)/sigma_theta(T). For a fixed (S,T) the ratio is a
// fractional-linear, hence monotone, function of each coordinate, so the
// box minimum sits at a corner; corners on edges unreachable from S and T
// cannot move the ratio and are skipped. Guards: m <= kRobustRatioMaxEdges
// and C(n,k) <= kRobustRatioMaxSubsets.
double robust_ratio_exact(const DirectedGraph& g, int k, const ParameterSpace& space,
                          const SeedSet& s);

struct AlphaBarResult {
  double alpha_bar = 0.0;  // min of the two heuristics
  double h1 = 0.0;
  double h2 = 0.0;
  int num_cascades = 0;
};

// Heuristic upper bound on g(Theta, S_lu): pick an adversarial corner
// vector, then report sigma_theta(S_lu)/sigma_theta(S^g_theta).
//   H1 contrasts cascade coverage of S_lu against a disjoint competitor
//   set (greedy on the graph with S_lu removed); edges hit more often from
//   S_lu drop to their lower end, everything else rises to the upper end
//   (ties favor the competitor). Cascades run under the interval midpoint.
//   H2 keeps the lower end on edges touched in at least 10% of S_lu's
//   cascades (per-cascade incidence).
AlphaBarResult alpha_bar(const DirectedGraph& g, int k, const ParameterSpace& space,
                         const SeedSet& s_lu, int num_cascades, uint64_t seed,
                         EvaluatorFactory& factory);

struct RobustCertificate {
  SeedSet seed_set;
  double alpha = 0.0;
  double lower_bound = 0.0;  // alpha * (1 - 1/e)
  double alpha_bar = 0.0;
  int64_t num_sims = 0;  // 0 for exact evaluation
  uint64_t seed = 0;
  double alpha_numerator_std_error = 0.0;
  double alpha_denominator_std_error = 0.0;
  int alpha_bar_cascades = 0;
  bool has_conservative_alpha = false;
  double conservative_alpha = 0.0;  // alpha - 2 * propagated std error

  std::string to_json() const;
};

struct CertifyOptions {
  int64_t num_sims = 10000;
  uint64_t seed = 1;
  int threads = 0;
  int alpha_bar_cascades = 200;
  bool exact = false;
  bool conservative_alpha = false;
};

RobustCertificate certify(const DirectedGraph& g, int k, const ParameterSpace& space,
                          const CertifyOptions& options);

}  // namespace rim
