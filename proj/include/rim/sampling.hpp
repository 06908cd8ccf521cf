#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rim/graph.hpp"
#include "rim/robust.hpp"
#include "rim/spread.hpp"

namespace rim {

// Per-edge Bernoulli trial tallies; the sufficient statistics behind every
// confidence interval.
struct ObservationSet {
  std::vector<int64_t> trials;
  std::vector<int64_t> successes;

  static ObservationSet empty(int m);
  int m() const { return static_cast<int>(trials.size()); }
  void record(int eid, bool success);
  void merge(const ObservationSet& other);  // componentwise addition
  double hat_p(int eid) const;              // requires trials[eid] > 0
  int64_t total_trials() const;
  double avg_samples_per_edge() const;
};

// Hidden ground-truth parameter vector, readable only through Bernoulli
// draws. The vector itself is for the evaluation harness, not for
// algorithms.
class GroundTruthEnv {
 public:
  GroundTruthEnv(const DirectedGraph& g, ParameterVector theta, uint64_t seed);

  bool draw(int eid);
  int64_t draws(int eid) const { return draw_counts_[eid]; }
  int64_t total_draws() const;
  int m() const { return theta_.m(); }
  const DirectedGraph& graph() const { return graph_; }

  // Evaluation-harness access; algorithms must not read this.
  const ParameterVector& hidden_theta() const { return theta_; }

 private:
  const DirectedGraph& graph_;
  ParameterVector theta_;
  Rng rng_;
  std::vector<int64_t> draw_counts_;
};

// Combined additive/multiplicative Chernoff intervals:
//   c_e = sqrt((3/t_e) ln(2m/gamma)),
//   endpoints p_e + c_e^2/2 -+ c_e * sqrt(c_e^2/4 + p_e),
// intersected with [0,1]; unsampled edges get [0,1]. Holds jointly for all
// edges with probability at least 1-gamma.
ParameterSpace confidence_intervals(const ObservationSet& obs, double gamma);

struct SamplingPlan {
  enum class Setting { kAdditive, kMultiplicative };

  Setting setting = Setting::kAdditive;
  double epsilon = 0.0;
  double gamma = 0.0;
  double p_prime = 0.0;    // multiplicative only: lower bound on min_e p_e
  int64_t t_per_edge = 0;  // ceil of the sample-count formula
  double delta_e = 0.0;    // additive half-width k*eps/(m*n)
  double a = 0.0;          // multiplicative margin ln(1/(1-eps)) / (2n + ln(1/(1-eps)))
};

// Uniform-sampling budgets guaranteeing g(Theta_out, S_out) >=
// (1-1/e)(1-eps) with coverage 1-gamma:
//   additive:        t = 2 m^2 n^2 ln(2m/gamma) / (k^2 eps^2)
//   multiplicative:  t = (3 ln(2m/gamma)/p') (2n/ln(1/(1-eps)) + 1)^2
// The multiplicative interval is [phat/(1+a), phat/(1-a)]; the per-edge
// half-width printed in some statements of the multiplicative bound does
// not match its derivation, so the derivation's construction is used (the
// harness echoes this convention into run metadata).
SamplingPlan plan_uniform(const DirectedGraph& g, int k, double epsilon, double gamma,
                          SamplingPlan::Setting setting,
                          std::optional<double> p_prime = std::nullopt);

struct UsOneShotResult {
  ParameterSpace theta_out;
  SeedSet s_out;
  ObservationSet observations;
};

// Draw t samples per edge, build Theta_out around the empirical means, run
// LUGreedy.
UsOneShotResult us_rim_oneshot(GroundTruthEnv& env, const DirectedGraph& g, int k,
                               const SamplingPlan& plan, EvaluatorFactory& factory);

struct TraceRow {
  int iter = 0;
  double avg_samples_per_edge = 0.0;
  double alpha = 0.0;
  double alpha_bar = 0.0;  // NaN when not computed
  SeedSet seed_set;
  double wall_seconds = 0.0;
};

struct SamplerOptions {
  bool compute_alpha_bar = false;
  int alpha_bar_cascades = 200;
  uint64_t aux_seed = 0x5eed;  // drives alpha-bar cascades
  bool keep_spaces = false;    // retain per-iteration parameter spaces
};

struct SamplerResult {
  ParameterSpace theta_out;
  SeedSet s_out;
  double final_alpha = 0.0;
  bool truncated = false;  // max_iters exhausted; best-so-far returned
  std::vector<TraceRow> trace;
  std::vector<ParameterSpace> spaces;  // only with keep_spaces
  ObservationSet observations;
};

// Iterative uniform sampling: each iteration samples every edge tau1
// times, rebuilds the confidence intervals, and re-runs LUGreedy; stops
// once alpha reaches kappa. m0 pre-seeds the observation set (for aligned
// comparisons against the adaptive samplers).
SamplerResult us_rim_iterative(GroundTruthEnv& env, const DirectedGraph& g, int k,
                               int64_t tau1, double kappa, double gamma, int max_iters,
                               EvaluatorFactory& factory, const SamplerOptions& options = {},
                               std::optional<ObservationSet> m0 = std::nullopt);

// One IC cascade from `seeds` under the hidden theta; every out-edge of an
// activated node records exactly one Bernoulli trial (a node activates at
// most once per cascade).
void cascade_with_observation(GroundTruthEnv& env, const DirectedGraph& g,
                              ObservationSet& obs, const SeedSet& seeds);

// Adaptive information-cascade sampling: per iteration, tau cascades from
// the current LUGreedy set feed the observation set; stops once alpha
// reaches kappa and returns the qualifying iteration's (Theta, S).
SamplerResult ics_rim(GroundTruthEnv& env, const DirectedGraph& g, int k,
                      ObservationSet m0, double kappa, double gamma, int64_t tau,
                      int max_iters, EvaluatorFactory& factory,
                      const SamplerOptions& options = {});

// Baseline: per iteration, samples every out-edge of the current LUGreedy
// set tau_edges times. Stops when alpha is stable (three consecutive
// improvements below kOesStabilityDelta) or at max_iters.
SamplerResult oes_rim(GroundTruthEnv& env, const DirectedGraph& g, int k,
                      ObservationSet m0, double gamma, int64_t tau_edges, int max_iters,
                      EvaluatorFactory& factory, const SamplerOptions& options = {});

inline constexpr double kOesStabilityDelta = 0.005;
inline constexpr int kOesStabilityWindow = 3;

}  // namespace rim
