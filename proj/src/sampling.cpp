#include "rim/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rim {

ObservationSet ObservationSet::empty(int m) {
  ObservationSet obs;
  obs.trials.assign(m, 0);
  obs.successes.assign(m, 0);
  return obs;
}

void ObservationSet::record(int eid, bool success) {
  trials[eid] += 1;
  if (success) successes[eid] += 1;
}

void ObservationSet::merge(const ObservationSet& other) {
  if (other.m() != m()) throw std::runtime_error("observation set: size mismatch");
  for (int e = 0; e < m(); ++e) {
    trials[e] += other.trials[e];
    successes[e] += other.successes[e];
  }
}

double ObservationSet::hat_p(int eid) const {
  if (trials[eid] <= 0) throw std::runtime_error("observation set: edge has no trials");
  return static_cast<double>(successes[eid]) / static_cast<double>(trials[eid]);
}

int64_t ObservationSet::total_trials() const {
  int64_t total = 0;
  for (int64_t t : trials) total += t;
  return total;
}

double ObservationSet::avg_samples_per_edge() const {
  if (m() == 0) return 0.0;
  return static_cast<double>(total_trials()) / static_cast<double>(m());
}

GroundTruthEnv::GroundTruthEnv(const DirectedGraph& g, ParameterVector theta, uint64_t seed)
    : graph_(g), theta_(std::move(theta)), rng_(mix2(seed, 0xe72u)) {
  theta_.validate(g.m());
  draw_counts_.assign(g.m(), 0);
}

bool GroundTruthEnv::draw(int eid) {
  if (eid < 0 || eid >= m()) throw std::runtime_error("env: edge id out of range");
  draw_counts_[eid] += 1;
  return rng_.bernoulli(theta_.p[eid]);
}

int64_t GroundTruthEnv::total_draws() const {
  int64_t total = 0;
  for (int64_t c : draw_counts_) total += c;
  return total;
}

ParameterSpace confidence_intervals(const ObservationSet& obs, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::runtime_error("confidence_intervals: gamma must be in (0,1)");
  int m = obs.m();
  ParameterSpace space;
  space.lower.resize(m);
  space.upper.resize(m);
  double log_term = std::log(2.0 * static_cast<double>(m) / gamma);
  for (int e = 0; e < m; ++e) {
    if (obs.trials[e] == 0) {
      space.lower[e] = 0.0;
      space.upper[e] = 1.0;
      continue;
    }
    double t = static_cast<double>(obs.trials[e]);
    double ph = obs.hat_p(e);
    double c = std::sqrt(3.0 / t * log_term);
    double mid = ph + c * c / 2.0;
    double half = c * std::sqrt(c * c / 4.0 + ph);
    space.lower[e] = std::min(1.0, std::max(0.0, mid - half));
    space.upper[e] = std::min(1.0, std::max(0.0, mid + half));
  }
  return space;
}

SamplingPlan plan_uniform(const DirectedGraph& g, int k, double epsilon, double gamma,
                          SamplingPlan::Setting setting, std::optional<double> p_prime) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::runtime_error("plan_uniform: epsilon must be in (0,1)");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::runtime_error("plan_uniform: gamma must be in (0,1)");
  if (k < 1) throw std::runtime_error("plan_uniform: k must be >= 1");
  double n = g.n(), m = g.m();
  double log_term = std::log(2.0 * m / gamma);

  SamplingPlan plan;
  plan.setting = setting;
  plan.epsilon = epsilon;
  plan.gamma = gamma;
  if (setting == SamplingPlan::Setting::kAdditive) {
    double t = 2.0 * m * m * n * n * log_term / (static_cast<double>(k) * k * epsilon * epsilon);
    plan.t_per_edge = static_cast<int64_t>(std::ceil(t));
    plan.delta_e = static_cast<double>(k) * epsilon / (m * n);
  } else {
    if (!p_prime || !(*p_prime > 0.0 && *p_prime <= 1.0))
      throw std::runtime_error("plan_uniform: multiplicative setting requires p' in (0,1]");
    plan.p_prime = *p_prime;
    double log_eps = std::log(1.0 / (1.0 - epsilon));
    double factor = 2.0 * n / log_eps + 1.0;
    plan.t_per_edge = static_cast<int64_t>(std::ceil(3.0 * log_term / *p_prime * factor * factor));
    plan.a = log_eps / (2.0 * n + log_eps);
  }
  return plan;
}

UsOneShotResult us_rim_oneshot(GroundTruthEnv& env, const DirectedGraph& g, int k,
                               const SamplingPlan& plan, EvaluatorFactory& factory) {
  if (env.m() != g.m()) throw std::runtime_error("us_rim: env/graph mismatch");
  if (plan.t_per_edge < 1) throw std::runtime_error("us_rim: plan has no samples");

  UsOneShotResult result;
  result.observations = ObservationSet::empty(g.m());
  result.theta_out.lower.resize(g.m());
  result.theta_out.upper.resize(g.m());
  for (int e = 0; e < g.m(); ++e) {
    for (int64_t i = 0; i < plan.t_per_edge; ++i)
      result.observations.record(e, env.draw(e));
    double ph = result.observations.hat_p(e);
    double lo, hi;
    if (plan.setting == SamplingPlan::Setting::kAdditive) {
      lo = ph - plan.delta_e;
      hi = ph + plan.delta_e;
    } else {
      lo = ph / (1.0 + plan.a);
      hi = ph / (1.0 - plan.a);
    }
    result.theta_out.lower[e] = std::min(1.0, std::max(0.0, lo));
    result.theta_out.upper[e] = std::min(1.0, std::max(0.0, hi));
  }
  result.s_out = lugreedy(g, k, result.theta_out, factory).s_lu;
  return result;
}

void cascade_with_observation(GroundTruthEnv& env, const DirectedGraph& g,
                              ObservationSet& obs, const SeedSet& seeds) {
  if (seeds.empty()) throw std::runtime_error("cascade: seed set must be nonempty");
  std::vector<char> active(g.n(), 0);
  std::vector<int> queue;
  for (int v : seeds.nodes) {
    if (v < 0 || v >= g.n()) throw std::runtime_error("cascade: seed node out of range");
    active[v] = 1;
    queue.push_back(v);
  }
  size_t head = 0;
  while (head < queue.size()) {
    int v = queue[head++];
    for (int eid : g.out[v]) {
      bool success = env.draw(eid);
      obs.record(eid, success);
      int w = g.target(eid);
      if (success && !active[w]) {
        active[w] = 1;
        queue.push_back(w);
      }
    }
  }
}

// ---- Iterative samplers ----------------------------------------------------

namespace {

struct IterationState {
  ParameterSpace space;
  LuGreedyResult lu;
  double alpha = 0.0;
  double alpha_bar = std::numeric_limits<double>::quiet_NaN();
};

IterationState evaluate_iteration(const DirectedGraph& g, int k, const ObservationSet& obs,
                                  double gamma, EvaluatorFactory& factory,
                                  const SamplerOptions& options, uint64_t ab_seed) {
  IterationState state;
  state.space = confidence_intervals(obs, gamma);
  state.lu = lugreedy(g, k, state.space, factory);
  state.alpha =
      gap_ratio(g, k, state.space, state.lu.s_lu, state.lu.s_plus_greedy, factory).alpha;
  if (options.compute_alpha_bar)
    state.alpha_bar = alpha_bar(g, k, state.space, state.lu.s_lu,
                                options.alpha_bar_cascades, ab_seed, factory)
                          .alpha_bar;
  return state;
}

void append_trace(SamplerResult& result, const IterationState& state, int iter,
                  const ObservationSet& obs, double wall_seconds,
                  const SamplerOptions& options) {
  TraceRow row;
  row.iter = iter;
  row.avg_samples_per_edge = obs.avg_samples_per_edge();
  row.alpha = state.alpha;
  row.alpha_bar = state.alpha_bar;
  row.seed_set = state.lu.s_lu;
  row.wall_seconds = wall_seconds;
  result.trace.push_back(std::move(row));
  if (options.keep_spaces) result.spaces.push_back(state.space);
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Shared loop driver. `sample` advances the observation set given the
// current LUGreedy set; `stable` implements an optional plateau stop.
template <typename SampleFn, typename StableFn>
SamplerResult run_sampler(GroundTruthEnv& env, const DirectedGraph& g, int k,
                          ObservationSet& obs, double gamma,
                          std::optional<double> kappa, int max_iters,
                          EvaluatorFactory& factory, const SamplerOptions& options,
                          SampleFn sample, StableFn stable) {
  if (env.m() != g.m() || obs.m() != g.m())
    throw std::runtime_error("sampler: graph/env/observation size mismatch");
  if (kappa && !(*kappa > 0.0 && *kappa < 1.0))
    throw std::runtime_error("sampler: kappa must be in (0,1)");
  if (max_iters < 0) throw std::runtime_error("sampler: max_iters must be >= 0");

  SamplerResult result;
  auto start = std::chrono::steady_clock::now();
  Rng ab_rng(mix2(options.aux_seed, 0xabcdu));

  double best_alpha = -1.0;
  ParameterSpace best_space;
  SeedSet best_seeds;
  std::vector<double> alphas;

  for (int iter = 0;; ++iter) {
    IterationState state =
        evaluate_iteration(g, k, obs, gamma, factory, options, ab_rng.fork());
    append_trace(result, state, iter, obs, elapsed_seconds(start), options);
    alphas.push_back(state.alpha);
    if (state.alpha > best_alpha) {
      best_alpha = state.alpha;
      best_space = state.space;
      best_seeds = state.lu.s_lu;
    }
    bool reached_kappa = kappa && state.alpha >= *kappa;
    if (reached_kappa || stable(alphas)) {
      result.theta_out = state.space;
      result.s_out = state.lu.s_lu;
      result.final_alpha = state.alpha;
      result.truncated = false;
      break;
    }
    if (iter >= max_iters) {
      result.theta_out = best_space;
      result.s_out = best_seeds;
      result.final_alpha = best_alpha;
      result.truncated = true;
      break;
    }
    sample(state.lu.s_lu);
  }
  result.observations = obs;
  return result;
}

bool never_stable(const std::vector<double>&) { return false; }

}  // namespace

SamplerResult us_rim_iterative(GroundTruthEnv& env, const DirectedGraph& g, int k,
                               int64_t tau1, double kappa, double gamma, int max_iters,
                               EvaluatorFactory& factory, const SamplerOptions& options,
                               std::optional<ObservationSet> m0) {
  if (tau1 < 1) throw std::runtime_error("us_rim_iterative: tau1 must be >= 1");
  ObservationSet obs = m0 ? std::move(*m0) : ObservationSet::empty(g.m());
  auto sample = [&](const SeedSet&) {
    for (int e = 0; e < g.m(); ++e)
      for (int64_t i = 0; i < tau1; ++i) obs.record(e, env.draw(e));
  };
  return run_sampler(env, g, k, obs, gamma, kappa, max_iters, factory, options, sample,
                     never_stable);
}

SamplerResult ics_rim(GroundTruthEnv& env, const DirectedGraph& g, int k,
                      ObservationSet m0, double kappa, double gamma, int64_t tau,
                      int max_iters, EvaluatorFactory& factory,
                      const SamplerOptions& options) {
  if (tau < 1) throw std::runtime_error("ics_rim: tau must be >= 1");
  ObservationSet obs = std::move(m0);
  auto sample = [&](const SeedSet& s_lu) {
    for (int64_t c = 0; c < tau; ++c) cascade_with_observation(env, g, obs, s_lu);
  };
  return run_sampler(env, g, k, obs, gamma, kappa, max_iters, factory, options, sample,
                     never_stable);
}

SamplerResult oes_rim(GroundTruthEnv& env, const DirectedGraph& g, int k,
                      ObservationSet m0, double gamma, int64_t tau_edges, int max_iters,
                      EvaluatorFactory& factory, const SamplerOptions& options) {
  if (tau_edges < 1) throw std::runtime_error("oes_rim: tau_edges must be >= 1");
  ObservationSet obs = std::move(m0);
  auto sample = [&](const SeedSet& s_lu) {
    for (int v : s_lu.nodes)
      for (int eid : g.out[v])
        for (int64_t i = 0; i < tau_edges; ++i) obs.record(eid, env.draw(eid));
  };
  auto stable = [](const std::vector<double>& alphas) {
    if (static_cast<int>(alphas.size()) <= kOesStabilityWindow) return false;
    size_t last = alphas.size() - 1;
    for (int j = 0; j < kOesStabilityWindow; ++j)
      if (alphas[last - j] - alphas[last - j - 1] >= kOesStabilityDelta) return false;
    return true;
  };
  return run_sampler(env, g, k, obs, gamma, std::nullopt, max_iters, factory, options,
                     sample, stable);
}

}  // namespace rim
