#include "rim/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "json.hpp"

#include "rim/robust.hpp"

namespace rim {

std::pair<DirectedGraph, ParameterVector> gen_wc_random(int n, int raw_edges,
                                                        uint64_t seed) {
  if (n < 2 || raw_edges < 1) throw std::runtime_error("gen_wc_random: degenerate size");
  Rng rng(mix2(seed, 0x3c9u));
  std::vector<std::pair<int, int>> raw;
  raw.reserve(raw_edges);
  while (static_cast<int>(raw.size()) < raw_edges) {
    int u = static_cast<int>(rng.next_u64() % static_cast<uint64_t>(n));
    int v = static_cast<int>(rng.next_u64() % static_cast<uint64_t>(n));
    if (u != v) raw.emplace_back(u, v);
  }
  return weighted_cascade_probs(n, raw);
}

double default_gamma(const DirectedGraph& g) {
  return 1.0 / std::sqrt(static_cast<double>(g.m()));
}

std::vector<WidthSweepRow> width_sweep(const DirectedGraph& g,
                                       const ParameterVector& theta_truth,
                                       const WidthSweepConfig& config) {
  theta_truth.validate(g.m());
  std::vector<WidthSweepRow> rows;
  Rng seeder(mix2(config.seed, 0x51beebu));
  for (double width : config.widths) {
    if (width < 0) throw std::runtime_error("width_sweep: negative width");
    ParameterSpace space = ParameterSpace::around(theta_truth, width / 2.0);
    std::unique_ptr<EvaluatorFactory> factory;
    uint64_t sub_seed = seeder.fork();
    if (config.exact)
      factory = std::make_unique<ExactEvaluatorFactory>();
    else
      factory = std::make_unique<MonteCarloEvaluatorFactory>(config.num_sims, sub_seed,
                                                             config.threads);
    LuGreedyResult lu = lugreedy(g, config.k, space, *factory);
    GapRatioResult gap =
        gap_ratio(g, config.k, space, lu.s_lu, lu.s_plus_greedy, *factory);
    AlphaBarResult ab = alpha_bar(g, config.k, space, lu.s_lu, config.alpha_bar_cascades,
                                  seeder.fork(), *factory);
    rows.push_back({width, gap.alpha, ab.alpha_bar});
  }
  return rows;
}

void write_width_sweep_csv(const std::string& path, const std::vector<WidthSweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "W,alpha,alpha_bar\n";
  for (const auto& row : rows)
    out << format_double(row.width) << ',' << format_double(row.alpha) << ','
        << format_double(row.alpha_bar) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::map<std::string, SamplerResult> sampler_compare(const DirectedGraph& g,
                                                     const ParameterVector& theta_truth,
                                                     const std::vector<std::string>& roster,
                                                     const SamplerCompareConfig& config) {
  theta_truth.validate(g.m());
  double gamma = config.gamma > 0.0 ? config.gamma : default_gamma(g);

  ObservationSet m0 = ObservationSet::empty(g.m());
  if (config.m0_samples_per_edge > 0) {
    // Pre-seeding draws come from a dedicated environment so every sampler
    // starts from the identical observation set.
    GroundTruthEnv env0(g, theta_truth, mix2(config.seed, 0x309u));
    for (int e = 0; e < g.m(); ++e)
      for (int64_t i = 0; i < config.m0_samples_per_edge; ++i) m0.record(e, env0.draw(e));
  }

  SamplerOptions options;
  options.compute_alpha_bar = config.compute_alpha_bar;
  options.alpha_bar_cascades = config.alpha_bar_cascades;
  options.aux_seed = mix2(config.seed, 0xa6u);

  std::map<std::string, SamplerResult> results;
  for (const std::string& name : roster) {
    GroundTruthEnv env(g, theta_truth, config.seed);
    MonteCarloEvaluatorFactory factory(config.num_sims, mix2(config.seed, 0xfac7u),
                                       config.threads);
    if (name == "US") {
      results[name] = us_rim_iterative(env, g, config.k, config.tau_us, config.kappa,
                                       gamma, config.max_iters, factory, options, m0);
    } else if (name == "ICS") {
      results[name] = ics_rim(env, g, config.k, m0, config.kappa, gamma, config.tau_ics,
                              config.max_iters, factory, options);
    } else if (name == "OES") {
      results[name] = oes_rim(env, g, config.k, m0, gamma, config.tau_oes,
                              config.max_iters, factory, options);
    } else {
      throw std::runtime_error("sampler_compare: unknown sampler '" + name + "'");
    }
  }
  return results;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     bool include_timings) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iter,avg_samples_per_edge,alpha,alpha_bar,seed_set,wall_seconds\n";
  for (const auto& row : trace) {
    out << row.iter << ',' << format_double(row.avg_samples_per_edge) << ','
        << format_double(row.alpha) << ',';
    if (!std::isnan(row.alpha_bar)) out << format_double(row.alpha_bar);
    out << ',';
    for (size_t i = 0; i < row.seed_set.nodes.size(); ++i) {
      if (i) out << ';';
      out << row.seed_set.nodes[i];
    }
    out << ',';
    if (include_timings) out << format_double(row.wall_seconds);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_metadata(const std::string& path, const std::string& command,
                    const std::map<std::string, std::string>& fields) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = kVersion;
  for (const auto& [key, value] : fields) j[key] = value;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace rim
