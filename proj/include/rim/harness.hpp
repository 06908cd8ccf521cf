#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rim/graph.hpp"
#include "rim/sampling.hpp"

namespace rim {

inline constexpr const char* kVersion = "0.1.0";

// Random directed multigraph (possible duplicate edges, no self-loops) run
// through the weighted-cascade probability assignment; the synthetic stand-in
// for a real collaboration network.
std::pair<DirectedGraph, ParameterVector> gen_wc_random(int n, int raw_edges,
                                                        uint64_t seed);

// gamma default: m^{-1/2}.
double default_gamma(const DirectedGraph& g);

// ---- Width sweep -----------------------------------------------------------

struct WidthSweepConfig {
  int k = 5;
  std::vector<double> widths = {0.0, 0.05, 0.1, 0.2, 0.3};
  int64_t num_sims = 10000;
  uint64_t seed = 1;
  int threads = 0;
  int alpha_bar_cascades = 200;
  bool exact = false;
};

struct WidthSweepRow {
  double width = 0.0;
  double alpha = 0.0;
  double alpha_bar = 0.0;
};

// For each width W, build Theta as [p_e - W/2, p_e + W/2] clamped to [0,1],
// run LUGreedy, and record alpha and alpha-bar.
std::vector<WidthSweepRow> width_sweep(const DirectedGraph& g,
                                       const ParameterVector& theta_truth,
                                       const WidthSweepConfig& config);

void write_width_sweep_csv(const std::string& path, const std::vector<WidthSweepRow>& rows);

// ---- Sampler comparison ------------------------------------------------------

struct SamplerCompareConfig {
  int k = 5;
  double kappa = 0.8;
  double gamma = 0.0;  // 0 -> m^{-1/2}
  int64_t tau_us = 1000;
  int64_t tau_ics = 5000;
  int64_t tau_oes = 5000;
  int max_iters = 50;
  int64_t m0_samples_per_edge = 0;  // uniform pre-seeding of the observation set
  int64_t num_sims = 10000;
  uint64_t seed = 1;
  int threads = 0;
  bool compute_alpha_bar = false;
  int alpha_bar_cascades = 200;
};

// Runs each requested sampler ("US", "ICS", "OES") against a fresh
// environment with the shared seed and the shared initial observation set.
std::map<std::string, SamplerResult> sampler_compare(const DirectedGraph& g,
                                                     const ParameterVector& theta_truth,
                                                     const std::vector<std::string>& roster,
                                                     const SamplerCompareConfig& config);

// Trace CSV schema: iter,avg_samples_per_edge,alpha,alpha_bar,seed_set,
// wall_seconds. seed_set is semicolon-joined ascending node ids. Without
// include_timings the wall_seconds cell is left empty so reruns with the
// same seed produce byte-identical files; measured timings always land in
// the metadata JSON.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     bool include_timings);

// Run metadata: config echo, seeds, conventions, library version, timings.
// JSON (not part of the byte-reproducible CSV surface).
void write_metadata(const std::string& path, const std::string& command,
                    const std::map<std::string, std::string>& fields);

}  // namespace rim
