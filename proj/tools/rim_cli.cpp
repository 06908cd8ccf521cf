// rim: robust influence maximization under the independent cascade model.
//
// Subcommands: gen, spread, greedy, certify, width-sweep, sampler-compare.
// Every flag can be overridden through an environment variable with the
// RIM_ prefix (e.g. RIM_SEED, RIM_NUM_SIMS).

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rim/graph.hpp"
#include "rim/harness.hpp"
#include "rim/maximize.hpp"
#include "rim/robust.hpp"
#include "rim/sampling.hpp"

namespace {

namespace fs = std::filesystem;

std::string env_name(const std::string& flag) {
  std::string name = "RIM_";
  for (char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return name;
}

// Registers the option and binds its RIM_* environment override.
template <typename App, typename T>
CLI::Option* opt(App& app, const std::string& flag, T& value, const std::string& help) {
  auto* option = app.add_option("--" + flag, value, help);
  option->envname(env_name(flag));
  return option;
}

std::vector<int> parse_id_list(const std::string& text) {
  std::vector<int> ids;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ';'))
    if (!token.empty()) ids.push_back(std::stoi(token));
  return ids;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) values.push_back(std::stod(token));
  return values;
}

std::vector<std::string> parse_name_list(std::string text) {
  std::vector<std::string> names;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) names.push_back(token);
  return names;
}

rim::LoadedGraph load_with_theta(const std::string& path, bool require_theta) {
  rim::LoadedGraph loaded = rim::load_graph(path, rim::EdgeListFormat::kWithProb);
  if (require_theta && !loaded.theta)
    throw std::runtime_error(path + ": ground-truth probabilities required");
  return loaded;
}

// Column-count sniff for commands that accept either edge-list flavor.
rim::EdgeListFormat sniff_format(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    size_t tabs = std::count(line.begin(), line.end(), '\t');
    return tabs >= 2 ? rim::EdgeListFormat::kWithProb : rim::EdgeListFormat::kPlain;
  }
  return rim::EdgeListFormat::kPlain;
}

struct CommonFlags {
  uint64_t seed = 1;
  int64_t num_sims = 10000;
  int threads = 0;
  int k = 5;
};

void add_common(CLI::App& app, CommonFlags& flags) {
  opt(app, "seed", flags.seed, "master RNG seed");
  opt(app, "num-sims", flags.num_sims, "Monte Carlo simulations per spread estimate");
  opt(app, "threads", flags.threads, "worker threads (0 = hardware)");
  opt(app, "k", flags.k, "seed set size");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust influence maximization toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rim::kVersion);

  // ---- gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate fixture graphs and parameter spaces");
  std::string gen_type = "star-forest";
  std::string gen_out_dir = ".";
  int gen_k_pairs = 2, gen_t = 3, gen_half = 50, gen_n = 500, gen_raw_edges = 2000;
  double gen_l = 0.2, gen_r = 0.8, gen_p_center = 0.04, gen_eps = 0.01, gen_theta = -1.0;
  uint64_t gen_seed = 1;
  opt(*gen, "type", gen_type, "star-forest | two-cluster-er | wc-random");
  opt(*gen, "out-dir", gen_out_dir, "output directory");
  opt(*gen, "theta", gen_theta,
      "also write this constant ground-truth probability per edge (fixture types)");
  opt(*gen, "k-pairs", gen_k_pairs, "star forest: half the number of stars");
  opt(*gen, "t", gen_t, "star forest: leaves per star");
  opt(*gen, "l", gen_l, "star forest: interval lower end");
  opt(*gen, "r", gen_r, "star forest: interval upper end");
  opt(*gen, "half-size", gen_half, "two-cluster: nodes per cluster");
  opt(*gen, "p-center", gen_p_center, "two-cluster: interval center");
  opt(*gen, "eps", gen_eps, "two-cluster: interval half-width");
  opt(*gen, "n", gen_n, "wc-random: node count");
  opt(*gen, "raw-edges", gen_raw_edges, "wc-random: raw edge draws (with duplicates)");
  opt(*gen, "seed", gen_seed, "generator seed");

  // ---- spread ----------------------------------------------------------------
  auto* spread_cmd = app.add_subcommand("spread", "estimate or enumerate influence spread");
  CommonFlags spread_flags;
  std::string spread_graph, spread_seeds_text;
  bool spread_exact = false;
  add_common(*spread_cmd, spread_flags);
  opt(*spread_cmd, "graph", spread_graph, "edge list with probabilities")->required();
  opt(*spread_cmd, "seeds", spread_seeds_text, "semicolon-joined node ids")->required();
  spread_cmd->add_flag("--exact", spread_exact, "exact enumeration instead of Monte Carlo")
      ->envname("RIM_EXACT");

  // ---- greedy ----------------------------------------------------------------
  auto* greedy_cmd = app.add_subcommand("greedy", "greedy seed selection at a fixed theta");
  CommonFlags greedy_flags;
  std::string greedy_graph, greedy_out;
  bool greedy_exact = false;
  add_common(*greedy_cmd, greedy_flags);
  opt(*greedy_cmd, "graph", greedy_graph, "edge list with probabilities")->required();
  opt(*greedy_cmd, "out", greedy_out, "optional JSON output path");
  greedy_cmd->add_flag("--exact", greedy_exact, "exact evaluation")->envname("RIM_EXACT");

  // ---- certify ---------------------------------------------------------------
  auto* certify_cmd = app.add_subcommand("certify", "LUGreedy + gap-ratio certificate");
  CommonFlags certify_flags;
  std::string certify_graph, certify_space, certify_out = "certificate.json";
  double min_bound = -1.0;
  int certify_cascades = 200;
  bool certify_exact = false, certify_conservative = false;
  add_common(*certify_cmd, certify_flags);
  opt(*certify_cmd, "graph", certify_graph, "edge list (plain or with probabilities)")->required();
  opt(*certify_cmd, "space", certify_space, "parameter-space file (eid<TAB>l<TAB>r)")->required();
  opt(*certify_cmd, "out", certify_out, "certificate JSON path");
  opt(*certify_cmd, "min-bound", min_bound,
      "exit nonzero when alpha*(1-1/e) falls below this");
  opt(*certify_cmd, "cascades", certify_cascades, "cascades per alpha-bar heuristic");
  certify_cmd->add_flag("--exact", certify_exact, "exact evaluation")->envname("RIM_EXACT");
  certify_cmd->add_flag("--conservative", certify_conservative,
                        "also report alpha minus twice its propagated std error")
      ->envname("RIM_CONSERVATIVE");

  // ---- width-sweep -----------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("width-sweep", "alpha/alpha-bar against interval width");
  CommonFlags sweep_flags;
  std::string sweep_graph, sweep_out_dir = ".", sweep_widths = "0,0.05,0.1,0.2,0.3";
  int sweep_cascades = 200;
  add_common(*sweep_cmd, sweep_flags);
  opt(*sweep_cmd, "graph", sweep_graph, "edge list with ground-truth probabilities")->required();
  opt(*sweep_cmd, "out-dir", sweep_out_dir, "output directory");
  opt(*sweep_cmd, "widths", sweep_widths, "comma-separated interval widths");
  opt(*sweep_cmd, "cascades", sweep_cascades, "cascades per alpha-bar heuristic");

  // ---- sampler-compare ---------------------------------------------------------
  auto* compare_cmd = app.add_subcommand("sampler-compare", "US / ICS / OES sampling traces");
  CommonFlags compare_flags;
  std::string compare_graph, compare_out_dir = ".", compare_samplers = "US,ICS,OES";
  double compare_kappa = 0.8, compare_gamma = 0.0;
  int64_t tau_us = 1000, tau_ics = 5000, tau_oes = 5000, m0_samples = 0;
  int compare_max_iters = 50, compare_cascades = 200;
  bool compare_alpha_bar = false, compare_timings = false;
  add_common(*compare_cmd, compare_flags);
  opt(*compare_cmd, "graph", compare_graph, "edge list with ground-truth probabilities")->required();
  opt(*compare_cmd, "out-dir", compare_out_dir, "output directory");
  opt(*compare_cmd, "samplers", compare_samplers, "comma-separated subset of US,ICS,OES");
  opt(*compare_cmd, "kappa", compare_kappa, "gap-ratio stopping threshold");
  opt(*compare_cmd, "gamma", compare_gamma, "confidence parameter (0 = m^-0.5)");
  opt(*compare_cmd, "tau-us", tau_us, "US: samples per edge per iteration");
  opt(*compare_cmd, "tau-ics", tau_ics, "ICS: cascades per iteration");
  opt(*compare_cmd, "tau-oes", tau_oes, "OES: samples per out-edge per iteration");
  opt(*compare_cmd, "m0", m0_samples, "initial uniform samples per edge");
  opt(*compare_cmd, "max-iters", compare_max_iters, "iteration cap per sampler");
  opt(*compare_cmd, "cascades", compare_cascades, "cascades per alpha-bar heuristic");
  compare_cmd->add_flag("--alpha-bar", compare_alpha_bar, "compute alpha-bar per iteration")
      ->envname("RIM_ALPHA_BAR");
  compare_cmd->add_flag("--timings", compare_timings,
                        "fill the wall_seconds column (breaks byte reproducibility)")
      ->envname("RIM_TIMINGS");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      fs::create_directories(gen_out_dir);
      std::map<std::string, std::string> meta{{"type", gen_type},
                                              {"seed", std::to_string(gen_seed)}};
      auto save_fixture = [&](const rim::DirectedGraph& graph,
                              const rim::ParameterSpace& space) {
        if (gen_theta >= 0.0) {
          rim::ParameterVector theta = rim::ParameterVector::uniform(graph.m(), gen_theta);
          rim::save_graph(gen_out_dir + "/graph.tsv", graph, &theta);
          meta["theta"] = rim::format_double(gen_theta);
        } else {
          rim::save_graph(gen_out_dir + "/graph.tsv", graph);
        }
        rim::save_parameter_space(gen_out_dir + "/space.tsv", space);
        meta["n"] = std::to_string(graph.n());
        meta["m"] = std::to_string(graph.m());
      };
      if (gen_type == "star-forest") {
        auto [graph, space] = rim::gen_star_forest(gen_k_pairs, gen_t, gen_l, gen_r);
        save_fixture(graph, space);
      } else if (gen_type == "two-cluster-er") {
        auto [graph, space] = rim::gen_two_cluster_er(gen_half, gen_p_center, gen_eps, gen_seed);
        save_fixture(graph, space);
      } else if (gen_type == "wc-random") {
        auto [graph, theta] = rim::gen_wc_random(gen_n, gen_raw_edges, gen_seed);
        rim::save_graph(gen_out_dir + "/graph.tsv", graph, &theta);
        meta["n"] = std::to_string(graph.n());
        meta["m"] = std::to_string(graph.m());
      } else {
        throw std::runtime_error("gen: unknown type '" + gen_type + "'");
      }
      rim::write_metadata(gen_out_dir + "/metadata.json", "gen", meta);
      std::cout << "wrote " << gen_out_dir << "\n";
    } else if (*spread_cmd) {
      auto loaded = load_with_theta(spread_graph, true);
      rim::SeedSet seeds = rim::SeedSet::of(parse_id_list(spread_seeds_text));
      if (spread_exact) {
        double value = rim::exact_spread(loaded.graph, *loaded.theta, seeds);
        std::cout << "{\"mean\": " << rim::format_double(value) << ", \"exact\": true}\n";
      } else {
        rim::SpreadEstimate est =
            rim::estimate_spread(loaded.graph, *loaded.theta, seeds, spread_flags.num_sims,
                                 spread_flags.seed, spread_flags.threads);
        std::cout << "{\"mean\": " << rim::format_double(est.mean)
                  << ", \"std_error\": " << rim::format_double(est.std_error)
                  << ", \"num_sims\": " << est.num_sims << "}\n";
      }
    } else if (*greedy_cmd) {
      auto loaded = load_with_theta(greedy_graph, true);
      std::unique_ptr<rim::SpreadEvaluator> evaluator;
      if (greedy_exact)
        evaluator = std::make_unique<rim::ExactEvaluator>(loaded.graph, *loaded.theta);
      else
        evaluator = std::make_unique<rim::MonteCarloEvaluator>(
            loaded.graph, *loaded.theta, greedy_flags.num_sims, greedy_flags.seed,
            greedy_flags.threads);
      rim::SeedSet seeds = rim::greedy(loaded.graph, greedy_flags.k, *evaluator);
      double value = evaluator->spread(seeds, 0xf17a1u);
      std::ostringstream json;
      json << "{\"seed_set\": [";
      for (size_t i = 0; i < seeds.nodes.size(); ++i)
        json << (i ? ", " : "") << seeds.nodes[i];
      json << "], \"spread\": " << rim::format_double(value) << "}";
      std::cout << json.str() << "\n";
      if (!greedy_out.empty()) {
        std::ofstream out(greedy_out);
        out << json.str() << "\n";
      }
    } else if (*certify_cmd) {
      auto loaded = rim::load_graph(certify_graph, sniff_format(certify_graph));
      rim::ParameterSpace space =
          rim::load_parameter_space(certify_space, loaded.graph.m());
      rim::CertifyOptions options;
      options.num_sims = certify_flags.num_sims;
      options.seed = certify_flags.seed;
      options.threads = certify_flags.threads;
      options.alpha_bar_cascades = certify_cascades;
      options.exact = certify_exact;
      options.conservative_alpha = certify_conservative;
      rim::RobustCertificate cert =
          rim::certify(loaded.graph, certify_flags.k, space, options);
      std::string json = cert.to_json();
      {
        std::ofstream out(certify_out);
        if (!out) throw std::runtime_error("cannot write " + certify_out);
        out << json << "\n";
      }
      std::cout << json << "\n";
      if (min_bound >= 0.0 && cert.lower_bound < min_bound) {
        std::cerr << "lower bound " << cert.lower_bound << " below required " << min_bound
                  << "\n";
        return 2;
      }
    } else if (*sweep_cmd) {
      auto loaded = load_with_theta(sweep_graph, true);
      rim::WidthSweepConfig config;
      config.k = sweep_flags.k;
      config.widths = parse_double_list(sweep_widths);
      config.num_sims = sweep_flags.num_sims;
      config.seed = sweep_flags.seed;
      config.threads = sweep_flags.threads;
      config.alpha_bar_cascades = sweep_cascades;
      fs::create_directories(sweep_out_dir);
      auto rows = rim::width_sweep(loaded.graph, *loaded.theta, config);
      rim::write_width_sweep_csv(sweep_out_dir + "/width_sweep.csv", rows);
      rim::write_metadata(
          sweep_out_dir + "/metadata.json", "width-sweep",
          {{"graph", sweep_graph},
           {"k", std::to_string(config.k)},
           {"widths", sweep_widths},
           {"num_sims", std::to_string(config.num_sims)},
           {"seed", std::to_string(config.seed)},
           {"threads", std::to_string(config.threads)},
           {"alpha_bar_cascades", std::to_string(config.alpha_bar_cascades)},
           {"interval_convention", "l=max(p-W/2,0), r=min(p+W/2,1)"}});
      std::cout << "wrote " << sweep_out_dir << "/width_sweep.csv\n";
    } else if (*compare_cmd) {
      auto loaded = load_with_theta(compare_graph, true);
      rim::SamplerCompareConfig config;
      config.k = compare_flags.k;
      config.kappa = compare_kappa;
      config.gamma = compare_gamma;
      config.tau_us = tau_us;
      config.tau_ics = tau_ics;
      config.tau_oes = tau_oes;
      config.max_iters = compare_max_iters;
      config.m0_samples_per_edge = m0_samples;
      config.num_sims = compare_flags.num_sims;
      config.seed = compare_flags.seed;
      config.threads = compare_flags.threads;
      config.compute_alpha_bar = compare_alpha_bar;
      config.alpha_bar_cascades = compare_cascades;
      std::vector<std::string> roster = parse_name_list(compare_samplers);
      fs::create_directories(compare_out_dir);
      auto results = rim::sampler_compare(loaded.graph, *loaded.theta, roster, config);
      std::map<std::string, std::string> meta{
          {"graph", compare_graph},
          {"samplers", compare_samplers},
          {"k", std::to_string(config.k)},
          {"kappa", rim::format_double(config.kappa)},
          {"gamma", config.gamma > 0 ? rim::format_double(config.gamma)
                                     : rim::format_double(rim::default_gamma(loaded.graph)) +
                                           " (default m^-0.5)"},
          {"tau_us", std::to_string(tau_us)},
          {"tau_ics", std::to_string(tau_ics)},
          {"tau_oes", std::to_string(tau_oes)},
          {"m0_samples_per_edge", std::to_string(m0_samples)},
          {"max_iters", std::to_string(compare_max_iters)},
          {"num_sims", std::to_string(config.num_sims)},
          {"seed", std::to_string(config.seed)},
          {"threads", std::to_string(config.threads)},
          {"interval_convention", "confidence intervals intersected with [0,1]"},
      };
      for (const auto& [name, result] : results) {
        std::string lower = name;
        std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
        std::string path = compare_out_dir + "/" + lower + "_trace.csv";
        rim::write_trace_csv(path, result.trace, compare_timings);
        meta[name + "_final_alpha"] = rim::format_double(result.final_alpha);
        meta[name + "_truncated"] = result.truncated ? "true" : "false";
        meta[name + "_avg_samples_per_edge"] =
            rim::format_double(result.observations.avg_samples_per_edge());
        meta[name + "_wall_seconds"] =
            rim::format_double(result.trace.empty() ? 0.0 : result.trace.back().wall_seconds);
        std::cout << name << ": final alpha " << rim::format_double(result.final_alpha)
                  << (result.truncated ? " (truncated)" : "") << ", avg samples/edge "
                  << rim::format_double(result.observations.avg_samples_per_edge()) << "\n";
      }
      rim::write_metadata(compare_out_dir + "/metadata.json", "sampler-compare", meta);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
