#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rim {

// Directed graph with dense edge ids assigned in insertion (file) order.
// Edge ids are the join key for parameter vectors, parameter spaces and
// observation sets. Immutable after construction; safe to share across
// concurrent readers.
struct DirectedGraph {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;  // edge id -> (source, target)
  std::vector<std::vector<int>> out;       // node -> out-edge ids, ascending

  int n() const { return node_count; }
  int m() const { return static_cast<int>(edges.size()); }
  int source(int eid) const { return edges[eid].first; }
  int target(int eid) const { return edges[eid].second; }

  // Validates endpoints, rejects self-loops and duplicate (u,v) pairs.
  static DirectedGraph build(int n, std::vector<std::pair<int, int>> edge_list);
};

// One probability per edge, indexed by edge id.
struct ParameterVector {
  std::vector<double> p;

  int m() const { return static_cast<int>(p.size()); }
  double operator[](int eid) const { return p[eid]; }

  static ParameterVector uniform(int m, double value);
  void validate(int expected_m) const;
};

// Per-edge interval [lower_e, upper_e]; the box of admissible parameter
// vectors.
struct ParameterSpace {
  std::vector<double> lower;
  std::vector<double> upper;

  int m() const { return static_cast<int>(lower.size()); }
  ParameterVector theta_minus() const { return {lower}; }
  ParameterVector theta_plus() const { return {upper}; }
  bool contains(const ParameterVector& theta) const;
  double width(int eid) const { return upper[eid] - lower[eid]; }
  bool is_point() const;

  static ParameterSpace uniform(int m, double l, double r);
  static ParameterSpace point(const ParameterVector& theta);
  // [p_e - half_width, p_e + half_width] intersected with [0,1].
  static ParameterSpace around(const ParameterVector& theta, double half_width);
  void validate(int expected_m) const;
};

// Seed set in canonical form: ascending node ids, no duplicates.
struct SeedSet {
  std::vector<int> nodes;

  int size() const { return static_cast<int>(nodes.size()); }
  bool empty() const { return nodes.empty(); }
  bool contains(int v) const;
  SeedSet with(int v) const;  // copy with v inserted

  static SeedSet of(std::vector<int> ids);  // sorts and dedups
};

bool operator==(const SeedSet& a, const SeedSet& b);

// Edge ids reachable from S when every edge is present. Only these edges
// can influence R_L(S) in any live-edge graph.
std::vector<int> reachable_edges(const DirectedGraph& g, const SeedSet& seeds);

// ---- File I/O ----------------------------------------------------------
//
// Edge-list format: UTF-8, one edge per line, tab-separated
//   u<TAB>v           (kPlain)
//   u<TAB>v<TAB>p     (kWithProb)
// '#' starts a comment line. Parameter-space format: "eid<TAB>l<TAB>r".

// Shortest decimal string that parses back to exactly x; integral values
// print without an exponent. Used for every file the toolkit writes.
std::string format_double(double x);

enum class EdgeListFormat { kPlain, kWithProb };

struct LoadedGraph {
  DirectedGraph graph;
  std::optional<ParameterVector> theta;
};

LoadedGraph load_graph(const std::string& path, EdgeListFormat format);
void save_graph(const std::string& path, const DirectedGraph& g,
                const ParameterVector* theta = nullptr);

ParameterSpace load_parameter_space(const std::string& path, int expected_m);
void save_parameter_space(const std::string& path, const ParameterSpace& space);

// ---- Probability assignment and fixture generators ---------------------

// Weighted-cascade probabilities from a raw edge multiset. With x_u the
// in-degree of u counting duplicates and y_e the multiplicity of (v,u),
// the surviving deduplicated edge gets p_e = 1 - (1 - 1/x_u)^{y_e}.
std::pair<DirectedGraph, ParameterVector> weighted_cascade_probs(
    int n, const std::vector<std::pair<int, int>>& raw_edges);

// 2*k_pairs disjoint stars, each a center with t out-edges to leaves.
// Nodes are laid out star by star, center first. Every edge interval is
// [l, r].
std::pair<DirectedGraph, ParameterSpace> gen_star_forest(int k_pairs, int t,
                                                         double l, double r);

// Two disconnected directed cliques of half_size nodes each, every edge
// carrying the interval [p_center - eps, p_center + eps] clamped to [0,1].
// The seed shuffles node labels across the two cliques.
std::pair<DirectedGraph, ParameterSpace> gen_two_cluster_er(int half_size,
                                                            double p_center,
                                                            double eps,
                                                            uint64_t seed);

}  // namespace rim
