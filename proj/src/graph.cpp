#include "rim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "rim/rng.hpp"

namespace rim {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  if (x == std::floor(x) && std::abs(x) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", x);
    return buf;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    double parsed = 0.0;
    std::sscanf(buf, "%lf", &parsed);
    if (parsed == x) break;
  }
  return buf;
}

DirectedGraph DirectedGraph::build(int n, std::vector<std::pair<int, int>> edge_list) {
  if (n < 0) fail("graph: negative node count");
  std::set<std::pair<int, int>> seen;
  DirectedGraph g;
  g.node_count = n;
  g.out.resize(n);
  g.edges.reserve(edge_list.size());
  for (size_t i = 0; i < edge_list.size(); ++i) {
    auto [u, v] = edge_list[i];
    if (u < 0 || u >= n || v < 0 || v >= n)
      fail("graph: edge " + std::to_string(i) + " endpoint out of range");
    if (u == v) fail("graph: self-loop at edge " + std::to_string(i));
    if (!seen.insert({u, v}).second)
      fail("graph: duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    g.out[u].push_back(static_cast<int>(g.edges.size()));
    g.edges.emplace_back(u, v);
  }
  return g;
}

ParameterVector ParameterVector::uniform(int m, double value) {
  ParameterVector theta;
  theta.p.assign(m, value);
  theta.validate(m);
  return theta;
}

void ParameterVector::validate(int expected_m) const {
  if (m() != expected_m) fail("parameter vector: expected " + std::to_string(expected_m) + " entries, got " + std::to_string(m()));
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0)) fail("parameter vector: probability outside [0,1]");
}

bool ParameterSpace::contains(const ParameterVector& theta) const {
  if (theta.m() != m()) return false;
  for (int e = 0; e < m(); ++e)
    if (theta.p[e] < lower[e] || theta.p[e] > upper[e]) return false;
  return true;
}

bool ParameterSpace::is_point() const {
  for (int e = 0; e < m(); ++e)
    if (lower[e] != upper[e]) return false;
  return true;
}

ParameterSpace ParameterSpace::uniform(int m, double l, double r) {
  ParameterSpace s;
  s.lower.assign(m, l);
  s.upper.assign(m, r);
  s.validate(m);
  return s;
}

ParameterSpace ParameterSpace::point(const ParameterVector& theta) {
  ParameterSpace s;
  s.lower = theta.p;
  s.upper = theta.p;
  s.validate(theta.m());
  return s;
}

ParameterSpace ParameterSpace::around(const ParameterVector& theta, double half_width) {
  if (half_width < 0) fail("parameter space: negative half width");
  ParameterSpace s;
  s.lower.reserve(theta.m());
  s.upper.reserve(theta.m());
  for (double p : theta.p) {
    s.lower.push_back(clamp01(p - half_width));
    s.upper.push_back(clamp01(p + half_width));
  }
  return s;
}

void ParameterSpace::validate(int expected_m) const {
  if (m() != expected_m || static_cast<int>(upper.size()) != expected_m)
    fail("parameter space: size mismatch");
  for (int e = 0; e < expected_m; ++e)
    if (!(0.0 <= lower[e] && lower[e] <= upper[e] && upper[e] <= 1.0))
      fail("parameter space: invalid interval at edge " + std::to_string(e));
}

bool SeedSet::contains(int v) const {
  return std::binary_search(nodes.begin(), nodes.end(), v);
}

SeedSet SeedSet::with(int v) const {
  SeedSet s = *this;
  auto it = std::lower_bound(s.nodes.begin(), s.nodes.end(), v);
  if (it == s.nodes.end() || *it != v) s.nodes.insert(it, v);
  return s;
}

SeedSet SeedSet::of(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return SeedSet{std::move(ids)};
}

bool operator==(const SeedSet& a, const SeedSet& b) { return a.nodes == b.nodes; }

std::vector<int> reachable_edges(const DirectedGraph& g, const SeedSet& seeds) {
  std::vector<char> visited(g.n(), 0);
  std::vector<int> stack;
  for (int v : seeds.nodes) {
    if (v < 0 || v >= g.n()) fail("seed set: node id out of range");
    if (!visited[v]) {
      visited[v] = 1;
      stack.push_back(v);
    }
  }
  std::vector<char> edge_seen(g.m(), 0);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int eid : g.out[v]) {
      edge_seen[eid] = 1;
      int w = g.target(eid);
      if (!visited[w]) {
        visited[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::vector<int> result;
  for (int e = 0; e < g.m(); ++e)
    if (edge_seen[e]) result.push_back(e);
  return result;
}

// ---- File I/O ----------------------------------------------------------

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

long parse_int(const std::string& s, const std::string& path, int lineno) {
  try {
    size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(path + ":" + std::to_string(lineno) + ": malformed integer '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& path, int lineno) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(path + ":" + std::to_string(lineno) + ": malformed number '" + s + "'");
  }
}

bool skippable(const std::string& line) {
  for (char c : line)
    if (!isspace(static_cast<unsigned char>(c))) return c == '#';
  return true;
}

}  // namespace

LoadedGraph load_graph(const std::string& path, EdgeListFormat format) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::vector<std::pair<int, int>> edge_list;
  std::vector<double> probs;
  std::string line;
  int lineno = 0;
  int max_node = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    auto fields = split_tabs(line);
    size_t want = format == EdgeListFormat::kPlain ? 2 : 3;
    if (fields.size() != want)
      fail(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(want) +
           " tab-separated fields, got " + std::to_string(fields.size()));
    long u = parse_int(fields[0], path, lineno);
    long v = parse_int(fields[1], path, lineno);
    if (u < 0 || v < 0) fail(path + ":" + std::to_string(lineno) + ": negative node id");
    if (u == v) fail(path + ":" + std::to_string(lineno) + ": self-loop rejected");
    if (format == EdgeListFormat::kWithProb) {
      double p = parse_double(fields[2], path, lineno);
      if (!(p >= 0.0 && p <= 1.0))
        fail(path + ":" + std::to_string(lineno) + ": probability " + fields[2] + " outside [0,1]");
      probs.push_back(p);
    }
    edge_list.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_node = std::max(max_node, static_cast<int>(std::max(u, v)));
  }
  if (edge_list.empty()) fail(path + ": empty graph");

  // Duplicates must be pre-merged (see weighted_cascade_probs);
  // report with a line number for the offender.
  std::set<std::pair<int, int>> seen;
  for (size_t i = 0; i < edge_list.size(); ++i)
    if (!seen.insert(edge_list[i]).second)
      fail(path + ": duplicate edge (" + std::to_string(edge_list[i].first) + "," +
           std::to_string(edge_list[i].second) + ")");

  LoadedGraph result;
  result.graph = DirectedGraph::build(max_node + 1, std::move(edge_list));
  if (format == EdgeListFormat::kWithProb) result.theta = ParameterVector{std::move(probs)};
  return result;
}

void save_graph(const std::string& path, const DirectedGraph& g, const ParameterVector* theta) {
  if (theta) theta->validate(g.m());
  std::ofstream out(path);
  if (!out) fail("cannot write " + path);
  for (int e = 0; e < g.m(); ++e) {
    out << g.source(e) << '\t' << g.target(e);
    if (theta) out << '\t' << format_double(theta->p[e]);
    out << '\n';
  }
  if (!out) fail("write failed: " + path);
}

ParameterSpace load_parameter_space(const std::string& path, int expected_m) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  ParameterSpace space;
  space.lower.assign(expected_m, -1.0);
  space.upper.assign(expected_m, -1.0);
  std::vector<char> seen(expected_m, 0);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3)
      fail(path + ":" + std::to_string(lineno) + ": expected eid<TAB>l<TAB>r");
    long eid = parse_int(fields[0], path, lineno);
    if (eid < 0 || eid >= expected_m)
      fail(path + ":" + std::to_string(lineno) + ": edge id out of range");
    if (seen[eid]) fail(path + ":" + std::to_string(lineno) + ": duplicate edge id");
    seen[eid] = 1;
    space.lower[eid] = parse_double(fields[1], path, lineno);
    space.upper[eid] = parse_double(fields[2], path, lineno);
  }
  for (int e = 0; e < expected_m; ++e)
    if (!seen[e]) fail(path + ": missing interval for edge " + std::to_string(e));
  space.validate(expected_m);
  return space;
}

void save_parameter_space(const std::string& path, const ParameterSpace& space) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path);
  for (int e = 0; e < space.m(); ++e)
    out << e << '\t' << format_double(space.lower[e]) << '\t'
        << format_double(space.upper[e]) << '\n';
  if (!out) fail("write failed: " + path);
}

// ---- Generators --------------------------------------------------------

std::pair<DirectedGraph, ParameterVector> weighted_cascade_probs(
    int n, const std::vector<std::pair<int, int>>& raw_edges) {
  std::vector<long> in_degree(n, 0);  // counting duplicates
  std::unordered_map<long, long> multiplicity;
  std::vector<std::pair<int, int>> dedup;
  for (auto [u, v] : raw_edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) fail("weighted cascade: endpoint out of range");
    if (u == v) fail("weighted cascade: self-loop rejected");
    in_degree[v]++;
    long key = static_cast<long>(u) * n + v;
    if (multiplicity[key]++ == 0) dedup.emplace_back(u, v);
  }
  ParameterVector theta;
  theta.p.reserve(dedup.size());
  for (auto [u, v] : dedup) {
    long x = in_degree[v];
    long y = multiplicity[static_cast<long>(u) * n + v];
    theta.p.push_back(1.0 - std::pow(1.0 - 1.0 / static_cast<double>(x),
                                     static_cast<double>(y)));
  }
  return {DirectedGraph::build(n, std::move(dedup)), std::move(theta)};
}

std::pair<DirectedGraph, ParameterSpace> gen_star_forest(int k_pairs, int t,
                                                         double l, double r) {
  if (k_pairs <= 0 || t <= 0) fail("star forest: k_pairs and t must be positive");
  if (!(0.0 <= l && l <= r && r <= 1.0)) fail("star forest: invalid interval");
  int stars = 2 * k_pairs;
  std::vector<std::pair<int, int>> edge_list;
  edge_list.reserve(static_cast<size_t>(stars) * t);
  for (int s = 0; s < stars; ++s) {
    int center = s * (t + 1);
    for (int j = 1; j <= t; ++j) edge_list.emplace_back(center, center + j);
  }
  DirectedGraph g = DirectedGraph::build(stars * (t + 1), std::move(edge_list));
  ParameterSpace space = ParameterSpace::uniform(g.m(), l, r);
  return {std::move(g), std::move(space)};
}

std::pair<DirectedGraph, ParameterSpace> gen_two_cluster_er(int half_size,
                                                            double p_center,
                                                            double eps,
                                                            uint64_t seed) {
  if (half_size < 2) fail("two-cluster: half_size must be at least 2");
  if (eps < 0) fail("two-cluster: negative eps");
  int n = 2 * half_size;
  // Fisher-Yates label shuffle so cluster membership is not id-derivable.
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = i;
  Rng rng(mix2(seed, 0x2c1u));
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_u64() % static_cast<uint64_t>(i + 1));
    std::swap(label[i], label[j]);
  }
  std::vector<std::pair<int, int>> edge_list;
  for (int cluster = 0; cluster < 2; ++cluster) {
    int base = cluster * half_size;
    for (int a = 0; a < half_size; ++a)
      for (int b = 0; b < half_size; ++b)
        if (a != b) edge_list.emplace_back(label[base + a], label[base + b]);
  }
  DirectedGraph g = DirectedGraph::build(n, std::move(edge_list));
  double l = clamp01(p_center - eps);
  double r = clamp01(p_center + eps);
  ParameterSpace space = ParameterSpace::uniform(g.m(), l, r);
  return {std::move(g), std::move(space)};
}

}  // namespace rim
