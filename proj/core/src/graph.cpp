#include "strategem/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace strategem {

namespace {

void fill_csr(std::size_t n, const std::vector<Edge>& sorted_edges, bool by_source,
              std::vector<std::size_t>& offsets, std::vector<FeatureId>& targets) {
  offsets.assign(n + 1, 0);
  for (const auto& [u, v] : sorted_edges) ++offsets[(by_source ? u : v) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  targets.assign(sorted_edges.size(), 0);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : sorted_edges) {
    const auto key = by_source ? u : v;
    targets[cursor[key]++] = by_source ? v : u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              targets.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
  }
}

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.first) + ", " + std::to_string(e.second) + ")";
}

}  // namespace

ManipulationGraph ManipulationGraph::build(std::size_t node_count, std::span<const Edge> edges) {
  if (node_count == 0) throw GraphError("graph must have at least one node");
  std::vector<Edge> all;
  all.reserve(edges.size() + node_count);
  for (const auto& e : edges) {
    if (e.first >= node_count || e.second >= node_count) {
      throw GraphError("edge " + edge_text(e) + " has an endpoint outside [0, " +
                       std::to_string(node_count) + ")");
    }
    all.push_back(e);
  }
  for (std::size_t x = 0; x < node_count; ++x) {
    all.emplace_back(static_cast<FeatureId>(x), static_cast<FeatureId>(x));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  ManipulationGraph g;
  g.node_count_ = node_count;
  fill_csr(node_count, all, true, g.out_offsets_, g.out_targets_);
  fill_csr(node_count, all, false, g.in_offsets_, g.in_sources_);
  std::vector<std::string> labels(node_count);
  for (std::size_t x = 0; x < node_count; ++x) labels[x] = std::to_string(x);
  g.set_labels(std::move(labels));
  return g;
}

std::span<const FeatureId> ManipulationGraph::out_neighbors(FeatureId x) const {
  return {out_targets_.data() + out_offsets_.at(x), out_offsets_.at(x + 1) - out_offsets_[x]};
}

std::span<const FeatureId> ManipulationGraph::in_neighbors(FeatureId x) const {
  return {in_sources_.data() + in_offsets_.at(x), in_offsets_.at(x + 1) - in_offsets_[x]};
}

bool ManipulationGraph::has_edge(FeatureId from, FeatureId to) const {
  const auto out = out_neighbors(from);
  return std::binary_search(out.begin(), out.end(), to);
}

Degrees ManipulationGraph::max_degrees() const {
  Degrees d;
  for (std::size_t x = 0; x < node_count_; ++x) {
    d.k_out = std::max(d.k_out, out_offsets_[x + 1] - out_offsets_[x]);
    d.k_in = std::max(d.k_in, in_offsets_[x + 1] - in_offsets_[x]);
  }
  return d;
}

Degrees ManipulationGraph::max_degrees_excluding_self_loops() const {
  const auto d = max_degrees();
  return {d.k_in - 1, d.k_out - 1};
}

std::vector<Edge> ManipulationGraph::edges() const {
  std::vector<Edge> result;
  for (std::size_t u = 0; u < node_count_; ++u) {
    for (auto v : out_neighbors(static_cast<FeatureId>(u))) {
      if (v != u) result.emplace_back(static_cast<FeatureId>(u), v);
    }
  }
  return result;
}

const std::string& ManipulationGraph::label(FeatureId x) const { return labels_.at(x); }

std::optional<FeatureId> ManipulationGraph::find(std::string_view label) const {
  if (auto it = label_index_.find(label); it != label_index_.end()) return it->second;
  return std::nullopt;
}

FeatureId ManipulationGraph::at(std::string_view label) const {
  if (auto id = find(label)) return *id;
  throw GraphError("no node labelled '" + std::string(label) + "'");
}

void ManipulationGraph::set_labels(std::vector<std::string> labels) {
  if (labels.size() != node_count_) throw GraphError("label table size does not match node count");
  std::map<std::string, FeatureId, std::less<>> index;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    if (!index.emplace(labels[x], static_cast<FeatureId>(x)).second) {
      throw GraphError("duplicate node label '" + labels[x] + "'");
    }
  }
  labels_ = std::move(labels);
  label_index_ = std::move(index);
}

namespace {

FeatureId middle_id(std::size_t i) { return static_cast<FeatureId>(i); }
FeatureId leaf_id(std::size_t k1, std::size_t k2, std::size_t i, std::size_t j) {
  return static_cast<FeatureId>(k1 + (i - 1) * k2 + j);
}

ManipulationGraph two_layer(std::size_t k1, std::size_t k2, bool clique) {
  if (k1 == 0 || k2 == 0) throw GraphError("two-layer graph needs k1 >= 1 and k2 >= 1");
  const std::size_t n = 1 + k1 + k1 * k2;
  std::vector<Edge> edges;
  std::vector<std::string> labels(n);
  labels[0] = "x_0";
  for (std::size_t i = 1; i <= k1; ++i) {
    labels[i] = "x_" + std::to_string(i);
    edges.emplace_back(0, middle_id(i));
    edges.emplace_back(middle_id(i), 0);
    for (std::size_t j = 1; j <= k2; ++j) {
      const auto leaf = leaf_id(k1, k2, i, j);
      labels[leaf] = "x_{" + std::to_string(i) + "," + std::to_string(j) + "}";
      edges.emplace_back(middle_id(i), leaf);
    }
    if (clique) {
      for (std::size_t other = 1; other <= k1; ++other) {
        if (other != i) edges.emplace_back(middle_id(i), middle_id(other));
      }
    }
  }
  auto g = ManipulationGraph::build(n, edges);
  g.set_labels(std::move(labels));
  return g;
}

}  // namespace

ManipulationGraph make_two_layer(std::size_t k1, std::size_t k2) { return two_layer(k1, k2, false); }

ManipulationGraph make_two_layer_clique(std::size_t k1, std::size_t k2) {
  return two_layer(k1, k2, true);
}

ManipulationGraph make_stars(std::size_t count) {
  if (count == 0) throw GraphError("star family needs at least one star");
  std::vector<Edge> edges;
  std::vector<std::string> labels(3 * count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto b = static_cast<FeatureId>(3 * i);
    const auto name = std::to_string(i + 1);
    labels[b] = "x_{" + name + ",B}";
    labels[b + 1] = "x_{" + name + ",L}";
    labels[b + 2] = "x_{" + name + ",R}";
    edges.insert(edges.end(), {{b, b + 1}, {b + 1, b}, {b, b + 2}, {b + 2, b}});
  }
  auto g = ManipulationGraph::build(3 * count, edges);
  g.set_labels(std::move(labels));
  return g;
}

ManipulationGraph make_triangle_star() {
  const std::vector<Edge> edges{{0, 1}, {1, 0}, {0, 2}, {2, 0}};
  auto g = ManipulationGraph::build(3, edges);
  g.set_labels({"x_B", "x_L", "x_R"});
  return g;
}

ManipulationGraph disjoint_union(const ManipulationGraph& g, std::size_t copies) {
  if (copies == 0) throw GraphError("disjoint union needs at least one copy");
  if (copies == 1) return g;
  const auto n = g.node_count();
  const auto base = g.edges();
  std::vector<Edge> edges;
  edges.reserve(base.size() * copies);
  std::vector<std::string> labels(n * copies);
  for (std::size_t c = 0; c < copies; ++c) {
    const auto offset = static_cast<FeatureId>(c * n);
    for (const auto& [u, v] : base) edges.emplace_back(u + offset, v + offset);
    for (std::size_t x = 0; x < n; ++x) {
      labels[c * n + x] = g.label(static_cast<FeatureId>(x)) + "#" + std::to_string(c);
    }
  }
  auto result = ManipulationGraph::build(n * copies, edges);
  result.set_labels(std::move(labels));
  return result;
}

ManipulationGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> node_count;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (!node_count) {
      std::size_t n = 0;
      if (first != "nodes" || !(fields >> n)) throw GraphError("expected 'nodes N' header" + where);
      node_count = n;
      continue;
    }
    long long u = 0;
    long long v = 0;
    try {
      u = std::stoll(first);
    } catch (const std::exception&) {
      throw GraphError("malformed edge" + where);
    }
    if (!(fields >> v) || u < 0 || v < 0) throw GraphError("malformed edge" + where);
    std::string rest;
    if (fields >> rest) throw GraphError("trailing tokens after edge" + where);
    if (u == v) throw GraphError("explicit self-loop (" + first + ", " + first + ")" + where);
    edges.emplace_back(static_cast<FeatureId>(u), static_cast<FeatureId>(v));
    if (static_cast<std::size_t>(u) >= *node_count || static_cast<std::size_t>(v) >= *node_count) {
      throw GraphError("edge " + edge_text(edges.back()) + " has an endpoint outside [0, " +
                       std::to_string(*node_count) + ")" + where);
    }
  }
  if (!node_count) throw GraphError("empty graph file");
  return ManipulationGraph::build(*node_count, edges);
}

ManipulationGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const ManipulationGraph& g) {
  out << "nodes " << g.node_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace strategem
