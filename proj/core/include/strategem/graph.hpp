#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace strategem {

// Index of a node in a manipulation graph's feature space.
using FeatureId = std::uint32_t;

using Edge = std::pair<FeatureId, FeatureId>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Degrees {
  std::size_t k_in = 0;
  std::size_t k_out = 0;

  friend bool operator==(const Degrees&, const Degrees&) = default;
};

/// Finite directed graph over feature identifiers. An edge (u, v) means an
/// agent whose true feature is u can present as v. Every node carries a
/// self-loop; neighborhoods are closed (x is always in N_out[x] and N_in[x]).
///
/// Immutable after construction. Neighbor lists are sorted ascending.
class ManipulationGraph {
 public:
  /// Builds a graph from explicit edges. Self-loops are added for every node,
  /// duplicate edges collapse. Throws GraphError naming the first pair with an
  /// endpoint >= node_count.
  static ManipulationGraph build(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return node_count_; }

  std::span<const FeatureId> out_neighbors(FeatureId x) const;
  std::span<const FeatureId> in_neighbors(FeatureId x) const;
  bool has_edge(FeatureId from, FeatureId to) const;

  /// Maximum closed in/out degree (self-loops counted). These are the k_in and
  /// k_out that enter the learners' thresholds and bounds.
  Degrees max_degrees() const;
  /// Same maxima with self-loops excluded, the convention used when reporting
  /// degrees of drawn constructions (a three-node star has degree 2 here).
  Degrees max_degrees_excluding_self_loops() const;

  /// Non-self-loop edges in lexicographic order.
  std::vector<Edge> edges() const;

  /// Symbolic node names assigned by the builders ("x_0", "x_{1,2}", ...).
  /// Graphs built from raw edges are labelled by their decimal index.
  const std::string& label(FeatureId x) const;
  std::optional<FeatureId> find(std::string_view label) const;
  /// Like find() but throws GraphError for unknown labels.
  FeatureId at(std::string_view label) const;
  void set_labels(std::vector<std::string> labels);

  friend bool operator==(const ManipulationGraph& a, const ManipulationGraph& b) {
    return a.node_count_ == b.node_count_ && a.out_offsets_ == b.out_offsets_ &&
           a.out_targets_ == b.out_targets_;
  }

 private:
  ManipulationGraph() = default;

  std::size_t node_count_ = 0;
  // CSR layout for both directions.
  std::vector<std::size_t> out_offsets_;
  std::vector<FeatureId> out_targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<FeatureId> in_sources_;
  std::vector<std::string> labels_;
  std::map<std::string, FeatureId, std::less<>> label_index_;
};

inline ManipulationGraph build_graph(std::size_t node_count, std::span<const Edge> edges) {
  return ManipulationGraph::build(node_count, edges);
}

// Lower-bound constructions. Node ordering is fixed and documented per builder
// so that adversaries and tests can address nodes either by id or by label.

/// Hub x_0 linked both ways to x_1..x_k1; each x_i points to leaves
/// x_{i,1}..x_{i,k2}. Ids: x_0 = 0, x_i = i, x_{i,j} = k1 + (i-1)*k2 + j.
ManipulationGraph make_two_layer(std::size_t k1, std::size_t k2);

/// make_two_layer plus a bidirectional clique on x_1..x_k1 (same ids).
ManipulationGraph make_two_layer_clique(std::size_t k1, std::size_t k2);

/// `count` disjoint three-node stars x_{i,B} <-> x_{i,L}, x_{i,B} <-> x_{i,R}.
/// Ids: x_{i,B} = 3(i-1), x_{i,L} = 3(i-1)+1, x_{i,R} = 3(i-1)+2 for i = 1..count.
ManipulationGraph make_stars(std::size_t count);

/// Single star x_B <-> x_L, x_B <-> x_R with ids B = 0, L = 1, R = 2.
ManipulationGraph make_triangle_star();

/// `copies` disjoint copies of `g`. Copy c (0-based) occupies ids
/// [c*n, (c+1)*n); labels get a "#c" suffix when copies > 1.
ManipulationGraph disjoint_union(const ManipulationGraph& g, std::size_t copies);

// Text format: first line "nodes N", then one "u v" directed edge per line.
// Self-loops are implicit and rejected when listed. '#' starts a comment.
ManipulationGraph read_graph(std::istream& in);
ManipulationGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const ManipulationGraph& g);

}  // namespace strategem
