#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "strategem/errors.hpp"
#include "strategem/graph.hpp"
#include "strategem/rational.hpp"

namespace strategem {

// Total 0/1 labelling of a graph's nodes.
class BinaryPredictor {
 public:
  BinaryPredictor() = default;
  explicit BinaryPredictor(std::vector<std::uint8_t> labels);

  static BinaryPredictor zeros(std::size_t n) { return BinaryPredictor(std::vector<std::uint8_t>(n, 0)); }
  static BinaryPredictor indicator(std::size_t n, std::span<const FeatureId> positives);
  // Parses a '0'/'1' string.
  static BinaryPredictor from_string(std::string_view bits);

  std::size_t size() const { return labels_.size(); }
  int operator()(FeatureId x) const { return labels_[x]; }
  int at(FeatureId x) const { return labels_.at(x); }
  void set(FeatureId x, int value) { labels_.at(x) = value != 0 ? 1 : 0; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  bool all_zero() const;
  std::string to_string() const;

  friend bool operator==(const BinaryPredictor&, const BinaryPredictor&) = default;
  friend bool operator<(const BinaryPredictor& a, const BinaryPredictor& b) { return a.labels_ < b.labels_; }

 private:
  std::vector<std::uint8_t> labels_;
};

// Values in [0, 1] (or any nonnegative scale for unnormalized estimator views).
template <typename Scalar>
struct FractionalPredictor {
  std::vector<Scalar> values;

  std::size_t size() const { return values.size(); }
  const Scalar& operator()(FeatureId x) const { return values[x]; }
};

// Finite ordered class of distinct binary predictors over the same node set.
class HypothesisClass {
 public:
  // Throws std::invalid_argument when empty, ragged, or containing duplicates.
  explicit HypothesisClass(std::vector<BinaryPredictor> members);

  std::size_t size() const { return members_.size(); }
  std::size_t node_count() const { return members_.front().size(); }
  const BinaryPredictor& operator[](std::size_t i) const { return members_[i]; }
  const BinaryPredictor& at(std::size_t i) const { return members_.at(i); }
  const std::vector<BinaryPredictor>& members() const { return members_; }
  std::optional<std::size_t> index_of(const BinaryPredictor& h) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::vector<BinaryPredictor> members_;
};

struct AgentExample {
  FeatureId x = 0;
  int y = 0;

  friend bool operator==(const AgentExample&, const AgentExample&) = default;
};

// Tolerance for ties in floating-point best responses.
inline constexpr double kTieTolerance = 1e-9;

// BR_h(x): out-neighbours of x attaining the maximum of h. Sorted ascending.
std::vector<FeatureId> best_response_set(const BinaryPredictor& h, const ManipulationGraph& g, FeatureId x);
std::vector<FeatureId> best_response_set(const FractionalPredictor<double>& h, const ManipulationGraph& g,
                                         FeatureId x);
std::vector<FeatureId> best_response_set(const FractionalPredictor<Rational>& h, const ManipulationGraph& g,
                                         FeatureId x);

// Same argmax over a raw value table indexed by FeatureId; `scale` multiplies
// every value before the tolerance comparison.
std::vector<FeatureId> best_response_set(std::span<const double> values, const ManipulationGraph& g, FeatureId x,
                                         double scale = 1.0);
std::vector<FeatureId> best_response_set(std::span<const Rational> values, const ManipulationGraph& g, FeatureId x);

// h(BR_h(x)) for binary h: 1 iff some out-neighbour of x is labelled 1. This is
// the label an agent at x receives when best responding to h.
int strategic_label(const BinaryPredictor& h, const ManipulationGraph& g, FeatureId x);

// Indices of the members h with h(BR_h(x)) = y for every example.
std::vector<std::size_t> check_realizable(std::span<const AgentExample> seq, const HypothesisClass& H,
                                          const ManipulationGraph& g);

// h_i positive on x_{i,R} and on x_{j,L} for j != i (ids as in make_stars).
HypothesisClass make_star_class(std::size_t count);

// h_{i,j} = 1{x_{i,j}} over the leaves of make_two_layer / make_two_layer_clique,
// ordered by (i, j).
HypothesisClass make_leaf_singletons(std::size_t k1, std::size_t k2);

// Product of `copies` independent copies of a class over a node set of size n,
// laid out as in disjoint_union. Member index is the mixed-radix number of the
// per-copy indices with copy 0 most significant.
HypothesisClass product_class(const HypothesisClass& per_copy, std::size_t copies);

// One '0'/'1' string per line; blank lines and '#' comments are skipped.
HypothesisClass read_class(std::istream& in);
HypothesisClass read_class_file(const std::string& path);
void write_class(std::ostream& out, const HypothesisClass& H);

}  // namespace strategem
