#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strategem/agent_models.hpp"
#include "strategem/predictors.hpp"

namespace strategem {

// Public state an environment may look at before choosing round t's agent:
// the classifier committed this round and everything committed before it.
struct RoundView {
  std::size_t t = 1;
  const BinaryPredictor& committed;
  std::span<const BinaryPredictor> past;  // h_1..h_{t-1}
  const AgentModel& agent;
};

struct Emission {
  FeatureId x = 0;
  int y = 0;
  std::optional<FeatureId> tie_preference;
  // Set when x is a placeholder whose real value is fixed only when the
  // adversary commits to its target (see Environment::resolve_x).
  std::optional<std::size_t> deferred_copy;
};

struct RoundRecord {
  std::size_t t = 0;
  FeatureId x = 0;
  FeatureId v = 0;
  int y = 0;
  int prediction = 0;
  bool mistake = false;
  std::optional<std::size_t> deferred_copy;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::string name() const = 0;

  // Agent for round t, or nullopt when the environment has nothing left to
  // play (stream exhausted or adversary out of moves).
  virtual std::optional<Emission> emit(const RoundView& view) = 0;
  virtual void observe(const RoundRecord& record) { (void)record; }

  // Index (into the class) of the hypothesis the stream is realizable under.
  // Lazy adversaries report their final choice once the game is over.
  virtual std::optional<std::size_t> target() const = 0;
  // Actual original feature of a row emitted with a deferred placeholder.
  virtual FeatureId resolve_x(const RoundRecord& record) const { return record.x; }

  virtual nlohmann::json diagnostics() const { return nlohmann::json::object(); }
  virtual std::string end_reason() const { return {}; }
  // Mistakes this construction certifies against any deterministic learner.
  virtual std::optional<double> certified_lower_bound() const { return std::nullopt; }
};

// h* drawn uniformly from the class, x_t uniform over nodes, y_t = h*(BR_{h*}(x_t)).
// With `seek_ties`, the tie preference asks the agent for a best response the
// learner misclassifies whenever one exists.
class RandomRealizableStream final : public Environment {
 public:
  RandomRealizableStream(std::shared_ptr<const ManipulationGraph> graph, std::shared_ptr<const HypothesisClass> H,
                         std::uint64_t seed, std::size_t T, bool seek_ties);

  std::string name() const override { return "random"; }
  std::optional<Emission> emit(const RoundView& view) override;
  std::optional<std::size_t> target() const override { return target_; }
  std::string end_reason() const override { return "stream-exhausted"; }

  const std::vector<AgentExample>& examples() const { return examples_; }

 private:
  std::shared_ptr<const ManipulationGraph> graph_;
  std::shared_ptr<const HypothesisClass> H_;
  std::size_t target_ = 0;
  std::vector<AgentExample> examples_;
  bool seek_ties_;
};

// Draws the (h*, stream) pair of RandomRealizableStream without a game.
std::pair<std::size_t, std::vector<AgentExample>> random_realizable_stream(const ManipulationGraph& g,
                                                                            const HypothesisClass& H,
                                                                            std::uint64_t seed, std::size_t T);

// Replays "x y" lines from a file. The target is the first class member that
// realizes the whole stream, if any.
class StreamEnvironment final : public Environment {
 public:
  StreamEnvironment(std::vector<AgentExample> examples, std::optional<std::size_t> target, bool seek_ties);

  std::string name() const override { return "stream"; }
  std::optional<Emission> emit(const RoundView& view) override;
  std::optional<std::size_t> target() const override { return target_; }
  std::string end_reason() const override { return "stream-exhausted"; }

 private:
  std::vector<AgentExample> examples_;
  std::optional<std::size_t> target_;
  bool seek_ties_;
};

std::vector<AgentExample> read_stream(std::istream& in, std::size_t node_count);
std::vector<AgentExample> read_stream_file(const std::string& path, std::size_t node_count);

// Tie preference that makes the agent's (previewed) response misclassified by
// h_t, if the agent's candidate set offers one.
std::optional<FeatureId> seek_mistake(const RoundView& view, FeatureId x, int y);

}  // namespace strategem
