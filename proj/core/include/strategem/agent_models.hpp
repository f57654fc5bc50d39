#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "strategem/agents.hpp"

namespace strategem {

// What a gamma-style agent does in round 1, before any classifier was deployed.
enum class RoundOnePolicy {
  kReveal,  // best respond to h_1 as if it were revealed
  kZero,    // best respond to the all-zero estimate (every neighbour ties)
};
RoundOnePolicy parse_round_one_policy(std::string_view name);  // reveal | zero
std::string to_string(RoundOnePolicy p);

// Agent behaviour model used by the game loop. Owns whatever history the model
// needs; the loop reports each committed classifier after the round through
// observe_committed().
class AgentModel {
 public:
  AgentModel(std::shared_ptr<const ManipulationGraph> graph, TieBreakPolicy policy);
  virtual ~AgentModel() = default;

  virtual std::string name() const = 0;

  // Set the agent at x chooses from this round (its best-response set, or the
  // support of its distribution for randomized models).
  virtual std::vector<FeatureId> candidates(const BinaryPredictor& h_t, FeatureId x) const = 0;

  // Deterministic response, used by adversaries for lookahead. For randomized
  // models this is the most likely response.
  virtual FeatureId preview(const BinaryPredictor& h_t, FeatureId x, std::optional<FeatureId> preference) const;

  // Actual response; may consume randomness.
  virtual FeatureId respond(const BinaryPredictor& h_t, FeatureId x, std::optional<FeatureId> preference) {
    return preview(h_t, x, preference);
  }

  virtual bool deterministic() const { return true; }

  // Model-specific state for the per-round diagnostics column.
  virtual nlohmann::json diagnostics(const BinaryPredictor& h_t, FeatureId x) const;

  void observe_committed(const BinaryPredictor& h_t);

  const ManipulationGraph& graph() const { return *graph_; }
  const TieBreakPolicy& policy() const { return policy_; }
  // h_1..h_{t-1}
  const std::vector<BinaryPredictor>& history() const { return history_; }
  std::size_t round() const { return history_.size() + 1; }

 protected:
  virtual void on_committed(const BinaryPredictor& h_t) { (void)h_t; }
  FeatureId choose(std::span<const FeatureId> candidates, FeatureId x, std::optional<FeatureId> preference) const;

  std::shared_ptr<const ManipulationGraph> graph_;
  TieBreakPolicy policy_;
  std::vector<BinaryPredictor> history_;
};

// Sees h_t; stays put unless a positive node is reachable.
class RevealedStdAgent final : public AgentModel {
 public:
  explicit RevealedStdAgent(std::shared_ptr<const ManipulationGraph> graph);
  std::string name() const override { return "revealed-std"; }
  std::vector<FeatureId> candidates(const BinaryPredictor& h_t, FeatureId x) const override;
  FeatureId preview(const BinaryPredictor& h_t, FeatureId x, std::optional<FeatureId> preference) const override;
};

// Sees h_t; the tie-break policy picks among all best responses.
class RevealedArbAgent final : public AgentModel {
 public:
  RevealedArbAgent(std::shared_ptr<const ManipulationGraph> graph, TieBreakPolicy policy);
  std::string name() const override { return "revealed-arb"; }
  std::vector<FeatureId> candidates(const BinaryPredictor& h_t, FeatureId x) const override;
};

// Best responds to the discounted average of h_1..h_{t-1}.
template <typename Scalar>
class GammaWeightedAgent final : public AgentModel {
 public:
  GammaWeightedAgent(std::shared_ptr<const ManipulationGraph> graph, TieBreakPolicy policy, Scalar gamma,
                     RoundOnePolicy round_one);
  std::string name() const override { return "gamma-weighted"; }
  std::vector<FeatureId> candidates(const BinaryPredictor& h_t, FeatureId x) const override;
  nlohmann::json diagnostics(const BinaryPredictor& h_t, FeatureId x) const override;

  const HistoryEstimator<Scalar>& estimator() const { return estimator_; }
  RoundOnePolicy round_one() const { return round_one_; }

 protected:
  void on_committed(const BinaryPredictor& h_t) override { estimator_.update(h_t); }

 private:
  HistoryEstimator<Scalar> estimator_;
  RoundOnePolicy round_one_;
};

extern template class GammaWeightedAgent<double>;
extern template class GammaWeightedAgent<Rational>;

// The gamma -> 0 limit: best responds to h_{t-1} only.
class PreviousClassifierAgent final : public AgentModel {
 public:
  PreviousClassifierAgent(std::shared_ptr<const ManipulationGraph> graph, TieBreakPolicy policy,
                          RoundOnePolicy round_one);
  std::string name() const override { return "gamma-zero"; }
  std::vector<FeatureId> candidates(const BinaryPredictor& h_t, FeatureId x) const override;
  RoundOnePolicy round_one() const { return round_one_; }

 private:
  RoundOnePolicy round_one_;
};

// Runs a mean-based learning algorithm over N_out[x] with rewards h_1..h_{t-1}.
class MeanBasedAgent final : public AgentModel {
 public:
  MeanBasedAgent(std::shared_ptr<const ManipulationGraph> graph, MeanBasedAgentState state);
  std::string name() const override { return "mean-based"; }
  std::vector<FeatureId> candidates(const BinaryPredictor& h_t, FeatureId x) const override;
  FeatureId preview(const BinaryPredictor& h_t, FeatureId x, std::optional<FeatureId> preference) const override;
  FeatureId respond(const BinaryPredictor& h_t, FeatureId x, std::optional<FeatureId> preference) override;
  bool deterministic() const override { return false; }
  nlohmann::json diagnostics(const BinaryPredictor& h_t, FeatureId x) const override;

  // Uniform average of h_1..h_{t-1} per node (all-zero before round 2).
  std::vector<double> average() const;
  const std::vector<std::size_t>& cumulative() const { return sums_; }
  const MeanBasedAgentState& state() const { return state_; }
  std::vector<double> distribution(FeatureId x) const;

 protected:
  void on_committed(const BinaryPredictor& h_t) override;

 private:
  MeanBasedAgentState state_;
  std::vector<std::size_t> sums_;
};

}  // namespace strategem
