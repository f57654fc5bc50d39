#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strategem/bounds.hpp"
#include "strategem/ldim.hpp"

namespace strategem {

// Deterministic online learner. Per round the loop calls commit() once, then
// observe() with the post-manipulation node and the true label. The learner
// never sees the agent's original feature.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  // h_t. The reference stays valid until the next observe().
  virtual const BinaryPredictor& commit() = 0;
  virtual void observe(FeatureId v, int y) = 0;
  virtual nlohmann::json diagnostics() const { return nlohmann::json::object(); }
};

enum class MistakeKind { kNone, kFalsePositive, kFalseNegative };
std::string to_string(MistakeKind k);

// Weighted experts over SOA version spaces; predicts 1 at x when the experts
// voting 1 hold at least W / (2(k_out+1)(k_in+1)) of the total weight.
//
// Weights are exact rationals. Experts whose version space becomes empty are
// dropped (they cannot be the expert tracking the target); experts with equal
// version spaces are merged by adding weights.
class WeightedExpertLearner : public Learner {
 public:
  struct Update {
    MistakeKind kind = MistakeKind::kNone;
    std::vector<FeatureId> candidates_x;  // X~_t (false negatives only)
    std::vector<FeatureId> candidates_v;  // V~_t (false negatives only)
    Rational weight_before;
    Rational weight_after;
    std::size_t experts_updated = 0;
    std::size_t experts_dropped = 0;
  };

  WeightedExpertLearner(std::shared_ptr<const ManipulationGraph> graph, std::shared_ptr<const LdimOracle> oracle);

  std::string name() const override { return "alg1"; }
  const BinaryPredictor& commit() override;
  void observe(FeatureId v, int y) override;
  nlohmann::json diagnostics() const override;

  const Degrees& degrees() const { return degrees_; }
  Rational total_weight() const;
  Rational weight_of(const MemberSet& version) const;
  std::size_t expert_count() const { return experts_.size(); }
  const std::map<MemberSet, Rational>& experts() const { return experts_; }
  // Prediction of the expert running SOA on `version`, at every node.
  const BinaryPredictor& expert_prediction(const MemberSet& version) const;
  const std::optional<Update>& last_update() const { return last_update_; }
  const LdimOracle& oracle() const { return *oracle_; }

 protected:
  // Aggregation rule producing h_t from the current experts. Overridable so test
  // fixtures can substitute a broken rule.
  virtual BinaryPredictor aggregate() const;

 private:
  std::shared_ptr<const ManipulationGraph> graph_;
  std::shared_ptr<const LdimOracle> oracle_;
  Degrees degrees_;
  std::map<MemberSet, Rational> experts_;
  mutable std::map<MemberSet, BinaryPredictor> prediction_cache_;
  BinaryPredictor current_;
  bool dirty_ = true;
  std::optional<Update> last_update_;
};

// Predicts the union of the surviving hypotheses; after a mistake with y = 0
// drops every survivor labelling v positive.
class ConservativeUnionLearner final : public Learner {
 public:
  explicit ConservativeUnionLearner(std::shared_ptr<const HypothesisClass> H);

  std::string name() const override { return "alg2"; }
  const BinaryPredictor& commit() override;
  void observe(FeatureId v, int y) override;
  nlohmann::json diagnostics() const override;

  const MemberSet& version() const { return version_; }
  MistakeKind last_mistake() const { return last_mistake_; }

 private:
  std::shared_ptr<const HypothesisClass> H_;
  MemberSet version_;
  BinaryPredictor current_;
  bool dirty_ = true;
  MistakeKind last_mistake_ = MistakeKind::kNone;
};

// Wraps a learner and only feeds it every Phi-th mistake, keeping the committed
// classifier fixed in between.
class DelayedReductionLearner final : public Learner {
 public:
  DelayedReductionLearner(std::unique_ptr<Learner> inner, std::size_t phi);

  std::string name() const override { return "alg3(inner=" + inner_->name() + ")"; }
  const BinaryPredictor& commit() override;
  void observe(FeatureId v, int y) override;
  nlohmann::json diagnostics() const override;

  std::size_t phi_threshold() const { return phi_threshold_; }
  std::size_t mistakes_since_update() const { return phi_; }
  std::size_t inner_clock() const { return clock_; }
  // True when the last observe() fed the inner learner.
  bool updated_last_round() const { return updated_; }
  // Consecutive rounds the current classifier had been committed for, counted
  // at the last observe() (including that round).
  std::size_t constant_run() const { return run_before_update_; }
  const Learner& inner() const { return *inner_; }

 private:
  std::unique_ptr<Learner> inner_;
  std::size_t phi_threshold_;
  std::size_t phi_ = 0;
  std::size_t clock_ = 1;
  std::size_t run_ = 0;
  std::size_t run_before_update_ = 0;
  bool updated_ = false;
  std::optional<BinaryPredictor> current_;
};

// Commits a fixed hypothesis forever.
class OracleLearner final : public Learner {
 public:
  explicit OracleLearner(BinaryPredictor h) : h_(std::move(h)) {}
  std::string name() const override { return "oracle"; }
  const BinaryPredictor& commit() override { return h_; }
  void observe(FeatureId, int) override {}

 private:
  BinaryPredictor h_;
};

// SOA applied to the observed (v_t, y_t) as if they were non-strategic
// examples. Updates on mistakes only; an update that would empty the version
// space is skipped and counted.
class SoaNaiveLearner final : public Learner {
 public:
  explicit SoaNaiveLearner(std::shared_ptr<const LdimOracle> oracle);

  std::string name() const override { return "soa-naive"; }
  const BinaryPredictor& commit() override;
  void observe(FeatureId v, int y) override;
  nlohmann::json diagnostics() const override;

  const MemberSet& version() const { return version_; }
  std::size_t skipped_updates() const { return skipped_; }

 private:
  std::shared_ptr<const LdimOracle> oracle_;
  MemberSet version_;
  BinaryPredictor current_;
  bool dirty_ = true;
  std::size_t skipped_ = 0;
};

}  // namespace strategem
