#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "strategem/graph.hpp"
#include "strategem/predictors.hpp"
#include "strategem/rational.hpp"

namespace strategem {

// Discounted history of committed classifiers.
//
// unnormalized() after n updates is sum_{tau=0}^{n-1} gamma^tau h_{n-tau};
// normalized() rescales it by (1-gamma)/(1-gamma^n). Before the first update
// both views are all-zero.
template <typename Scalar>
class HistoryEstimator {
 public:
  HistoryEstimator(Scalar gamma, std::size_t node_count)
      : gamma_(gamma), sum_(node_count, Scalar(0)), gamma_pow_(1) {
    if (!(gamma_ > Scalar(0) && gamma_ < Scalar(1))) throw std::invalid_argument("gamma must lie in (0, 1)");
  }

  void update(const BinaryPredictor& h) {
    if (h.size() != sum_.size()) throw std::invalid_argument("classifier size does not match estimator");
    for (std::size_t x = 0; x < sum_.size(); ++x) {
      sum_[x] = gamma_ * sum_[x] + Scalar(h(static_cast<FeatureId>(x)));
    }
    gamma_pow_ = gamma_pow_ * gamma_;
    ++rounds_;
  }

  const Scalar& gamma() const { return gamma_; }
  std::size_t rounds_seen() const { return rounds_; }
  std::size_t node_count() const { return sum_.size(); }

  FractionalPredictor<Scalar> unnormalized() const { return {sum_}; }
  const std::vector<Scalar>& sums() const { return sum_; }
  // Factor turning the unnormalized view into the normalized one.
  Scalar scale() const { return rounds_ == 0 ? Scalar(1) : (Scalar(1) - gamma_) / (Scalar(1) - gamma_pow_); }

  FractionalPredictor<Scalar> normalized() const {
    if (rounds_ == 0) return {sum_};
    const Scalar factor = scale();
    FractionalPredictor<Scalar> out{sum_};
    for (auto& v : out.values) v = v * factor;
    return out;
  }

 private:
  Scalar gamma_;
  std::vector<Scalar> sum_;
  Scalar gamma_pow_;
  std::size_t rounds_ = 0;
};

// What a tie-break policy sees when an agent at x must pick from several best
// responses.
struct TieContext {
  FeatureId x = 0;
  std::span<const FeatureId> candidates;   // nonempty, ascending
  std::span<const BinaryPredictor> history;  // h_1..h_{t-1}
  std::optional<FeatureId> preference;      // environment's requested tie-break
};

class TieBreakPolicy {
 public:
  enum class Kind {
    kLowest,         // smallest FeatureId
    kStay,           // x if it is a best response, otherwise smallest FeatureId
    kFixed,          // first candidate in a fixed order
    kAdversary,      // environment's preference when it is a candidate, otherwise smallest
    kStayAdversary,  // x if it is a best response, otherwise as kAdversary
    kCallback,       // user function
  };
  using Callback = std::function<FeatureId(const TieContext&)>;

  static TieBreakPolicy lowest() { return TieBreakPolicy(Kind::kLowest); }
  static TieBreakPolicy stay() { return TieBreakPolicy(Kind::kStay); }
  static TieBreakPolicy fixed(std::vector<FeatureId> order);
  static TieBreakPolicy adversary() { return TieBreakPolicy(Kind::kAdversary); }
  static TieBreakPolicy stay_adversary() { return TieBreakPolicy(Kind::kStayAdversary); }
  static TieBreakPolicy callback(Callback fn);
  // Parses lowest | stay | adversary | stay-adversary.
  static TieBreakPolicy parse(std::string_view name);

  Kind kind() const { return kind_; }
  // True when the environment's preference can influence the choice.
  bool adversarial() const { return kind_ == Kind::kAdversary || kind_ == Kind::kStayAdversary; }
  std::string name() const;

  // Throws ContractViolation if the choice is not a candidate.
  FeatureId choose(const TieContext& ctx) const;

 private:
  explicit TieBreakPolicy(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<FeatureId> order_;
  Callback callback_;
};

// Revealed classifier, standard tie-breaking: stay at x when no reachable node
// is positive, otherwise the smallest positive best response.
FeatureId respond_standard(const BinaryPredictor& h, const ManipulationGraph& g, FeatureId x);

FeatureId respond_with_policy(const BinaryPredictor& h, const ManipulationGraph& g, FeatureId x,
                              const TieBreakPolicy& policy, std::span<const BinaryPredictor> history = {},
                              std::optional<FeatureId> preference = std::nullopt);
FeatureId respond_with_policy(const FractionalPredictor<double>& h, const ManipulationGraph& g, FeatureId x,
                              const TieBreakPolicy& policy, std::span<const BinaryPredictor> history = {},
                              std::optional<FeatureId> preference = std::nullopt);
FeatureId respond_with_policy(const FractionalPredictor<Rational>& h, const ManipulationGraph& g, FeatureId x,
                              const TieBreakPolicy& policy, std::span<const BinaryPredictor> history = {},
                              std::optional<FeatureId> preference = std::nullopt);

// Best response to the estimator's normalized view. With an empty history the
// estimate is all-zero, so every out-neighbour ties and the policy decides.
template <typename Scalar>
FeatureId respond_gamma(const HistoryEstimator<Scalar>& est, const ManipulationGraph& g, FeatureId x,
                        const TieBreakPolicy& policy, std::span<const BinaryPredictor> history = {},
                        std::optional<FeatureId> preference = std::nullopt) {
  return respond_with_policy(est.normalized(), g, x, policy, history, preference);
}

// --- Mean-based agents -------------------------------------------------------

enum class MeanBasedAlgorithm { kMultiplicativeWeights, kEpsilonGreedy };
enum class RateSchedule { kHorizon, kAnytime };  // 1/sqrt(T) or 1/sqrt(t)

MeanBasedAlgorithm parse_mean_based_algorithm(std::string_view name);  // mw | eps-greedy
RateSchedule parse_rate_schedule(std::string_view name);               // horizon | anytime
std::string to_string(MeanBasedAlgorithm a);
std::string to_string(RateSchedule s);

struct MeanBasedAgentState {
  MeanBasedAlgorithm algorithm = MeanBasedAlgorithm::kMultiplicativeWeights;
  RateSchedule schedule = RateSchedule::kHorizon;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  // When set, overrides the schedule (used to pin eps_t, e.g. to 0).
  std::optional<double> fixed_rate;
  std::mt19937_64 rng;

  MeanBasedAgentState() = default;
  MeanBasedAgentState(MeanBasedAlgorithm a, RateSchedule s, std::size_t T, std::uint64_t seed_value)
      : algorithm(a), schedule(s), horizon(T), seed(seed_value), rng(seed_value) {}
};

// eps_t for round t >= 1.
double learning_rate(const MeanBasedAgentState& state, std::size_t t);

// Selection probabilities over g.out_neighbors(x), in that order. `avg` is the
// uniform average of h_1..h_{t-1} over all nodes (all-zero at t = 1).
std::vector<double> mean_based_distribution(const MeanBasedAgentState& state, std::span<const double> avg,
                                            const ManipulationGraph& g, FeatureId x, std::size_t t);

// Samples from mean_based_distribution using the state's generator.
FeatureId mean_based_respond(MeanBasedAgentState& state, std::span<const double> avg, const ManipulationGraph& g,
                             FeatureId x, std::size_t t);

// Smallest eta for which multiplicative weights with exponent rate `a`
// (= eps_t * (t-1)) satisfies the mean-based condition: exp(-a * eta) <= eta.
double mw_mean_based_eta(double a);

// Uniform double in [0, 1) from 53 random bits; platform independent.
double uniform01(std::mt19937_64& rng);

}  // namespace strategem
