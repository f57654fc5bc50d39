#include "strategem/agent_models.hpp"

#include <algorithm>

#include "strategem/errors.hpp"

namespace strategem {

RoundOnePolicy parse_round_one_policy(std::string_view name) {
  if (name == "reveal") return RoundOnePolicy::kReveal;
  if (name == "zero") return RoundOnePolicy::kZero;
  throw ConfigError("unknown round-one policy '" + std::string(name) + "' (expected reveal or zero)");
}

std::string to_string(RoundOnePolicy p) { return p == RoundOnePolicy::kReveal ? "reveal" : "zero"; }

AgentModel::AgentModel(std::shared_ptr<const ManipulationGraph> graph, TieBreakPolicy policy)
    : graph_(std::move(graph)), policy_(std::move(policy)) {
  if (!graph_) throw std::invalid_argument("agent model needs a graph");
}

FeatureId AgentModel::choose(std::span<const FeatureId> candidates, FeatureId x,
                             std::optional<FeatureId> preference) const {
  return policy_.choose(TieContext{x, candidates, history_, preference});
}

FeatureId AgentModel::preview(const BinaryPredictor& h_t, FeatureId x, std::optional<FeatureId> preference) const {
  const auto c = candidates(h_t, x);
  return choose(c, x, preference);
}

nlohmann::json AgentModel::diagnostics(const BinaryPredictor& h_t, FeatureId x) const {
  (void)h_t;
  (void)x;
  return nlohmann::json::object();
}

void AgentModel::observe_committed(const BinaryPredictor& h_t) {
  history_.push_back(h_t);
  on_committed(h_t);
}

RevealedStdAgent::RevealedStdAgent(std::shared_ptr<const ManipulationGraph> graph)
    : AgentModel(std::move(graph), TieBreakPolicy::lowest()) {}

std::vector<FeatureId> RevealedStdAgent::candidates(const BinaryPredictor& h_t, FeatureId x) const {
  if (strategic_label(h_t, *graph_, x) == 0) return {x};
  return best_response_set(h_t, *graph_, x);
}

FeatureId RevealedStdAgent::preview(const BinaryPredictor& h_t, FeatureId x, std::optional<FeatureId>) const {
  return respond_standard(h_t, *graph_, x);
}

RevealedArbAgent::RevealedArbAgent(std::shared_ptr<const ManipulationGraph> graph, TieBreakPolicy policy)
    : AgentModel(std::move(graph), std::move(policy)) {}

std::vector<FeatureId> RevealedArbAgent::candidates(const BinaryPredictor& h_t, FeatureId x) const {
  return best_response_set(h_t, *graph_, x);
}

template <typename Scalar>
GammaWeightedAgent<Scalar>::GammaWeightedAgent(std::shared_ptr<const ManipulationGraph> graph,
                                               TieBreakPolicy policy, Scalar gamma, RoundOnePolicy round_one)
    : AgentModel(graph, std::move(policy)), estimator_(gamma, graph->node_count()), round_one_(round_one) {}

template <typename Scalar>
std::vector<FeatureId> GammaWeightedAgent<Scalar>::candidates(const BinaryPredictor& h_t, FeatureId x) const {
  if (estimator_.rounds_seen() == 0) {
    if (round_one_ == RoundOnePolicy::kReveal) return best_response_set(h_t, *graph_, x);
    const auto out = graph_->out_neighbors(x);
    return {out.begin(), out.end()};
  }
  if constexpr (std::is_same_v<Scalar, double>) {
    // The tie tolerance is calibrated for the normalized view in [0, 1].
    return best_response_set(std::span<const double>(estimator_.sums()), *graph_, x, estimator_.scale());
  } else {
    // Positive rescaling leaves exact argmax sets unchanged.
    return best_response_set(std::span<const Rational>(estimator_.sums()), *graph_, x);
  }
}

template <typename Scalar>
nlohmann::json GammaWeightedAgent<Scalar>::diagnostics(const BinaryPredictor& h_t, FeatureId x) const {
  (void)h_t;
  nlohmann::json est = nlohmann::json::object();
  const auto view = estimator_.normalized();
  for (auto v : graph_->out_neighbors(x)) est[std::to_string(v)] = to_double(view(v));
  return {{"est_rounds", estimator_.rounds_seen()}, {"est", est}};
}

template class GammaWeightedAgent<double>;
template class GammaWeightedAgent<Rational>;

PreviousClassifierAgent::PreviousClassifierAgent(std::shared_ptr<const ManipulationGraph> graph,
                                                 TieBreakPolicy policy, RoundOnePolicy round_one)
    : AgentModel(std::move(graph), std::move(policy)), round_one_(round_one) {}

std::vector<FeatureId> PreviousClassifierAgent::candidates(const BinaryPredictor& h_t, FeatureId x) const {
  if (history_.empty()) {
    if (round_one_ == RoundOnePolicy::kReveal) return best_response_set(h_t, *graph_, x);
    const auto out = graph_->out_neighbors(x);
    return {out.begin(), out.end()};
  }
  return best_response_set(history_.back(), *graph_, x);
}

MeanBasedAgent::MeanBasedAgent(std::shared_ptr<const ManipulationGraph> graph, MeanBasedAgentState state)
    : AgentModel(graph, TieBreakPolicy::lowest()), state_(std::move(state)), sums_(graph->node_count(), 0) {}

std::vector<FeatureId> MeanBasedAgent::candidates(const BinaryPredictor&, FeatureId x) const {
  const auto out = graph_->out_neighbors(x);
  return {out.begin(), out.end()};
}

std::vector<double> MeanBasedAgent::average() const {
  std::vector<double> avg(sums_.size(), 0.0);
  if (history_.empty()) return avg;
  const double n = static_cast<double>(history_.size());
  for (std::size_t v = 0; v < sums_.size(); ++v) avg[v] = static_cast<double>(sums_[v]) / n;
  return avg;
}

std::vector<double> MeanBasedAgent::distribution(FeatureId x) const {
  const auto avg = average();
  return mean_based_distribution(state_, avg, *graph_, x, round());
}

FeatureId MeanBasedAgent::preview(const BinaryPredictor&, FeatureId x, std::optional<FeatureId>) const {
  const auto p = distribution(x);
  const auto out = graph_->out_neighbors(x);
  return out[static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin())];
}

FeatureId MeanBasedAgent::respond(const BinaryPredictor&, FeatureId x, std::optional<FeatureId>) {
  const auto avg = average();
  return mean_based_respond(state_, avg, *graph_, x, round());
}

nlohmann::json MeanBasedAgent::diagnostics(const BinaryPredictor&, FeatureId x) const {
  nlohmann::json dist = nlohmann::json::object();
  const auto p = distribution(x);
  const auto out = graph_->out_neighbors(x);
  for (std::size_t k = 0; k < out.size(); ++k) dist[std::to_string(out[k])] = p[k];
  return {{"eps", learning_rate(state_, round())}, {"dist", dist}};
}

void MeanBasedAgent::on_committed(const BinaryPredictor& h_t) {
  for (std::size_t v = 0; v < sums_.size(); ++v) sums_[v] += static_cast<std::size_t>(h_t(static_cast<FeatureId>(v)));
}

}  // namespace strategem
