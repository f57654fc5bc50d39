#include "strategem/learners.hpp"

#include <algorithm>

#include "strategem/errors.hpp"

namespace strategem {

std::string to_string(MistakeKind k) {
  switch (k) {
    case MistakeKind::kNone: return "none";
    case MistakeKind::kFalsePositive: return "fp";
    case MistakeKind::kFalseNegative: return "fn";
  }
  return "none";
}

namespace {

MistakeKind classify(int predicted, int y) {
  if (predicted == y) return MistakeKind::kNone;
  return predicted == 1 ? MistakeKind::kFalsePositive : MistakeKind::kFalseNegative;
}

void add_weight(std::map<MemberSet, Rational>& experts, MemberSet version, const Rational& w) {
  auto [it, inserted] = experts.try_emplace(std::move(version), w);
  if (!inserted) it->second += w;
}

}  // namespace

// --- WeightedExpertLearner ---------------------------------------------------

WeightedExpertLearner::WeightedExpertLearner(std::shared_ptr<const ManipulationGraph> graph,
                                             std::shared_ptr<const LdimOracle> oracle)
    : graph_(std::move(graph)), oracle_(std::move(oracle)) {
  if (!graph_ || !oracle_) throw std::invalid_argument("alg1 needs a graph and an Ldim oracle");
  if (graph_->node_count() != oracle_->hypotheses().node_count()) {
    throw ConfigError("graph has " + std::to_string(graph_->node_count()) + " nodes but the class is over " +
                      std::to_string(oracle_->hypotheses().node_count()));
  }
  degrees_ = graph_->max_degrees();
  experts_.emplace(oracle_->full(), Rational(1));
}

const BinaryPredictor& WeightedExpertLearner::expert_prediction(const MemberSet& version) const {
  auto it = prediction_cache_.find(version);
  if (it != prediction_cache_.end()) return it->second;
  const auto n = graph_->node_count();
  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    labels[x] = static_cast<std::uint8_t>(oracle_->soa_predict(version, static_cast<FeatureId>(x)));
  }
  return prediction_cache_.emplace(version, BinaryPredictor(std::move(labels))).first->second;
}

Rational WeightedExpertLearner::total_weight() const {
  Rational w(0);
  for (const auto& [_, wa] : experts_) w += wa;
  return w;
}

Rational WeightedExpertLearner::weight_of(const MemberSet& version) const {
  auto it = experts_.find(version);
  return it == experts_.end() ? Rational(0) : it->second;
}

BinaryPredictor WeightedExpertLearner::aggregate() const {
  const auto n = graph_->node_count();
  std::vector<Rational> positive(n, Rational(0));
  for (const auto& [version, w] : experts_) {
    const auto& pred = expert_prediction(version);
    for (std::size_t x = 0; x < n; ++x) {
      if (pred(static_cast<FeatureId>(x)) != 0) positive[x] += w;
    }
  }
  const Rational threshold = total_weight() / Rational(2 * (degrees_.k_out + 1) * (degrees_.k_in + 1));
  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t x = 0; x < n; ++x) labels[x] = positive[x] >= threshold ? 1 : 0;
  return BinaryPredictor(std::move(labels));
}

const BinaryPredictor& WeightedExpertLearner::commit() {
  if (dirty_) {
    current_ = aggregate();
    dirty_ = false;
  }
  return current_;
}

void WeightedExpertLearner::observe(FeatureId v, int y) {
  const auto& h = commit();
  Update u;
  u.kind = classify(h.at(v), y);
  u.weight_before = total_weight();
  if (u.kind == MistakeKind::kNone) {
    u.weight_after = u.weight_before;
    last_update_ = std::move(u);
    return;
  }

  std::map<MemberSet, Rational> next;
  if (u.kind == MistakeKind::kFalsePositive) {
    for (const auto& [version, w] : experts_) {
      if (expert_prediction(version)(v) == 0) {
        add_weight(next, version, w);
        continue;
      }
      ++u.experts_updated;
      auto fed = oracle_->restrict(version, v, 0);
      if (fed.empty()) {
        ++u.experts_dropped;
        continue;
      }
      add_weight(next, std::move(fed), w / 2);
    }
  } else {
    // Candidate original features: in-neighbours of v that see no positive
    // node under h_t, and everything they could reach.
    for (auto x : graph_->in_neighbors(v)) {
      const auto out = graph_->out_neighbors(x);
      if (std::none_of(out.begin(), out.end(), [&](FeatureId z) { return h(z) != 0; })) {
        u.candidates_x.push_back(x);
        u.candidates_v.insert(u.candidates_v.end(), out.begin(), out.end());
      }
    }
    std::sort(u.candidates_v.begin(), u.candidates_v.end());
    u.candidates_v.erase(std::unique(u.candidates_v.begin(), u.candidates_v.end()), u.candidates_v.end());
    if (u.candidates_v.empty()) {
      throw InternalError("false negative at node " + std::to_string(v) + " with no candidate original feature");
    }
    const Rational share = Rational(1) / Rational(2 * u.candidates_v.size());
    for (const auto& [version, w] : experts_) {
      const auto& pred = expert_prediction(version);
      const bool silent =
          std::all_of(u.candidates_v.begin(), u.candidates_v.end(), [&](FeatureId z) { return pred(z) == 0; });
      if (!silent) {
        add_weight(next, version, w);
        continue;
      }
      ++u.experts_updated;
      const Rational child_weight = w * share;
      for (auto z : u.candidates_v) {
        auto fed = oracle_->restrict(version, z, 1);
        if (fed.empty()) {
          ++u.experts_dropped;
          continue;
        }
        add_weight(next, std::move(fed), child_weight);
      }
    }
  }
  if (next.empty()) throw RealizabilityError("every expert's version space became empty");
  experts_ = std::move(next);
  u.weight_after = total_weight();
  last_update_ = std::move(u);
  dirty_ = true;
  // Keep the cache bounded to live experts.
  for (auto it = prediction_cache_.begin(); it != prediction_cache_.end();) {
    it = experts_.count(it->first) != 0 ? std::next(it) : prediction_cache_.erase(it);
  }
}

nlohmann::json WeightedExpertLearner::diagnostics() const {
  nlohmann::json d = {{"experts", experts_.size()}, {"W", to_double(total_weight())}};
  if (last_update_ && last_update_->kind != MistakeKind::kNone) {
    const auto& u = *last_update_;
    d["update"] = to_string(u.kind);
    d["W_before"] = to_double(u.weight_before);
    d["W_after"] = to_double(u.weight_after);
    if (u.kind == MistakeKind::kFalseNegative) {
      d["X_tilde"] = u.candidates_x;
      d["V_tilde"] = u.candidates_v;
    }
  }
  return d;
}

// --- ConservativeUnionLearner ------------------------------------------------

ConservativeUnionLearner::ConservativeUnionLearner(std::shared_ptr<const HypothesisClass> H)
    : H_(std::move(H)), version_(MemberSet::full(H_->size())) {}

const BinaryPredictor& ConservativeUnionLearner::commit() {
  if (dirty_) {
    std::vector<std::uint8_t> labels(H_->node_count(), 0);
    version_.for_each([&](std::size_t i) {
      const auto& h = (*H_)[i];
      for (std::size_t x = 0; x < labels.size(); ++x) labels[x] |= static_cast<std::uint8_t>(h(static_cast<FeatureId>(x)));
    });
    current_ = BinaryPredictor(std::move(labels));
    dirty_ = false;
  }
  return current_;
}

void ConservativeUnionLearner::observe(FeatureId v, int y) {
  last_mistake_ = classify(commit().at(v), y);
  if (last_mistake_ == MistakeKind::kNone || y != 0) return;
  auto next = version_;
  version_.for_each([&](std::size_t i) {
    if ((*H_)[i](v) != 0) next.erase(i);
  });
  if (next.empty()) {
    throw RealizabilityError("alg2 removed every hypothesis after a false positive at node " + std::to_string(v));
  }
  version_ = std::move(next);
  dirty_ = true;
}

nlohmann::json ConservativeUnionLearner::diagnostics() const {
  return {{"version_size", version_.count()}, {"mistake", to_string(last_mistake_)}};
}

// --- DelayedReductionLearner -------------------------------------------------

DelayedReductionLearner::DelayedReductionLearner(std::unique_ptr<Learner> inner, std::size_t phi)
    : inner_(std::move(inner)), phi_threshold_(phi) {
  if (!inner_) throw std::invalid_argument("delayed reduction needs an inner learner");
  if (phi_threshold_ == 0) throw std::invalid_argument("update frequency must be positive");
}

const BinaryPredictor& DelayedReductionLearner::commit() {
  if (!current_) current_ = inner_->commit();
  return *current_;
}

void DelayedReductionLearner::observe(FeatureId v, int y) {
  const auto& h = commit();
  ++run_;
  run_before_update_ = run_;
  updated_ = false;
  if (h.at(v) == y) return;
  if (++phi_ < phi_threshold_) return;
  inner_->observe(v, y);
  ++clock_;
  phi_ = 0;
  run_ = 0;
  updated_ = true;
  current_.reset();
}

nlohmann::json DelayedReductionLearner::diagnostics() const {
  nlohmann::json d = {{"phi", phi_},           {"Phi", phi_threshold_},   {"clock", clock_},
                      {"updated", updated_},   {"run", run_before_update_}};
  if (updated_) d["inner"] = inner_->diagnostics();
  return d;
}

// --- SoaNaiveLearner ---------------------------------------------------------

SoaNaiveLearner::SoaNaiveLearner(std::shared_ptr<const LdimOracle> oracle)
    : oracle_(std::move(oracle)), version_(oracle_->full()) {}

const BinaryPredictor& SoaNaiveLearner::commit() {
  if (dirty_) {
    const auto n = oracle_->hypotheses().node_count();
    std::vector<std::uint8_t> labels(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      labels[x] = static_cast<std::uint8_t>(oracle_->soa_predict(version_, static_cast<FeatureId>(x)));
    }
    current_ = BinaryPredictor(std::move(labels));
    dirty_ = false;
  }
  return current_;
}

void SoaNaiveLearner::observe(FeatureId v, int y) {
  if (commit().at(v) == y) return;
  auto next = oracle_->restrict(version_, v, y);
  if (next.empty()) {
    ++skipped_;
    return;
  }
  version_ = std::move(next);
  dirty_ = true;
}

nlohmann::json SoaNaiveLearner::diagnostics() const {
  return {{"version_size", version_.count()}, {"skipped", skipped_}};
}

}  // namespace strategem
