#include "strategem/agents.hpp"

#include <algorithm>
#include <cmath>

#include "strategem/errors.hpp"

namespace strategem {

TieBreakPolicy TieBreakPolicy::fixed(std::vector<FeatureId> order) {
  TieBreakPolicy p(Kind::kFixed);
  p.order_ = std::move(order);
  return p;
}

TieBreakPolicy TieBreakPolicy::callback(Callback fn) {
  if (!fn) throw std::invalid_argument("tie-break callback must be callable");
  TieBreakPolicy p(Kind::kCallback);
  p.callback_ = std::move(fn);
  return p;
}

TieBreakPolicy TieBreakPolicy::parse(std::string_view name) {
  if (name == "lowest") return lowest();
  if (name == "stay") return stay();
  if (name == "adversary") return adversary();
  if (name == "stay-adversary") return stay_adversary();
  throw ConfigError("unknown tie-break policy '" + std::string(name) +
                    "' (expected lowest, stay, adversary or stay-adversary)");
}

std::string TieBreakPolicy::name() const {
  switch (kind_) {
    case Kind::kLowest: return "lowest";
    case Kind::kStay: return "stay";
    case Kind::kFixed: return "fixed";
    case Kind::kAdversary: return "adversary";
    case Kind::kStayAdversary: return "stay-adversary";
    case Kind::kCallback: return "callback";
  }
  return "unknown";
}

FeatureId TieBreakPolicy::choose(const TieContext& ctx) const {
  const auto& c = ctx.candidates;
  if (c.empty()) throw ContractViolation("tie-break over an empty candidate set");
  auto is_candidate = [&](FeatureId v) { return std::binary_search(c.begin(), c.end(), v); };
  FeatureId choice = c.front();
  switch (kind_) {
    case Kind::kLowest:
      break;
    case Kind::kStay:
      if (is_candidate(ctx.x)) choice = ctx.x;
      break;
    case Kind::kFixed: {
      auto it = std::find_if(order_.begin(), order_.end(), is_candidate);
      if (it != order_.end()) choice = *it;
      break;
    }
    case Kind::kStayAdversary:
      if (is_candidate(ctx.x)) {
        choice = ctx.x;
        break;
      }
      [[fallthrough]];
    case Kind::kAdversary:
      if (ctx.preference && is_candidate(*ctx.preference)) choice = *ctx.preference;
      break;
    case Kind::kCallback:
      choice = callback_(ctx);
      break;
  }
  if (!is_candidate(choice)) {
    throw ContractViolation("tie-break policy chose node " + std::to_string(choice) +
                            ", which is not a best response of node " + std::to_string(ctx.x));
  }
  return choice;
}

FeatureId respond_standard(const BinaryPredictor& h, const ManipulationGraph& g, FeatureId x) {
  if (strategic_label(h, g, x) == 0) return x;
  return best_response_set(h, g, x).front();
}

namespace {

template <typename H>
FeatureId respond_impl(const H& h, const ManipulationGraph& g, FeatureId x, const TieBreakPolicy& policy,
                       std::span<const BinaryPredictor> history, std::optional<FeatureId> preference) {
  const auto candidates = best_response_set(h, g, x);
  return policy.choose(TieContext{x, candidates, history, preference});
}

}  // namespace

FeatureId respond_with_policy(const BinaryPredictor& h, const ManipulationGraph& g, FeatureId x,
                              const TieBreakPolicy& policy, std::span<const BinaryPredictor> history,
                              std::optional<FeatureId> preference) {
  return respond_impl(h, g, x, policy, history, preference);
}

FeatureId respond_with_policy(const FractionalPredictor<double>& h, const ManipulationGraph& g, FeatureId x,
                              const TieBreakPolicy& policy, std::span<const BinaryPredictor> history,
                              std::optional<FeatureId> preference) {
  return respond_impl(h, g, x, policy, history, preference);
}

FeatureId respond_with_policy(const FractionalPredictor<Rational>& h, const ManipulationGraph& g, FeatureId x,
                              const TieBreakPolicy& policy, std::span<const BinaryPredictor> history,
                              std::optional<FeatureId> preference) {
  return respond_impl(h, g, x, policy, history, preference);
}

MeanBasedAlgorithm parse_mean_based_algorithm(std::string_view name) {
  if (name == "mw" || name == "multiplicative-weights") return MeanBasedAlgorithm::kMultiplicativeWeights;
  if (name == "eps-greedy" || name == "epsilon-greedy") return MeanBasedAlgorithm::kEpsilonGreedy;
  throw ConfigError("unknown mean-based algorithm '" + std::string(name) + "' (expected mw or eps-greedy)");
}

RateSchedule parse_rate_schedule(std::string_view name) {
  if (name == "horizon") return RateSchedule::kHorizon;
  if (name == "anytime") return RateSchedule::kAnytime;
  throw ConfigError("unknown rate schedule '" + std::string(name) + "' (expected horizon or anytime)");
}

std::string to_string(MeanBasedAlgorithm a) {
  return a == MeanBasedAlgorithm::kMultiplicativeWeights ? "mw" : "eps-greedy";
}

std::string to_string(RateSchedule s) { return s == RateSchedule::kHorizon ? "horizon" : "anytime"; }

double learning_rate(const MeanBasedAgentState& state, std::size_t t) {
  if (state.fixed_rate) return *state.fixed_rate;
  const double n = state.schedule == RateSchedule::kHorizon ? static_cast<double>(std::max<std::size_t>(1, state.horizon))
                                                             : static_cast<double>(std::max<std::size_t>(1, t));
  return 1.0 / std::sqrt(n);
}

std::vector<double> mean_based_distribution(const MeanBasedAgentState& state, std::span<const double> avg,
                                            const ManipulationGraph& g, FeatureId x, std::size_t t) {
  if (t == 0) throw std::invalid_argument("rounds are numbered from 1");
  const auto out = g.out_neighbors(x);
  const double eps = learning_rate(state, t);
  std::vector<double> p(out.size(), 0.0);
  if (state.algorithm == MeanBasedAlgorithm::kMultiplicativeWeights) {
    // P(v) proportional to exp(eps * (t-1) * avg(v)); shift by the max for stability.
    const double a = eps * static_cast<double>(t - 1);
    double top = avg[out.front()];
    for (auto v : out) top = std::max(top, avg[v]);
    double total = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      p[k] = std::exp(a * (avg[out[k]] - top));
      total += p[k];
    }
    for (auto& q : p) q /= total;
  } else {
    std::size_t best = 0;
    for (std::size_t k = 1; k < out.size(); ++k) {
      if (avg[out[k]] > avg[out[best]]) best = k;
    }
    const double e = std::clamp(eps, 0.0, 1.0);
    for (auto& q : p) q = e / static_cast<double>(out.size());
    p[best] += 1.0 - e;
  }
  return p;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

FeatureId mean_based_respond(MeanBasedAgentState& state, std::span<const double> avg, const ManipulationGraph& g,
                             FeatureId x, std::size_t t) {
  const auto out = g.out_neighbors(x);
  const auto p = mean_based_distribution(state, avg, g, x, t);
  const double u = uniform01(state.rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    acc += p[k];
    if (u < acc) return out[k];
  }
  return out.back();
}

double mw_mean_based_eta(double a) {
  if (a <= 0.0) return 1.0;
  // f(eta) = exp(-a eta) - eta is decreasing; bisect for its root in (0, 1].
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::exp(-a * mid) <= mid) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace strategem
