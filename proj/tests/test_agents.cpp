#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "strategem/agent_models.hpp"
#include "strategem/errors.hpp"

using namespace strategem;

namespace {

std::vector<BinaryPredictor> random_history(std::mt19937_64& rng, std::size_t n, std::size_t len) {
  std::vector<BinaryPredictor> out;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = coin(rng);
    out.emplace_back(bits);
  }
  return out;
}

// sum_{tau=1}^{n} gamma^{n-tau} h_tau(x), summed forwards with explicit powers.
double direct_sum(const std::vector<BinaryPredictor>& hs, double gamma, FeatureId x) {
  double s = 0;
  for (std::size_t tau = 0; tau < hs.size(); ++tau) s += std::pow(gamma, double(hs.size() - 1 - tau)) * hs[tau](x);
  return s;
}

auto shared(ManipulationGraph g) { return std::make_shared<const ManipulationGraph>(std::move(g)); }

}  // namespace

TEST(Estimator, RecurrenceMatchesDirectSum) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const double gamma = 0.05 + 0.9 * (double(rng() % 1000) / 1000.0);
    const auto hs = random_history(rng, 5, 1 + rng() % 50);
    HistoryEstimator<double> est(gamma, 5);
    for (const auto& h : hs) est.update(h);
    const double norm = (1 - gamma) / (1 - std::pow(gamma, double(hs.size())));
    for (FeatureId x = 0; x < 5; ++x) {
      ASSERT_NEAR(est.unnormalized()(x), direct_sum(hs, gamma, x), 1e-9);
      ASSERT_NEAR(est.normalized()(x), norm * direct_sum(hs, gamma, x), 1e-9);
    }
  }
}

TEST(Estimator, ExactModeIsExact) {
  std::mt19937_64 rng(4);
  const Rational gamma(7, 10);
  const auto hs = random_history(rng, 4, 30);
  HistoryEstimator<Rational> est(gamma, 4);
  for (const auto& h : hs) est.update(h);
  for (FeatureId x = 0; x < 4; ++x) {
    Rational s = 0;
    for (std::size_t tau = 0; tau < hs.size(); ++tau) s += power(gamma, hs.size() - 1 - tau) * hs[tau](x);
    EXPECT_EQ(est.unnormalized()(x), s);
    // The normalized view is a probability-like average in [0, 1].
    EXPECT_GE(est.normalized()(x), 0);
    EXPECT_LE(est.normalized()(x), 1);
  }
}

TEST(Estimator, ConstantHistoryNormalizesToItself) {
  const auto h = BinaryPredictor::from_string("1010");
  HistoryEstimator<Rational> est(Rational(1, 2), 4);
  for (int i = 0; i < 7; ++i) est.update(h);
  for (FeatureId x = 0; x < 4; ++x) EXPECT_EQ(est.normalized()(x), Rational(h(x)));
}

TEST(Estimator, RejectsBadGamma) {
  EXPECT_THROW(HistoryEstimator<double>(0.0, 2), std::invalid_argument);
  EXPECT_THROW(HistoryEstimator<double>(1.0, 2), std::invalid_argument);
}

TEST(TieBreak, Policies) {
  const std::vector<FeatureId> cands{2, 4, 7};
  TieContext ctx{4, cands, {}, 7};
  EXPECT_EQ(TieBreakPolicy::lowest().choose(ctx), 2U);
  EXPECT_EQ(TieBreakPolicy::stay().choose(ctx), 4U);
  EXPECT_EQ(TieBreakPolicy::adversary().choose(ctx), 7U);
  EXPECT_EQ(TieBreakPolicy::stay_adversary().choose(ctx), 4U);
  EXPECT_EQ(TieBreakPolicy::fixed({9, 7, 2}).choose(ctx), 7U);
  ctx.x = 0;
  ctx.preference = 5;  // not a candidate: ignored
  EXPECT_EQ(TieBreakPolicy::adversary().choose(ctx), 2U);
  EXPECT_EQ(TieBreakPolicy::stay_adversary().choose(ctx), 2U);
  const auto bad = TieBreakPolicy::callback([](const TieContext&) { return FeatureId{99}; });
  EXPECT_THROW(bad.choose(ctx), ContractViolation);
  EXPECT_EQ(TieBreakPolicy::parse("stay-adversary").kind(), TieBreakPolicy::Kind::kStayAdversary);
  EXPECT_THROW(TieBreakPolicy::parse("sideways"), std::exception);
}

TEST(Responses, StandardStaysWhenNothingPositive) {
  const auto g = make_two_layer(2, 2);
  EXPECT_EQ(respond_standard(BinaryPredictor::zeros(7), g, 1), 1U);
  const auto h = BinaryPredictor::from_string("0000110");
  EXPECT_EQ(respond_standard(h, g, 1), 3U + 1U);
  EXPECT_EQ(respond_standard(h, g, 4), 4U);
  // Arbitrary tie-breaking may move among negatives.
  EXPECT_EQ(respond_with_policy(BinaryPredictor::zeros(7), g, 1, TieBreakPolicy::adversary(), {}, 3), 3U);
}

TEST(Responses, AgentModelsSeeTheRightClassifier) {
  auto g = shared(make_triangle_star());
  const auto left = BinaryPredictor::from_string("010");
  const auto right = BinaryPredictor::from_string("001");

  RevealedStdAgent revealed(g);
  EXPECT_EQ(revealed.preview(right, 0, std::nullopt), 2U);

  PreviousClassifierAgent prev(g, TieBreakPolicy::lowest(), RoundOnePolicy::kReveal);
  EXPECT_EQ(prev.preview(right, 0, std::nullopt), 2U);  // round 1 reveals
  prev.observe_committed(left);
  EXPECT_EQ(prev.preview(right, 0, std::nullopt), 1U);  // answers h_1, not h_2

  GammaWeightedAgent<Rational> gw(g, TieBreakPolicy::lowest(), Rational(1, 2), RoundOnePolicy::kZero);
  EXPECT_EQ(gw.candidates(right, 0), (std::vector<FeatureId>{0, 1, 2}));
  gw.observe_committed(left);
  gw.observe_committed(right);
  // Estimate: L = 1/2, R = 1 (unnormalized), so R wins.
  EXPECT_EQ(gw.preview(left, 0, std::nullopt), 2U);
}

TEST(Responses, ExactAndFloatGammaAgentsAgree) {
  std::mt19937_64 rng(8);
  auto g = shared(make_two_layer_clique(2, 3));
  for (int trial = 0; trial < 50; ++trial) {
    GammaWeightedAgent<Rational> exact(g, TieBreakPolicy::lowest(), Rational(3, 10), RoundOnePolicy::kReveal);
    GammaWeightedAgent<double> flt(g, TieBreakPolicy::lowest(), 0.3, RoundOnePolicy::kReveal);
    for (const auto& h : random_history(rng, g->node_count(), 1 + rng() % 20)) {
      exact.observe_committed(h);
      flt.observe_committed(h);
    }
    const auto probe = BinaryPredictor::zeros(g->node_count());
    for (FeatureId x = 0; x < g->node_count(); ++x) {
      ASSERT_EQ(exact.candidates(probe, x), flt.candidates(probe, x));
    }
  }
}

TEST(MeanBased, MultiplicativeWeightsDistribution) {
  const auto g = make_triangle_star();
  MeanBasedAgentState st(MeanBasedAlgorithm::kMultiplicativeWeights, RateSchedule::kHorizon, 100, 1);
  const std::vector<double> avg{0.0, 0.6, 0.2};
  const std::size_t t = 11;
  const auto p = mean_based_distribution(st, avg, g, 0, t);
  const double a = 0.1 * 10;
  const double z = std::exp(a * 0.0) + std::exp(a * 0.6) + std::exp(a * 0.2);
  ASSERT_EQ(p.size(), 3U);
  EXPECT_NEAR(p[0], std::exp(0.0) / z, 1e-12);
  EXPECT_NEAR(p[1], std::exp(a * 0.6) / z, 1e-12);
  EXPECT_NEAR(p[2], std::exp(a * 0.2) / z, 1e-12);
  // Round 1 is uniform.
  for (double q : mean_based_distribution(st, avg, g, 0, 1)) EXPECT_NEAR(q, 1.0 / 3, 1e-12);
}

TEST(MeanBased, EpsilonGreedyDistribution) {
  const auto g = make_triangle_star();
  MeanBasedAgentState st(MeanBasedAlgorithm::kEpsilonGreedy, RateSchedule::kAnytime, 100, 1);
  const std::vector<double> avg{0.5, 0.1, 0.2};
  const auto p = mean_based_distribution(st, avg, g, 0, 4);
  EXPECT_NEAR(p[0], 0.5 / 3 + 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.5 / 3, 1e-12);
}

TEST(MeanBased, EtaSolvesFixedPoint) {
  for (double a : {0.5, 1.0, 5.0, 40.0}) {
    // eta = W(a)/a; W by Newton on w e^w = a.
    double w = std::log1p(a);
    for (int i = 0; i < 100; ++i) w -= (w * std::exp(w) - a) / (std::exp(w) * (w + 1));
    EXPECT_NEAR(mw_mean_based_eta(a), w / a, 1e-9) << a;
  }
  EXPECT_EQ(mw_mean_based_eta(0.0), 1.0);
}

TEST(MeanBased, SamplingIsSeedDeterministicAndMatchesFrequencies) {
  auto g = shared(make_triangle_star());
  const std::vector<double> avg{0.0, 1.0, 0.0};
  MeanBasedAgentState a(MeanBasedAlgorithm::kMultiplicativeWeights, RateSchedule::kHorizon, 4, 9);
  MeanBasedAgentState b = a;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 20000; ++i) {
    const auto v = mean_based_respond(a, avg, *g, 0, 3);
    ASSERT_EQ(v, mean_based_respond(b, avg, *g, 0, 3));
    ++counts[v];
  }
  const auto p = mean_based_distribution(a, avg, *g, 0, 3);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(counts[k] / 20000.0, p[k], 0.02);
}
