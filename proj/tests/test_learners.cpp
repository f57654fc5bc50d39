#include <gtest/gtest.h>

#include <random>
#include <set>

#include "strategem/agents.hpp"
#include "strategem/environments.hpp"
#include "strategem/learners.hpp"

using namespace strategem;

namespace {

auto shared(ManipulationGraph g) { return std::make_shared<const ManipulationGraph>(std::move(g)); }
auto shared(HypothesisClass H) { return std::make_shared<const HypothesisClass>(std::move(H)); }

ManipulationGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(p);
  for (FeatureId u = 0; u < n; ++u) {
    for (FeatureId v = 0; v < n; ++v) {
      if (u != v && coin(rng)) edges.emplace_back(u, v);
    }
  }
  return build_graph(n, edges);
}

HypothesisClass random_class(std::mt19937_64& rng, std::size_t n, std::size_t size) {
  std::set<std::vector<std::uint8_t>> seen;
  std::bernoulli_distribution coin(0.3);
  while (seen.size() < size) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = coin(rng);
    seen.insert(bits);
  }
  std::vector<BinaryPredictor> m;
  for (const auto& b : seen) m.emplace_back(b);
  return HypothesisClass(m);
}

// Plays a revealed-arb game against a fixed target with adversarial tie choices
// (the tie callback prefers a candidate the learner mislabels).
std::size_t play_revealed(Learner& learner, const ManipulationGraph& g, const BinaryPredictor& target,
                          std::mt19937_64& rng, std::size_t T) {
  std::size_t mistakes = 0;
  for (std::size_t t = 0; t < T; ++t) {
    const auto& h = learner.commit();
    const auto x = static_cast<FeatureId>(rng() % g.node_count());
    const int y = strategic_label(target, g, x);
    const auto br = best_response_set(h, g, x);
    FeatureId v = br.front();
    for (auto u : br) {
      if (h(u) != y) v = u;
    }
    if (h(v) != y) ++mistakes;
    learner.observe(v, y);
  }
  return mistakes;
}

}  // namespace

TEST(WeightedExpert, SingleExpertCommitsItsPrediction) {
  auto g = shared(make_two_layer(2, 2));
  auto H = shared(make_leaf_singletons(2, 2));
  auto oracle = std::make_shared<const LdimOracle>(H);
  WeightedExpertLearner alg1(g, oracle);
  EXPECT_EQ(alg1.expert_count(), 1U);
  EXPECT_EQ(alg1.total_weight(), Rational(1));
  EXPECT_EQ(alg1.commit(), alg1.expert_prediction(oracle->full()));
}

TEST(WeightedExpert, BoundAndDecayOnRandomRevealedGames) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = shared(random_graph(rng, 4 + rng() % 6, 0.25));
    auto H = shared(random_class(rng, g->node_count(), 2 + rng() % 6));
    auto oracle = std::make_shared<const LdimOracle>(H);
    WeightedExpertLearner alg1(g, oracle);
    const auto& target = (*H)[rng() % H->size()];
    const auto d = g->max_degrees();
    std::size_t mistakes = 0;
    for (int t = 0; t < 150; ++t) {
      const auto h = alg1.commit();
      const auto x = static_cast<FeatureId>(rng() % g->node_count());
      const int y = strategic_label(target, *g, x);
      const auto br = best_response_set(h, *g, x);
      const auto v = br[rng() % br.size()];
      const Rational before = alg1.total_weight();
      alg1.observe(v, y);
      if (h(v) != y) {
        ++mistakes;
        ASSERT_LE(alg1.total_weight(), weight_decay_factor(d) * before) << "trial " << trial << " t " << t;
      } else {
        ASSERT_EQ(alg1.total_weight(), before);
      }
    }
    EXPECT_LE(double(mistakes), weighted_expert_bound(d, oracle->ldim(oracle->full())));
  }
}

TEST(ConservativeUnion, PredictsUnionAndPrunesOnFalsePositive) {
  auto H = shared(HypothesisClass({BinaryPredictor::from_string("100"), BinaryPredictor::from_string("010")}));
  ConservativeUnionLearner alg2(H);
  EXPECT_EQ(alg2.commit().to_string(), "110");
  alg2.observe(0, 0);
  EXPECT_EQ(alg2.last_mistake(), MistakeKind::kFalsePositive);
  EXPECT_EQ(alg2.commit().to_string(), "010");
  alg2.observe(1, 1);
  EXPECT_EQ(alg2.last_mistake(), MistakeKind::kNone);
}

TEST(ConservativeUnion, MistakeStructureOnRandomGammaGames) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = shared(random_graph(rng, 4 + rng() % 8, 0.3));
    auto H = shared(random_class(rng, g->node_count(), 1 + rng() % 8));
    const auto& target = (*H)[rng() % H->size()];
    ConservativeUnionLearner alg2(H);
    HistoryEstimator<double> est(0.7, g->node_count());
    std::size_t mistakes = 0;
    MistakeKind prev = MistakeKind::kNone;
    for (int t = 0; t < 200; ++t) {
      const auto h = alg2.commit();
      const auto x = static_cast<FeatureId>(rng() % g->node_count());
      const int y = strategic_label(target, *g, x);
      const auto v = t == 0 ? respond_with_policy(h, *g, x, TieBreakPolicy::lowest())
                            : respond_gamma(est, *g, x, TieBreakPolicy::lowest());
      alg2.observe(v, y);
      est.update(h);
      const auto kind = alg2.last_mistake();
      if (kind != MistakeKind::kNone) ++mistakes;
      if (kind == MistakeKind::kFalseNegative) {
        ASSERT_EQ(prev, MistakeKind::kFalsePositive) << "trial " << trial << " t " << t;
      }
      prev = kind;
      ASSERT_TRUE(alg2.version().contains(*H->index_of(target)));
    }
    EXPECT_LE(mistakes, 2 * H->size());
  }
}

TEST(DelayedReduction, HoldsClassifierBetweenUpdates) {
  auto g = shared(make_two_layer(2, 2));
  auto H = shared(make_leaf_singletons(2, 2));
  DelayedReductionLearner alg3(std::make_unique<ConservativeUnionLearner>(H), 3);
  const auto h1 = alg3.commit();
  EXPECT_EQ(h1.to_string(), "0001111");
  // Two false positives are absorbed without changing h.
  alg3.observe(3, 0);
  alg3.observe(4, 0);
  EXPECT_FALSE(alg3.updated_last_round());
  EXPECT_EQ(alg3.commit(), h1);
  EXPECT_EQ(alg3.mistakes_since_update(), 2U);
  alg3.observe(0, 0);  // correct: no count
  EXPECT_EQ(alg3.mistakes_since_update(), 2U);
  alg3.observe(5, 0);  // third mistake feeds the inner learner
  EXPECT_TRUE(alg3.updated_last_round());
  EXPECT_EQ(alg3.constant_run(), 4U);
  EXPECT_EQ(alg3.inner_clock(), 2U);
  EXPECT_EQ(alg3.commit().to_string(), "0001101");
}

TEST(SoaNaive, SkipsUnrealizableUpdates) {
  auto H = shared(HypothesisClass({BinaryPredictor::from_string("01"), BinaryPredictor::from_string("11")}));
  SoaNaiveLearner soa(std::make_shared<const LdimOracle>(H));
  EXPECT_EQ(soa.commit()(1), 1);
  soa.observe(1, 0);  // no member labels node 1 negative
  EXPECT_EQ(soa.skipped_updates(), 1U);
  EXPECT_EQ(soa.version().count(), 2U);
  soa.observe(0, 0);
  EXPECT_EQ(soa.version().count(), 1U);
  EXPECT_EQ(soa.commit().to_string(), "01");
}

TEST(Oracle, ZeroMistakesUnderAdversarialTies) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(rng, 3 + rng() % 9, 0.3);
    auto H = random_class(rng, g.node_count(), 1 + rng() % 8);
    const auto& target = H[rng() % H.size()];
    OracleLearner oracle(target);
    EXPECT_EQ(play_revealed(oracle, g, target, rng, 100), 0U);
  }
}

TEST(Learners, MistakeKindNames) {
  EXPECT_EQ(to_string(MistakeKind::kFalsePositive), "fp");
}
