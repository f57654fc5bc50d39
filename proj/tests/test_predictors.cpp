#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "strategem/predictors.hpp"

using namespace strategem;

namespace {

std::vector<FeatureId> brute_argmax(const std::vector<double>& v, const ManipulationGraph& g, FeatureId x) {
  double best = -1;
  for (auto u : g.out_neighbors(x)) best = std::max(best, v[u]);
  std::vector<FeatureId> out;
  for (auto u : g.out_neighbors(x)) {
    if (v[u] == best) out.push_back(u);
  }
  return out;
}

}  // namespace

TEST(Predictors, BinaryRoundTrip) {
  const auto h = BinaryPredictor::from_string("0110");
  EXPECT_EQ(h.to_string(), "0110");
  EXPECT_EQ(h(1), 1);
  EXPECT_FALSE(h.all_zero());
  EXPECT_TRUE(BinaryPredictor::zeros(3).all_zero());
  const std::vector<FeatureId> pos{0, 3};
  EXPECT_EQ(BinaryPredictor::indicator(4, pos).to_string(), "1001");
  EXPECT_THROW(BinaryPredictor::from_string("01x"), std::invalid_argument);
}

TEST(Predictors, ClassRejectsBadMembers) {
  EXPECT_THROW(HypothesisClass({}), std::invalid_argument);
  EXPECT_THROW(HypothesisClass({BinaryPredictor::from_string("01"), BinaryPredictor::from_string("010")}),
               std::invalid_argument);
  EXPECT_THROW(HypothesisClass({BinaryPredictor::from_string("01"), BinaryPredictor::from_string("01")}),
               std::invalid_argument);
}

TEST(Predictors, BestResponseOnTwoLayer) {
  const auto g = make_two_layer(2, 2);  // hub 0, middles 1-2, leaves 3-6
  const auto h = BinaryPredictor::from_string("0000100");
  // x_1 reaches x_{1,2} = 4, the only positive.
  EXPECT_EQ(best_response_set(h, g, 1), (std::vector<FeatureId>{4}));
  EXPECT_EQ(strategic_label(h, g, 1), 1);
  // Hub cannot reach leaves in one hop: everything ties at 0.
  EXPECT_EQ(best_response_set(h, g, 0), (std::vector<FeatureId>{0, 1, 2}));
  EXPECT_EQ(strategic_label(h, g, 0), 0);
  EXPECT_EQ(strategic_label(h, g, 2), 0);
}

TEST(Predictors, FractionalArgmaxMatchesBruteForce) {
  std::mt19937_64 rng(11);
  const auto g = make_two_layer_clique(3, 2);
  std::uniform_int_distribution<int> level(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(g.node_count());
    for (auto& e : v) e = level(rng) / 4.0;  // coarse values force ties
    for (FeatureId x = 0; x < g.node_count(); ++x) {
      EXPECT_EQ(best_response_set(FractionalPredictor<double>{v}, g, x), brute_argmax(v, g, x));
      std::vector<Rational> q(v.begin(), v.end());
      EXPECT_EQ(best_response_set(FractionalPredictor<Rational>{q}, g, x), brute_argmax(v, g, x));
    }
  }
}

TEST(Predictors, FloatTiesWithinTolerance) {
  const auto g = make_triangle_star();
  const std::vector<double> v{0.1, 0.3, 0.3 + 1e-12};
  EXPECT_EQ(best_response_set(FractionalPredictor<double>{v}, g, 0), (std::vector<FeatureId>{1, 2}));
  const std::vector<double> w{0.1, 0.3, 0.3 + 1e-6};
  EXPECT_EQ(best_response_set(FractionalPredictor<double>{w}, g, 0), (std::vector<FeatureId>{2}));
}

TEST(Predictors, RealizabilityCheck) {
  const auto g = make_triangle_star();
  const HypothesisClass H({BinaryPredictor::from_string("010"), BinaryPredictor::from_string("001")});
  // Any base agent can reach a positive leaf under either hypothesis.
  const std::vector<AgentExample> base{{0, 1}};
  EXPECT_EQ(check_realizable(base, H, g).size(), 2U);
  // x_L stays positive only under 1{x_L}; it can step to B but not to R.
  const std::vector<AgentExample> left{{1, 1}, {2, 0}};
  EXPECT_EQ(check_realizable(left, H, g), (std::vector<std::size_t>{0}));
  const std::vector<AgentExample> none{{1, 0}, {2, 0}};
  EXPECT_TRUE(check_realizable(none, H, g).empty());
}

TEST(Predictors, StarClassLayout) {
  const auto H = make_star_class(3);
  ASSERT_EQ(H.size(), 3U);
  // h_2 is positive on x_{2,R} and on x_{1,L}, x_{3,L}.
  EXPECT_EQ(H[1].to_string(), "010001010");
}

TEST(Predictors, LeafSingletonsAndProduct) {
  const auto H = make_leaf_singletons(2, 2);
  ASSERT_EQ(H.size(), 4U);
  EXPECT_EQ(H[0].to_string(), "0001000");
  EXPECT_EQ(H[3].to_string(), "0000001");
  const auto P = product_class(H, 2);
  ASSERT_EQ(P.size(), 16U);
  // Index 1*4 + 2: copy 0 uses member 1, copy 1 uses member 2.
  EXPECT_EQ(P[6].to_string(), H[1].to_string() + H[2].to_string());
}

TEST(Predictors, ClassTextRoundTrip) {
  const auto H = make_star_class(2);
  std::stringstream ss;
  write_class(ss, H);
  EXPECT_EQ(read_class(ss).members(), H.members());
}
