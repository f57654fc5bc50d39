#include <gtest/gtest.h>

#include "strategem/adversaries.hpp"
#include "strategem/csv.hpp"
#include "strategem/game.hpp"
#include "strategem/verify.hpp"

using namespace strategem;

namespace {

GameTranscript run(const std::string& text) { return run_game(parse_config_string(text)); }

// Every row's label is the target's strategic label at the resolved x.
void expect_realizable(const GameSetup& s, const GameTranscript& tr) {
  ASSERT_TRUE(tr.target.has_value());
  const auto& h = (*s.H)[*tr.target];
  for (const auto& r : tr.rows) {
    EXPECT_EQ(r.y, strategic_label(h, *s.graph, r.x)) << "round " << r.t;
    EXPECT_TRUE(s.graph->has_edge(r.x, r.v)) << "round " << r.t;
  }
}

}  // namespace

TEST(TwoLayerLayout, Addressing) {
  const TwoLayerLayout L{2, 3, 2};
  EXPECT_EQ(L.per_copy(), 9U);
  EXPECT_EQ(L.hub(1), 9U);
  EXPECT_EQ(L.middle(1, 2), 11U);
  EXPECT_EQ(L.leaf(0, 0), 3U);
  EXPECT_EQ(L.leaf(1, 5), 17U);
  EXPECT_EQ(L.parent(2), 1U);
  EXPECT_EQ(L.parent(3), 2U);
  EXPECT_EQ(L.copy_of(10), 1U);
  EXPECT_EQ(L.member_index({4, 1}), 4U * 6 + 1);
  // Layout agrees with the graph builder's labels.
  const auto g = make_two_layer(2, 3);
  EXPECT_EQ(L.leaf(0, 4), g.at("x_{2,2}"));
}

TEST(RevealedArb, ForcesCertifiedMistakesAgainstEveryLearner) {
  for (const std::string learner : {"alg1", "alg2", "soa-naive", "oracle(0)", "alg3(inner=alg2)"}) {
    auto cfg = parse_config_string("environment = arb(2,3,1)\nlearner = " + learner + "\nlearner.gamma = 1/2\n");
    auto s = build_game(cfg);
    const auto tr = play(s);
    EXPECT_GE(tr.total_mistakes, 5U) << learner;
    expect_realizable(s, tr);
  }
}

TEST(RevealedArb, MultipleCopiesScale) {
  auto s = build_game(parse_config_string("environment = arb(2,2,3)\nlearner = alg2\n"));
  const auto tr = play(s);
  EXPECT_GE(tr.total_mistakes, 9U);
  expect_realizable(s, tr);
}

TEST(RevealedArb, FixedTargetIsHonoured) {
  auto s = build_game(parse_config_string("environment = arb(2,3,1,4)\nlearner = alg2\n"));
  const auto tr = play(s);
  ASSERT_TRUE(tr.target);
  EXPECT_EQ(*tr.target, 4U);
  expect_realizable(s, tr);
}

TEST(RevealedArb, LazyCommitmentStaysOpenUntilTheEnd) {
  RevealedArbAdversary adv(2, 3, 1);
  EXPECT_EQ(adv.survivors(0).count(), 6U);
  auto s = build_game(parse_config_string("environment = arb(2,3,1)\nlearner = alg2\n"));
  const auto* env = dynamic_cast<const RevealedArbAdversary*>(s.environment.get());
  ASSERT_NE(env, nullptr);
  std::size_t prev = 6;
  struct Watch : GameObserver {
    const RevealedArbAdversary* env;
    std::size_t* prev;
    void after_update(const RoundContext&) override {
      const auto now = env->survivors(0).count();
      EXPECT_LE(now, *prev);
      EXPECT_GE(now, 1U);
      *prev = now;
    }
  } watch;
  watch.env = env;
  watch.prev = &prev;
  play(s, &watch);
}

TEST(Adversaries, DeterministicReplays) {
  for (const std::string text : {"environment = arb(2,3,1)\nlearner = alg1\n",
                                 "environment = gamma0(2,3,1)\nlearner = alg2\n",
                                 "environment = meanbased(50, mw)\nlearner = alg2\nseed = 3\n"}) {
    std::ostringstream a, b;
    write_transcript_csv(a, run(text));
    write_transcript_csv(b, run(text));
    EXPECT_EQ(a.str(), b.str()) << text;
  }
}

TEST(GammaZero, MistakeEveryTwoRounds) {
  for (const std::string learner : {"alg1", "alg2", "soa-naive", "oracle(0)", "alg3"}) {
    auto s = build_game(parse_config_string("environment = gamma0(2,3,1)\nhorizon = 12\nlearner = " + learner + "\n"));
    const auto tr = play(s);
    EXPECT_GE(tr.total_mistakes, 5U) << learner;
    EXPECT_LE(tr.rows.size(), 12U);
    // Agents answer the previous classifier, so realizability is checked on the
    // strategic label only.
    expect_realizable(s, tr);
  }
}

TEST(GammaGeneral, ForcesLowerBoundOnSmallInstance) {
  for (const std::string learner : {"soa-naive", "alg2"}) {
    auto s = build_game(parse_config_string("environment = gammaGen(6, 9/10)\nlearner = " + learner + "\n"));
    const auto* env = dynamic_cast<const GammaGeneralAdversary*>(s.environment.get());
    ASSERT_NE(env, nullptr);
    const auto certified = *env->certified_lower_bound();
    EXPECT_EQ(certified, double(gamma_general_lower_bound(Rational(9, 10), 6)));
    const auto tr = play(s);
    EXPECT_GE(double(tr.total_mistakes), certified) << learner;
    expect_realizable(s, tr);
  }
}

TEST(MeanBased, TinyHorizon) {
  auto s = build_game(parse_config_string("environment = meanbased(2, mw)\nlearner = alg2\n"));
  const auto tr = play(s);
  ASSERT_EQ(tr.rows.size(), 2U);
  // First half: base agents labelled positive.
  EXPECT_EQ(tr.rows[0].x, MeanBasedAdversary::kBase);
  EXPECT_EQ(tr.rows[0].y, 1);
  expect_realizable(s, tr);
}

TEST(MeanBased, TargetFollowsEmpiricalLeader) {
  auto s = build_game(parse_config_string("environment = meanbased(40, mw)\nlearner = alg2\nseed = 1\n"));
  const auto tr = play(s);
  ASSERT_TRUE(tr.target);
  expect_realizable(s, tr);
  const auto report = verify(parse_config_string("environment = meanbased(40, mw)\nlearner = alg2\nseed = 1\n"));
  EXPECT_TRUE(report.passed());
}
