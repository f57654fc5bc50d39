#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strategem/config.hpp"

namespace strategem {

struct TranscriptRow {
  std::size_t t = 0;
  FeatureId x = 0;  // resolved original feature
  FeatureId v = 0;
  int y = 0;
  int prediction = 0;
  bool mistake = false;
  std::size_t cumulative = 0;
  nlohmann::json diag;  // always carries "h", the committed classifier
};

struct GameTranscript {
  std::vector<TranscriptRow> rows;
  std::size_t total_mistakes = 0;
  std::string end_reason;
  std::optional<std::size_t> target;
  // Set when the learner gave up on a stream it could not explain (end_reason
  // is then "learner-realizability-error"); rows up to that round are kept.
  std::optional<std::string> learner_error;
};

// What an observer sees around the learner update of round t.
struct RoundContext {
  std::size_t t;
  const BinaryPredictor& committed;
  const Emission& emission;
  FeatureId v;
  bool mistake;
  const Learner& learner;
  const AgentModel& agent;
  const Environment& environment;
};

class GameObserver {
 public:
  virtual ~GameObserver() = default;
  virtual void before_update(const RoundContext& ctx) { (void)ctx; }
  virtual void after_update(const RoundContext& ctx) { (void)ctx; }
};

// Plays up to setup.horizon rounds in protocol order: the learner commits h_t,
// the environment picks the agent after seeing h_t, the agent responds, the
// learner observes only (v_t, y_t). Deferred x values are resolved once the
// game is over.
GameTranscript play(GameSetup& setup, GameObserver* observer = nullptr);
GameTranscript run_game(const GameConfig& config);

}  // namespace strategem
