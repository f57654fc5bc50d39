#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "strategem/game.hpp"

namespace strategem {

enum class CheckStatus { kPass, kFail, kSkip };

struct InvariantResult {
  std::string name;
  CheckStatus status = CheckStatus::kSkip;
  std::optional<std::size_t> first_round;  // first violating round
  std::string detail;
};

struct VerifyReport {
  GameTranscript transcript;
  std::vector<InvariantResult> results;

  bool passed() const;
  const InvariantResult* find(const std::string& name) const;
  // One line per invariant: PASS / FAIL (with round) / SKIP (with reason).
  void print(std::ostream& out) const;
};

// Plays the game and checks every invariant that applies to its components.
VerifyReport verify_game(GameSetup& setup);
VerifyReport verify(const GameConfig& config);

}  // namespace strategem
