#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strategem/agent_models.hpp"
#include "strategem/environments.hpp"
#include "strategem/learners.hpp"

namespace strategem {

enum class NumericMode { kFloat, kExact };

// Flat `key = value` experiment description. Unset keys fall back to defaults
// derived from the environment (see README for the key list).
struct GameConfig {
  std::map<std::string, std::string> values;
  // Relative file paths in values resolve against this directory.
  std::filesystem::path base_dir = ".";

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value);
};

GameConfig parse_config(std::istream& in, std::filesystem::path base_dir = ".");
GameConfig parse_config_string(const std::string& text, std::filesystem::path base_dir = ".");
GameConfig load_config(const std::filesystem::path& path);

// "name(a, b, c)" -> {"name", {"a", "b", "c"}}; a bare name has no arguments.
struct CallSpec {
  std::string name;
  std::vector<std::string> args;
};
CallSpec parse_call(const std::string& text);

// Everything needed to play one game, built from a config.
struct GameSetup {
  std::shared_ptr<const ManipulationGraph> graph;
  std::shared_ptr<const HypothesisClass> H;
  std::shared_ptr<const LdimOracle> oracle;  // set when a learner needs it
  std::unique_ptr<Environment> environment;
  std::unique_ptr<AgentModel> agent;
  std::unique_ptr<Learner> learner;
  std::size_t horizon = 0;
  NumericMode numeric_mode = NumericMode::kFloat;
  std::string learner_name;   // "alg1", "alg2", "alg3", "oracle", "soa-naive"
  std::string inner_learner;  // for alg3
  std::optional<Rational> agent_gamma;
  std::optional<std::size_t> phi;  // alg3 update frequency
};

// Throws ConfigError on unknown keys, malformed values, or mismatched parts.
GameSetup build_game(const GameConfig& config);

}  // namespace strategem
