#include "strategem/game.hpp"

#include "strategem/errors.hpp"

namespace strategem {

GameTranscript play(GameSetup& setup, GameObserver* observer) {
  auto& learner = *setup.learner;
  auto& agent = *setup.agent;
  auto& env = *setup.environment;
  const auto n = setup.graph->node_count();

  GameTranscript out;
  std::vector<BinaryPredictor> past;
  std::vector<std::optional<std::size_t>> deferred;
  bool ended = false;
  for (std::size_t t = 1; t <= setup.horizon; ++t) {
    const BinaryPredictor h_t = learner.commit();
    if (h_t.size() != n) throw InternalError("learner committed a classifier of the wrong size");

    const RoundView view{t, h_t, past, agent};
    const auto emission = env.emit(view);
    if (!emission) {
      ended = true;
      break;
    }
    if (emission->x >= n || (emission->y != 0 && emission->y != 1)) {
      throw InternalError("environment emitted an invalid agent");
    }
    nlohmann::json diag{{"h", h_t.to_string()}};
    diag["agent"] = agent.diagnostics(h_t, emission->x);
    if (emission->tie_preference) diag["pref"] = *emission->tie_preference;

    const auto v = agent.respond(h_t, emission->x, emission->tie_preference);
    const int pred = h_t(v);
    const bool mistake = pred != emission->y;

    const RoundContext ctx{t, h_t, *emission, v, mistake, learner, agent, env};
    if (observer) observer->before_update(ctx);
    try {
      learner.observe(v, emission->y);
    } catch (const RealizabilityError& e) {
      out.learner_error = e.what();
    }
    if (!out.learner_error && observer) observer->after_update(ctx);

    RoundRecord record{t, emission->x, v, emission->y, pred, mistake, emission->deferred_copy};
    env.observe(record);
    agent.observe_committed(h_t);
    past.push_back(h_t);

    diag["learner"] = learner.diagnostics();
    diag["env"] = env.diagnostics();
    if (mistake) ++out.total_mistakes;
    out.rows.push_back({t, emission->x, v, emission->y, pred, mistake, out.total_mistakes, std::move(diag)});
    deferred.push_back(emission->deferred_copy);
    if (out.learner_error) break;
  }
  out.end_reason = out.learner_error ? "learner-realizability-error" : ended ? env.end_reason() : "horizon";
  if (out.end_reason.empty()) out.end_reason = "environment-done";
  out.target = env.target();

  for (std::size_t k = 0; k < out.rows.size(); ++k) {
    if (!deferred[k]) continue;
    auto& row = out.rows[k];
    const RoundRecord record{row.t, row.x, row.v, row.y, row.prediction, row.mistake, deferred[k]};
    row.x = env.resolve_x(record);
    row.diag["deferred"] = true;
  }
  return out;
}

GameTranscript run_game(const GameConfig& config) {
  auto setup = build_game(config);
  return play(setup);
}

}  // namespace strategem
