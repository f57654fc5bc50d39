#include "strategem/environments.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "strategem/errors.hpp"

namespace strategem {

namespace {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

}  // namespace

std::pair<std::size_t, std::vector<AgentExample>> random_realizable_stream(const ManipulationGraph& g,
                                                                            const HypothesisClass& H,
                                                                            std::uint64_t seed, std::size_t T) {
  if (H.node_count() != g.node_count()) throw ConfigError("class and graph node counts differ");
  std::mt19937_64 rng(seed);
  const auto target = uniform_index(rng, H.size());
  std::vector<AgentExample> examples;
  examples.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto x = static_cast<FeatureId>(uniform_index(rng, g.node_count()));
    examples.push_back({x, strategic_label(H[target], g, x)});
  }
  return {target, std::move(examples)};
}

std::optional<FeatureId> seek_mistake(const RoundView& view, FeatureId x, int y) {
  for (auto v : view.agent.candidates(view.committed, x)) {
    if (view.committed(v) != y && view.agent.preview(view.committed, x, v) == v) return v;
  }
  return std::nullopt;
}

RandomRealizableStream::RandomRealizableStream(std::shared_ptr<const ManipulationGraph> graph,
                                               std::shared_ptr<const HypothesisClass> H, std::uint64_t seed,
                                               std::size_t T, bool seek_ties)
    : graph_(std::move(graph)), H_(std::move(H)), seek_ties_(seek_ties) {
  std::tie(target_, examples_) = random_realizable_stream(*graph_, *H_, seed, T);
}

std::optional<Emission> RandomRealizableStream::emit(const RoundView& view) {
  if (view.t > examples_.size()) return std::nullopt;
  const auto& e = examples_[view.t - 1];
  Emission out{e.x, e.y, std::nullopt, std::nullopt};
  if (seek_ties_) out.tie_preference = seek_mistake(view, e.x, e.y);
  return out;
}

StreamEnvironment::StreamEnvironment(std::vector<AgentExample> examples, std::optional<std::size_t> target,
                                     bool seek_ties)
    : examples_(std::move(examples)), target_(target), seek_ties_(seek_ties) {}

std::optional<Emission> StreamEnvironment::emit(const RoundView& view) {
  if (view.t > examples_.size()) return std::nullopt;
  const auto& e = examples_[view.t - 1];
  Emission out{e.x, e.y, std::nullopt, std::nullopt};
  if (seek_ties_) out.tie_preference = seek_mistake(view, e.x, e.y);
  return out;
}

std::vector<AgentExample> read_stream(std::istream& in, std::size_t node_count) {
  std::vector<AgentExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long x = 0;
    long long y = 0;
    if (!(fields >> x)) continue;
    std::string rest;
    if (!(fields >> y) || (fields >> rest) || x < 0 || static_cast<std::size_t>(x) >= node_count ||
        (y != 0 && y != 1)) {
      throw ConfigError("malformed stream line " + std::to_string(line_no) + ": expected 'x y' with x < " +
                        std::to_string(node_count) + " and y in {0,1}");
    }
    out.push_back({static_cast<FeatureId>(x), static_cast<int>(y)});
  }
  return out;
}

std::vector<AgentExample> read_stream_file(const std::string& path, std::size_t node_count) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stream file '" + path + "'");
  return read_stream(in, node_count);
}

}  // namespace strategem
