#include "strategem/config.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "strategem/adversaries.hpp"
#include "strategem/errors.hpp"

namespace strategem {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "graph",      "class",       "learner",      "learner.gamma", "agent.model",  "agent.gamma",
      "agent.ties", "agent.round1", "agent.kind",  "agent.schedule", "agent.seed",  "agent.rate",
      "environment", "horizon",    "numeric_mode", "seed"};
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t to_size(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (pos != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a non-negative integer, got '" + text + "'");
  }
}

double to_real(const std::string& text, const std::string& what) {
  try {
    return to_double(parse_rational(text));
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
}

Rational to_gamma(const std::string& text, const std::string& what) {
  Rational g;
  try {
    g = parse_rational(text);
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a rational p/q, got '" + text + "'");
  }
  if (!(g > 0 && g < 1)) throw ConfigError(what + " must lie in (0, 1), got " + text);
  return g;
}

void expect_args(const CallSpec& c, std::size_t lo, std::size_t hi, const std::string& usage) {
  if (c.args.size() < lo || c.args.size() > hi) throw ConfigError("expected " + usage);
}

std::string resolve_path(const GameConfig& cfg, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = cfg.base_dir / path;
  return path.string();
}

ManipulationGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (FeatureId u = 0; u < n; ++u) {
    for (FeatureId v = 0; v < n; ++v) {
      if (u != v && uniform01(rng) < p) edges.emplace_back(u, v);
    }
  }
  return build_graph(n, edges);
}

HypothesisClass random_class(std::size_t n, std::size_t size, std::uint64_t seed) {
  if (n < 63 && size > (std::size_t{1} << n)) {
    throw ConfigError("random class of size " + std::to_string(size) + " exceeds 2^" + std::to_string(n));
  }
  std::mt19937_64 rng(seed);
  std::set<BinaryPredictor> seen;
  std::vector<BinaryPredictor> members;
  while (members.size() < size) {
    std::vector<std::uint8_t> labels(n);
    for (auto& b : labels) b = uniform01(rng) < 0.5 ? 1 : 0;
    BinaryPredictor h(std::move(labels));
    if (seen.insert(h).second) members.push_back(std::move(h));
  }
  return HypothesisClass(std::move(members));
}

std::shared_ptr<const ManipulationGraph> build_graph_spec(const GameConfig& cfg, const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) {
    try {
      return std::make_shared<const ManipulationGraph>(read_graph_file(resolve_path(cfg, spec.substr(5))));
    } catch (const GraphError& e) {
      throw ConfigError(e.what());
    }
  }
  const auto c = parse_call(spec);
  if (c.name == "two_layer" || c.name == "two_layer_clique") {
    expect_args(c, 2, 2, c.name + "(k1,k2)");
    const auto k1 = to_size(c.args[0], "k1");
    const auto k2 = to_size(c.args[1], "k2");
    return std::make_shared<const ManipulationGraph>(c.name == "two_layer" ? make_two_layer(k1, k2)
                                                                             : make_two_layer_clique(k1, k2));
  }
  if (c.name == "stars") {
    expect_args(c, 1, 1, "stars(n)");
    return std::make_shared<const ManipulationGraph>(make_stars(to_size(c.args[0], "stars")));
  }
  if (c.name == "triangle_star") return std::make_shared<const ManipulationGraph>(make_triangle_star());
  if (c.name == "random") {
    expect_args(c, 3, 3, "random(n,p,seed)");
    return std::make_shared<const ManipulationGraph>(random_graph(
        to_size(c.args[0], "n"), to_real(c.args[1], "p"), to_size(c.args[2], "seed")));
  }
  throw ConfigError("unknown graph '" + spec + "'");
}

std::shared_ptr<const HypothesisClass> build_class_spec(const GameConfig& cfg, const std::string& spec,
                                                        const ManipulationGraph& g) {
  std::shared_ptr<const HypothesisClass> H;
  try {
    if (spec.rfind("file:", 0) == 0) {
      H = std::make_shared<const HypothesisClass>(read_class_file(resolve_path(cfg, spec.substr(5))));
    } else {
      const auto c = parse_call(spec);
      if (c.name == "star_class") {
        if (g.node_count() % 3 != 0) throw ConfigError("star_class needs a stars(n) graph");
        H = std::make_shared<const HypothesisClass>(make_star_class(g.node_count() / 3));
      } else if (c.name == "leaf_singletons") {
        expect_args(c, 2, 2, "leaf_singletons(k1,k2)");
        H = std::make_shared<const HypothesisClass>(
            make_leaf_singletons(to_size(c.args[0], "k1"), to_size(c.args[1], "k2")));
      } else if (c.name == "random") {
        expect_args(c, 2, 2, "random(size,seed)");
        H = std::make_shared<const HypothesisClass>(
            random_class(g.node_count(), to_size(c.args[0], "size"), to_size(c.args[1], "seed")));
      } else {
        throw ConfigError("unknown class '" + spec + "'");
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (H->node_count() != g.node_count()) {
    throw ConfigError("class is over " + std::to_string(H->node_count()) + " nodes but the graph has " +
                      std::to_string(g.node_count()));
  }
  return H;
}

}  // namespace

std::optional<std::string> GameConfig::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

void GameConfig::set(const std::string& key, std::string value) {
  if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  values[key] = trim(value);
}

GameConfig parse_config(std::istream& in, std::filesystem::path base_dir) {
  GameConfig cfg;
  cfg.base_dir = std::move(base_dir);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(std::string_view(line).substr(0, eq));
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

GameConfig parse_config_string(const std::string& text, std::filesystem::path base_dir) {
  std::istringstream in(text);
  return parse_config(in, std::move(base_dir));
}

GameConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

CallSpec parse_call(const std::string& text) {
  const auto s = trim(text);
  CallSpec out;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    out.name = s;
    return out;
  }
  if (s.back() != ')') throw ConfigError("unbalanced parentheses in '" + s + "'");
  out.name = trim(std::string_view(s).substr(0, open));
  const auto inner = s.substr(open + 1, s.size() - open - 2);
  if (trim(inner).empty()) return out;
  std::stringstream ss(inner);
  std::string arg;
  while (std::getline(ss, arg, ',')) out.args.push_back(trim(arg));
  return out;
}

GameSetup build_game(const GameConfig& cfg) {
  GameSetup s;
  const auto env_spec = cfg.get("environment");
  if (!env_spec) throw ConfigError("missing 'environment'");
  const auto env_call = parse_call(*env_spec);
  const auto env_name = env_spec->rfind("stream:", 0) == 0 ? std::string("stream") : env_call.name;

  // Adversaries fix their own instance.
  std::optional<std::size_t> default_horizon;
  std::string default_model = "revealed-std";
  std::string default_ties = "adversary";
  std::optional<Rational> env_gamma;
  std::optional<std::string> env_kind;
  std::unique_ptr<Environment> env;
  std::shared_ptr<const ManipulationGraph> adv_graph;
  std::shared_ptr<const HypothesisClass> adv_class;

  if (env_name == "arb" || env_name == "gamma0") {
    expect_args(env_call, 3, env_name == "arb" ? 4 : 3, env_name + "(k1,k2,d)");
    const auto k1 = to_size(env_call.args[0], "k1");
    const auto k2 = to_size(env_call.args[1], "k2");
    const auto d = to_size(env_call.args[2], "d");
    if (env_name == "arb") {
      std::optional<std::size_t> target;
      if (env_call.args.size() == 4) target = to_size(env_call.args[3], "arb target");
      auto a = std::make_unique<RevealedArbAdversary>(k1, k2, d, target);
      adv_graph = a->graph();
      adv_class = a->hypotheses();
      env = std::move(a);
      default_model = "revealed-arb";
      default_horizon = 1000;
    } else {
      auto a = std::make_unique<GammaZeroAdversary>(k1, k2, d);
      adv_graph = a->graph();
      adv_class = a->hypotheses();
      env = std::move(a);
      default_model = "gamma-zero";
      default_horizon = 2 * k1 * k2 * d;
    }
  } else if (env_name == "gammaGen") {
    expect_args(env_call, 2, 2, "gammaGen(H,gamma)");
    env_gamma = to_gamma(env_call.args[1], "gammaGen gamma");
    auto a = std::make_unique<GammaGeneralAdversary>(to_size(env_call.args[0], "H"), *env_gamma);
    adv_graph = a->graph();
    adv_class = a->hypotheses();
    env = std::move(a);
    default_model = "gamma-weighted";
    default_ties = "stay-adversary";
    default_horizon = 400;
  } else if (env_name == "meanbased") {
    expect_args(env_call, 1, 2, "meanbased(T,kind)");
    const auto T = to_size(env_call.args[0], "T");
    if (env_call.args.size() == 2) env_kind = env_call.args[1];
    auto a = std::make_unique<MeanBasedAdversary>(T);
    adv_graph = a->graph();
    adv_class = a->hypotheses();
    env = std::move(a);
    default_model = "mean-based";
    default_horizon = T;
  } else if (env_name != "random" && env_name != "stream") {
    throw ConfigError("unknown environment '" + *env_spec + "'");
  }

  // Graph and class.
  if (adv_graph) {
    s.graph = adv_graph;
    s.H = adv_class;
    if (auto g = cfg.get("graph")) {
      if (*build_graph_spec(cfg, *g) != *adv_graph) {
        throw ConfigError("graph '" + *g + "' does not match the instance of environment '" + *env_spec + "'");
      }
    }
    if (auto c = cfg.get("class")) {
      if (build_class_spec(cfg, *c, *adv_graph)->members() != adv_class->members()) {
        throw ConfigError("class '" + *c + "' does not match the instance of environment '" + *env_spec + "'");
      }
    }
  } else {
    const auto g = cfg.get("graph");
    const auto c = cfg.get("class");
    if (!g || !c) throw ConfigError("environment '" + *env_spec + "' needs 'graph' and 'class'");
    s.graph = build_graph_spec(cfg, *g);
    s.H = build_class_spec(cfg, *c, *s.graph);
    if (env_name == "random") {
      expect_args(env_call, 2, 3, "random(seed,T[,seek])");
      const auto seed = to_size(env_call.args[0], "seed");
      const auto T = to_size(env_call.args[1], "T");
      bool seek = false;
      if (env_call.args.size() == 3) {
        if (env_call.args[2] != "seek" && env_call.args[2] != "1" && env_call.args[2] != "0") {
          throw ConfigError("random: third argument must be 'seek'");
        }
        seek = env_call.args[2] != "0";
      }
      env = std::make_unique<RandomRealizableStream>(s.graph, s.H, seed, T, seek);
      default_horizon = T;
    } else {
      auto examples = read_stream_file(resolve_path(cfg, env_spec->substr(7)), s.graph->node_count());
      const auto realizing = check_realizable(examples, *s.H, *s.graph);
      std::optional<std::size_t> target;
      if (!realizing.empty()) target = realizing.front();
      default_horizon = examples.size();
      env = std::make_unique<StreamEnvironment>(std::move(examples), target, false);
    }
  }
  s.environment = std::move(env);

  s.horizon = cfg.get("horizon") ? to_size(*cfg.get("horizon"), "horizon") : default_horizon.value_or(1000);

  const auto mode = cfg.get("numeric_mode").value_or(env_name == "gammaGen" ? "exact" : "float");
  if (mode == "exact") {
    s.numeric_mode = NumericMode::kExact;
  } else if (mode == "float") {
    s.numeric_mode = NumericMode::kFloat;
  } else {
    throw ConfigError("numeric_mode must be float or exact, got '" + mode + "'");
  }

  // Agent.
  const auto model = cfg.get("agent.model").value_or(default_model);
  TieBreakPolicy ties = TieBreakPolicy::lowest();
  try {
    ties = TieBreakPolicy::parse(cfg.get("agent.ties").value_or(default_ties));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const auto round_one = parse_round_one_policy(cfg.get("agent.round1").value_or("reveal"));
  if (auto g = cfg.get("agent.gamma")) {
    s.agent_gamma = to_gamma(*g, "agent.gamma");
  } else {
    s.agent_gamma = env_gamma;
  }
  const auto seed = cfg.get("seed") ? to_size(*cfg.get("seed"), "seed") : 0;

  if (model == "revealed-std") {
    s.agent = std::make_unique<RevealedStdAgent>(s.graph);
  } else if (model == "revealed-arb") {
    s.agent = std::make_unique<RevealedArbAgent>(s.graph, ties);
  } else if (model == "gamma-weighted") {
    if (!s.agent_gamma) throw ConfigError("gamma-weighted agents need agent.gamma");
    if (s.numeric_mode == NumericMode::kExact) {
      s.agent = std::make_unique<GammaWeightedAgent<Rational>>(s.graph, ties, *s.agent_gamma, round_one);
    } else {
      s.agent = std::make_unique<GammaWeightedAgent<double>>(s.graph, ties, to_double(*s.agent_gamma), round_one);
    }
  } else if (model == "gamma-zero") {
    s.agent = std::make_unique<PreviousClassifierAgent>(s.graph, ties, round_one);
  } else if (model == "mean-based") {
    MeanBasedAgentState st;
    try {
      st = MeanBasedAgentState(parse_mean_based_algorithm(cfg.get("agent.kind").value_or(env_kind.value_or("mw"))),
                               parse_rate_schedule(cfg.get("agent.schedule").value_or("horizon")), s.horizon,
                               cfg.get("agent.seed") ? to_size(*cfg.get("agent.seed"), "agent.seed") : seed);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (auto r = cfg.get("agent.rate")) st.fixed_rate = to_real(*r, "agent.rate");
    s.agent = std::make_unique<MeanBasedAgent>(s.graph, std::move(st));
  } else {
    throw ConfigError("unknown agent.model '" + model + "'");
  }

  // Learner.
  const auto learner_spec = cfg.get("learner").value_or("alg1");
  const auto lc = parse_call(learner_spec);
  auto oracle = [&]() {
    if (!s.oracle) s.oracle = std::make_shared<const LdimOracle>(s.H);
    return s.oracle;
  };
  auto simple = [&](const std::string& name) -> std::unique_ptr<Learner> {
    if (name == "alg1") return std::make_unique<WeightedExpertLearner>(s.graph, oracle());
    if (name == "alg2") return std::make_unique<ConservativeUnionLearner>(s.H);
    if (name == "soa-naive") return std::make_unique<SoaNaiveLearner>(oracle());
    throw ConfigError("unknown learner '" + name + "'");
  };
  s.learner_name = lc.name;
  if (lc.name == "alg3") {
    s.inner_learner = "alg1";
    for (const auto& a : lc.args) {
      if (a.rfind("inner=", 0) != 0) throw ConfigError("alg3 takes inner=<learner>, got '" + a + "'");
      s.inner_learner = trim(a.substr(6));
    }
    if (auto g = cfg.get("learner.gamma")) {
      s.phi = phi_threshold(to_gamma(*g, "learner.gamma"));
    } else if (model == "gamma-zero") {
      s.phi = kPhiThresholdGammaZero;
    } else if (s.agent_gamma) {
      s.phi = phi_threshold(*s.agent_gamma);
    } else {
      throw ConfigError("alg3 needs learner.gamma or agent.gamma");
    }
    s.learner = std::make_unique<DelayedReductionLearner>(simple(s.inner_learner), *s.phi);
  } else if (lc.name == "oracle") {
    std::optional<std::size_t> k;
    if (!lc.args.empty()) {
      expect_args(lc, 1, 1, "oracle(k)");
      k = to_size(lc.args[0], "oracle index");
    } else {
      k = s.environment->target();
    }
    if (!k) throw ConfigError("learner 'oracle' needs a known target; use oracle(k)");
    if (*k >= s.H->size()) throw ConfigError("oracle index out of range");
    s.learner = std::make_unique<OracleLearner>((*s.H)[*k]);
  } else {
    if (!lc.args.empty()) throw ConfigError("learner '" + lc.name + "' takes no arguments");
    s.learner = simple(lc.name);
  }
  return s;
}

}  // namespace strategem
