// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit code 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "strategem/adversaries.hpp"
#include "strategem/verify.hpp"

using namespace strategem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& why) {
  if (!ok && o.pass) {
    o.pass = false;
    o.detail = why;
  }
}

GameConfig cfg(const std::string& text) { return parse_config_string(text); }

CheckStatus status_of(const VerifyReport& r, const std::string& name) {
  const auto* res = r.find(name);
  return res ? res->status : CheckStatus::kSkip;
}

std::string failure(const VerifyReport& r, const std::string& name) {
  const auto* res = r.find(name);
  if (!res) return name + " missing";
  return name + (res->first_round ? " at round " + std::to_string(*res->first_round) : "") + ": " + res->detail;
}

std::string random_instance(std::mt19937_64& rng, std::size_t T, bool seek) {
  const std::size_t n = 3 + rng() % 10;  // <= 12 nodes
  const std::size_t size = 1 + rng() % 8;
  std::ostringstream s;
  s << "graph = random(" << n << ", 0." << (15 + rng() % 30) << ", " << rng() % 100000 << ")\n"
    << "class = random(" << size << ", " << rng() % 100000 << ")\n"
    << "environment = random(" << rng() % 100000 << ", " << T << (seek ? ", seek" : "") << ")\n";
  return s.str();
}

// --- 1 -----------------------------------------------------------------------
Outcome oracle_zero() {
  Outcome o;
  std::mt19937_64 rng(101);
  const TieBreakPolicy hostile = TieBreakPolicy::callback([](const TieContext& c) {
    if (c.preference) {
      for (auto v : c.candidates) {
        if (v == *c.preference) return v;
      }
    }
    return c.candidates.back();
  });
  const char* gammas[] = {"3/10", "7/10", "19/20"};
  for (int i = 0; i < 100; ++i) {
    auto s = build_game(cfg(random_instance(rng, 200, true) + "learner = oracle\n"));
    switch (i % 3) {
      case 0: s.agent = std::make_unique<RevealedStdAgent>(s.graph); break;
      case 1: s.agent = std::make_unique<RevealedArbAgent>(s.graph, hostile); break;
      default:
        s.agent = std::make_unique<GammaWeightedAgent<double>>(s.graph, hostile,
                                                               to_double(parse_rational(gammas[i % 3])),
                                                               RoundOnePolicy::kReveal);
    }
    const auto r = verify_game(s);
    require(o, r.transcript.total_mistakes == 0,
            "instance " + std::to_string(i) + ": " + std::to_string(r.transcript.total_mistakes) + " mistakes");
    require(o, r.passed(), "instance " + std::to_string(i) + " failed an invariant");
  }
  if (o.pass) o.detail = "100 instances, 0 mistakes";
  return o;
}

// --- 2 -----------------------------------------------------------------------
Outcome alg2_bound() {
  Outcome o;
  std::mt19937_64 rng(202);
  const char* gammas[] = {"3/10", "7/10", "19/20"};
  std::size_t worst = 0;
  for (int i = 0; i < 200; ++i) {
    const auto text = random_instance(rng, 500, true) + "agent.model = gamma-weighted\nagent.ties = adversary\n" +
                      "agent.gamma = " + gammas[i % 3] + "\nlearner = alg2\n";
    auto s = build_game(cfg(text));
    const auto H = s.H->size();
    const auto r = verify_game(s);
    worst = std::max(worst, r.transcript.total_mistakes);
    require(o, r.transcript.total_mistakes <= 2 * H, "game " + std::to_string(i) + " exceeded 2|H|");
    require(o, status_of(r, "alg2-fn-follows-fp") == CheckStatus::kPass, failure(r, "alg2-fn-follows-fp"));
    require(o, r.passed(), "game " + std::to_string(i) + " failed an invariant");
  }
  if (o.pass) o.detail = "200 games, max mistakes " + std::to_string(worst);
  return o;
}

// --- 3 -----------------------------------------------------------------------
Outcome alg1_bound() {
  Outcome o;
  std::mt19937_64 rng(303);
  auto check = [&](const std::string& text, const std::string& label) {
    auto s = build_game(cfg(text));
    const auto r = verify_game(s);
    require(o, status_of(r, "alg1-mistake-bound") == CheckStatus::kPass, label + " " + failure(r, "alg1-mistake-bound"));
    require(o, status_of(r, "alg1-weight-decay") == CheckStatus::kPass, label + " " + failure(r, "alg1-weight-decay"));
    require(o, r.passed(), label + " failed an invariant");
    return r.transcript.total_mistakes;
  };
  const auto arb = check("environment = arb(2,3,1)\nlearner = alg1\n", "arb(2,3,1)");
  for (int i = 0; i < 100; ++i) {
    check(random_instance(rng, 200, true) + "agent.model = revealed-arb\nagent.ties = adversary\nlearner = alg1\n",
          "game " + std::to_string(i));
  }
  if (o.pass) o.detail = "arb(2,3,1): " + std::to_string(arb) + " mistakes; 100 random games within bound";
  return o;
}

// --- 4 -----------------------------------------------------------------------
Outcome alg3_composition() {
  Outcome o;
  std::mt19937_64 rng(404);
  require(o, phi_threshold(Rational(1, 2)) == 3 && phi_threshold(Rational(9, 10)) == 12, "phi values");
  for (int i = 0; i < 60; ++i) {
    const std::string gamma = i % 2 == 0 ? "1/2" : "9/10";
    const auto text = random_instance(rng, 300, true) + "agent.model = gamma-weighted\nagent.ties = adversary\n" +
                      "agent.gamma = " + gamma + "\nlearner = alg3\n";
    auto s = build_game(cfg(text));
    const auto r = verify_game(s);
    const auto label = "game " + std::to_string(i) + " ";
    for (const char* name : {"alg3-mistake-bound", "alg3-epsilon", "alg3-best-response", "alg3-constant-run"}) {
      require(o, status_of(r, name) != CheckStatus::kFail, label + failure(r, name));
    }
    require(o, status_of(r, "alg3-mistake-bound") == CheckStatus::kPass, label + failure(r, "alg3-mistake-bound"));
  }
  if (o.pass) o.detail = "60 games (phi 3 and 12)";
  return o;
}

// --- 5, 6, 7 -----------------------------------------------------------------
Outcome revealed_arb_lower() {
  Outcome o;
  std::string counts;
  for (const std::string learner : {"alg1", "alg2", "soa-naive", "oracle(0)"}) {
    const auto tr = run_game(cfg("environment = arb(2,3,1)\nlearner = " + learner + "\n"));
    require(o, tr.total_mistakes >= 5, learner + " made only " + std::to_string(tr.total_mistakes));
    counts += learner + "=" + std::to_string(tr.total_mistakes) + " ";
  }
  o.detail = counts;
  return o;
}

Outcome gamma_zero_lower() {
  Outcome o;
  std::string counts;
  for (const std::string learner : {"alg1", "alg2", "alg3", "soa-naive", "oracle(0)"}) {
    const auto tr = run_game(cfg("environment = gamma0(2,3,1)\nhorizon = 12\nlearner = " + learner + "\n"));
    std::size_t m = 0;
    for (const auto& r : tr.rows) m += r.t <= 12 && r.mistake;
    require(o, m >= 5, learner + " made only " + std::to_string(m) + " in 12 rounds");
    counts += learner + "=" + std::to_string(m) + " ";
  }
  o.detail = counts;
  return o;
}

Outcome gamma_general_lower() {
  Outcome o;
  const auto lb = gamma_general_lower_bound(parse_rational("0.99"), 20);
  require(o, lb == 15, "certified count " + std::to_string(lb));
  std::string counts;
  for (const std::string learner : {"alg3", "soa-naive"}) {
    const auto tr = run_game(cfg("environment = gammaGen(20, 0.99)\nlearner = " + learner + "\n"));
    require(o, tr.total_mistakes >= lb, learner + " made only " + std::to_string(tr.total_mistakes));
    counts += learner + "=" + std::to_string(tr.total_mistakes) + " ";
  }
  const auto tr = run_game(cfg("environment = gammaGen(20, 0.99)\nlearner = alg2\n"));
  require(o, tr.total_mistakes <= 40, "alg2 made " + std::to_string(tr.total_mistakes));
  o.detail = counts + "alg2=" + std::to_string(tr.total_mistakes);
  return o;
}

// --- 8 -----------------------------------------------------------------------
Outcome mean_based_growth() {
  Outcome o;
  std::vector<double> means;
  for (std::size_t T : {400, 1600, 6400}) {
    double total = 0;
    for (int seed = 1; seed <= 20; ++seed) {
      const auto tr = run_game(cfg("environment = meanbased(" + std::to_string(T) + ", mw)\nlearner = alg2\nseed = " +
                                   std::to_string(seed) + "\n"));
      total += static_cast<double>(tr.total_mistakes);
    }
    means.push_back(total / 20);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "mean mistakes %.2f, %.2f, %.2f; ratios %.2f, %.2f", means[0], means[1], means[2],
                means[1] / means[0], means[2] / means[1]);
  o.detail = buf;
  for (std::size_t k = 1; k < means.size(); ++k) {
    require(o, means[k] > means[k - 1], std::string("not increasing: ") + buf);
    require(o, means[k] >= 1.5 * means[k - 1], std::string("ratio below 1.5: ") + buf);
  }
  return o;
}

// --- 9 -----------------------------------------------------------------------
int tree_depth(const std::vector<BinaryPredictor>& hs, std::size_t n) {
  if (hs.empty()) return -1;
  int best = 0;
  for (FeatureId x = 0; x < n; ++x) {
    std::vector<BinaryPredictor> one, zero;
    for (const auto& h : hs) (h(x) ? one : zero).push_back(h);
    if (one.empty() || zero.empty()) continue;
    best = std::max(best, 1 + std::min(tree_depth(one, n), tree_depth(zero, n)));
  }
  return best;
}

Outcome ldim_oracle() {
  Outcome o;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<BinaryPredictor> m;
    for (FeatureId i = 0; i < n; ++i) {
      const std::vector<FeatureId> pos{i};
      m.push_back(BinaryPredictor::indicator(n, pos));
    }
    require(o, ldim(HypothesisClass(m)) == 1, "singletons over " + std::to_string(n) + " points");
  }
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<BinaryPredictor> m;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<std::uint8_t> bits(n);
      for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1U;
      m.emplace_back(bits);
    }
    const int d = ldim(HypothesisClass(m));
    require(o, d == static_cast<int>(n) && tree_depth(m, n) == d, "full class over " + std::to_string(n) + " points");
  }
  std::mt19937_64 rng(909);
  std::size_t streams_run = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    std::set<std::vector<std::uint8_t>> seen;
    const std::size_t size = std::min<std::size_t>(1 + rng() % 8, std::size_t{1} << n);
    while (seen.size() < size) {
      std::vector<std::uint8_t> bits(n);
      for (auto& b : bits) b = rng() & 1U;
      seen.insert(bits);
    }
    std::vector<BinaryPredictor> m(seen.begin(), seen.end());
    auto H = std::make_shared<const HypothesisClass>(m);
    const LdimOracle oracle(H);
    const int d = oracle.ldim(oracle.full());
    require(o, d == tree_depth(m, n), "ldim differs from brute-force tree");
    for (std::size_t len = 1; len <= 6; ++len) {
      std::size_t count = 1;
      for (std::size_t i = 0; i < len; ++i) count *= n;
      for (std::size_t target = 0; target < H->size(); ++target) {
        for (std::size_t code = 0; code < count; ++code) {
          auto version = oracle.full();
          int mistakes = 0;
          std::size_t c = code;
          for (std::size_t i = 0; i < len; ++i, c /= n) {
            const auto x = static_cast<FeatureId>(c % n);
            const int y = (*H)[target](x);
            mistakes += oracle.soa_predict(version, x) != y;
            version = oracle.soa_update(version, x, y);
          }
          ++streams_run;
          require(o, mistakes <= d, "SOA exceeded Ldim");
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(streams_run) + " exhaustive SOA streams within Ldim";
  return o;
}

// --- 10 ----------------------------------------------------------------------
Outcome estimator_fidelity() {
  Outcome o;
  std::mt19937_64 rng(1010);
  const auto g = make_two_layer_clique(2, 2);
  const auto n = g.node_count();
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Rational gamma(1 + static_cast<long>(rng() % 98), 100);
    gamma.canonicalize();
    const std::size_t len = 1 + rng() % 50;
    std::vector<BinaryPredictor> hs;
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<std::uint8_t> bits(n);
      for (auto& b : bits) b = rng() & 1U;
      hs.emplace_back(bits);
    }
    HistoryEstimator<double> fe(to_double(gamma), n);
    HistoryEstimator<Rational> qe(gamma, n);
    for (const auto& h : hs) {
      fe.update(h);
      qe.update(h);
    }
    for (FeatureId x = 0; x < n; ++x) {
      Rational exact = 0;
      double flt = 0;
      for (std::size_t tau = 1; tau <= len; ++tau) {
        exact += power(gamma, len - tau) * hs[tau - 1](x);
        flt += std::pow(to_double(gamma), double(len - tau)) * hs[tau - 1](x);
      }
      require(o, qe.unnormalized()(x) == exact, "exact recurrence differs from the direct sum");
      worst = std::max(worst, std::abs(fe.unnormalized()(x) - flt));
    }
    for (FeatureId x = 0; x < n; ++x) {
      require(o, best_response_set(qe.normalized(), g, x) == best_response_set(qe.unnormalized(), g, x),
              "normalized and unnormalized argmax differ");
    }
  }
  require(o, worst <= 1e-9, "float deviation " + std::to_string(worst));
  char buf[96];
  std::snprintf(buf, sizeof buf, "1000 sequences, float max deviation %.3g, exact deviation 0", worst);
  if (o.pass) o.detail = buf;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"zero-mistake oracle", oracle_zero},
      {"alg2 mistake bound", alg2_bound},
      {"alg1 bound and weight decay", alg1_bound},
      {"alg3 composition", alg3_composition},
      {"revealed-arb lower bound", revealed_arb_lower},
      {"gamma-zero lower bound", gamma_zero_lower},
      {"general-gamma lower bound", gamma_general_lower},
      {"mean-based growth", mean_based_growth},
      {"Ldim oracle", ldim_oracle},
      {"estimator fidelity", estimator_fidelity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
