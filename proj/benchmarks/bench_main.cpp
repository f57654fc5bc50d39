#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "strategem/game.hpp"
#include "strategem/ldim.hpp"

using namespace strategem;

namespace {

HypothesisClass random_class(std::size_t n, std::size_t size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<std::vector<std::uint8_t>> seen;
  while (seen.size() < size) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = rng() & 1U;
    seen.insert(bits);
  }
  return HypothesisClass(std::vector<BinaryPredictor>(seen.begin(), seen.end()));
}

void BM_Ldim(benchmark::State& state) {
  const auto H = random_class(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ldim(H));  // fresh memo each call
}
BENCHMARK(BM_Ldim)->Args({8, 16})->Args({10, 32})->Args({12, 64});

void BM_Alg1Commit(benchmark::State& state) {
  const auto cfg = parse_config_string("environment = arb(2,3," + std::to_string(state.range(0)) + ")\nlearner = alg1\n");
  for (auto _ : state) {
    auto setup = build_game(cfg);
    benchmark::DoNotOptimize(play(setup).total_mistakes);
  }
}
BENCHMARK(BM_Alg1Commit)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_GammaGeneralGame(benchmark::State& state) {
  const auto cfg = parse_config_string("environment = gammaGen(" + std::to_string(state.range(0)) +
                                       ", 0.99)\nlearner = alg3\n");
  for (auto _ : state) {
    auto setup = build_game(cfg);
    benchmark::DoNotOptimize(play(setup).total_mistakes);
  }
}
BENCHMARK(BM_GammaGeneralGame)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_MeanBasedGame(benchmark::State& state) {
  const auto cfg = parse_config_string("environment = meanbased(" + std::to_string(state.range(0)) +
                                       ", mw)\nlearner = alg2\nseed = 1\n");
  for (auto _ : state) {
    auto setup = build_game(cfg);
    benchmark::DoNotOptimize(play(setup).total_mistakes);
  }
}
BENCHMARK(BM_MeanBasedGame)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
