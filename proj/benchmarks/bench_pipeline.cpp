#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "jnkit/corpus.hpp"
#include "jnkit/evaluator.hpp"
#include "jnkit/hmm.hpp"
#include "jnkit/maxent.hpp"
#include "jnkit/profiler.hpp"
#include "jnkit/screener.hpp"
#include "jnkit/synthetic.hpp"

namespace {

using namespace jnkit;

const Corpus& corpus(std::size_t tokens) {
  static std::map<std::size_t, Corpus> cache;
  auto it = cache.find(tokens);
  if (it == cache.end()) {
    SyntheticConfig cfg;
    cfg.target_tokens = tokens;
    it = cache.emplace(tokens, generate_synthetic_corpus(cfg).corpus).first;
  }
  return it->second;
}

void BM_Screen(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(screen_candidates(c, ScreenConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.token_count()));
}
BENCHMARK(BM_Screen)->Arg(10000)->Arg(50000);

void BM_Profile(benchmark::State& state) {
  const auto& c = corpus(50000);
  for (auto _ : state)
    benchmark::DoNotOptimize(context_distribution(c, {"NN", "NNS"}, Direction::kPreceding));
}
BENCHMARK(BM_Profile);

void BM_TrainHmm(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(train_hmm(c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.token_count()));
}
BENCHMARK(BM_TrainHmm)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_TagCorpus(benchmark::State& state) {
  const auto& c = corpus(50000);
  const auto model = train_hmm(c);
  for (auto _ : state) benchmark::DoNotOptimize(tag_corpus(model, c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.token_count()));
}
BENCHMARK(BM_TagCorpus)->Unit(benchmark::kMillisecond);

void BM_MaxEntObjective(benchmark::State& state) {
  std::mt19937_64 rng(1);
  MaxEntProblem p;
  p.num_features = 5000;
  p.num_labels = 7;
  std::uniform_int_distribution<std::size_t> f(0, p.num_features - 1), y(0, 6);
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    TrainingExample ex;
    for (int k = 0; k < 14; ++k) ex.features.push_back(f(rng));
    ex.label = y(rng);
    p.examples.push_back(ex);
  }
  std::vector<double> w(p.num_weights(), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(objective_and_gradient(w, p, 0.1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MaxEntObjective)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_TrainChunker(benchmark::State& state) {
  const auto& c = corpus(10000);
  MaxEntConfig cfg;
  cfg.max_iterations = 20;
  for (auto _ : state) benchmark::DoNotOptimize(train_maxent(c, cfg));
}
BENCHMARK(BM_TrainChunker)->Unit(benchmark::kMillisecond);

void BM_ChunkEval(benchmark::State& state) {
  const auto& c = corpus(50000);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(c, c, Column::kBio));
}
BENCHMARK(BM_ChunkEval)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
