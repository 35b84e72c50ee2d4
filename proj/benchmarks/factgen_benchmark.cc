// Copyright 2026 The factgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "factgen/bleu.h"
#include "factgen/ngram_lm.h"
#include "factgen/rng.h"
#include "factgen/seq2seq.h"
#include "factgen/vocabulary.h"
#include "oracles/synthetic.h"

namespace factgen {
namespace {

struct TrainingSetup {
  Hyperparams hp;
  ModelParams params;
  std::vector<Example> batch;
};

TrainingSetup training_setup(size_t dim, size_t layers, double ae_weight) {
  const auto data = oracle::synthetic_corpus(64, 1);
  const Vocabulary vocab = build_model_vocabulary(data, 100000, 4);
  TrainingSetup s;
  s.hp.vocab_size = vocab.size();
  s.hp.embed_dim = dim;
  s.hp.hidden_dim = dim;
  s.hp.layers = layers;
  s.hp.batch_size = 16;
  s.hp.ae_weight = ae_weight;
  s.params = ModelParams::initialize(s.hp);
  for (size_t i = 0; i < s.hp.batch_size; ++i) s.batch.push_back(make_example(data[i], vocab));
  return s;
}

void BM_TrainStep(benchmark::State& state) {
  TrainingSetup s = training_setup(static_cast<size_t>(state.range(0)), static_cast<size_t>(state.range(1)),
                                   static_cast<double>(state.range(2)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_step(s.batch, s.params, s.hp));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.batch.size()));
}
BENCHMARK(BM_TrainStep)
    ->ArgNames({"dim", "layers", "ae"})
    ->Args({32, 1, 0})
    ->Args({32, 1, 1})
    ->Args({64, 3, 1})
    ->Unit(benchmark::kMillisecond);

std::vector<Tokens> random_sentences(uint64_t seed, size_t n) {
  Rng rng(seed);
  std::vector<Tokens> out;
  for (size_t i = 0; i < n; ++i) {
    Tokens s;
    for (size_t j = 0, len = 8 + rng.below(25); j < len; ++j) s.push_back("w" + std::to_string(rng.below(200)));
    out.push_back(s);
  }
  return out;
}

void BM_CorpusBleu(benchmark::State& state) {
  const auto hyps = random_sentences(1, static_cast<size_t>(state.range(0)));
  const auto refs = random_sentences(2, static_cast<size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(corpus_bleu(hyps, refs));
}
BENCHMARK(BM_CorpusBleu)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_BootstrapCi(benchmark::State& state) {
  const auto hyps = random_sentences(3, 1000);
  const auto refs = random_sentences(4, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_ci(hyps, refs, static_cast<size_t>(state.range(0))));
}
BENCHMARK(BM_BootstrapCi)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_KneserNeyTrain(benchmark::State& state) {
  std::vector<Tokens> sentences;
  for (const auto& inst : oracle::synthetic_corpus(static_cast<size_t>(state.range(0)), 5)) {
    sentences.push_back(inst.sentence);
  }
  for (auto _ : state) benchmark::DoNotOptimize(NGramModel::train(sentences, 5));
}
BENCHMARK(BM_KneserNeyTrain)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KneserNeyPerplexity(benchmark::State& state) {
  std::vector<Tokens> train_set, test_set;
  for (const auto& inst : oracle::synthetic_corpus(2000, 5)) train_set.push_back(inst.sentence);
  for (const auto& inst : oracle::synthetic_corpus(500, 6)) test_set.push_back(inst.sentence);
  const NGramModel model = NGramModel::train(train_set, 5);
  for (auto _ : state) benchmark::DoNotOptimize(perplexity(model, test_set));
}
BENCHMARK(BM_KneserNeyPerplexity)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace factgen

BENCHMARK_MAIN();
