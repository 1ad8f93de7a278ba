// Copyright 2026 The narc Authors.
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

#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "narc/corpus_io.h"
#include "narc/probe.h"
#include "narc/tokenizer.h"
#include "narc/transforms.h"

namespace {

const narc::Dataset& Corpus() {
  static const narc::Dataset corpus =
      narc::LoadRaceDir(std::string(NARC_TEST_DATA_DIR) + "/race_synthetic");
  return corpus;
}

void BM_TokenizeCorpus(benchmark::State& state) {
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const narc::Example& ex : Corpus().examples) {
      benchmark::DoNotOptimize(narc::Tokenize(ex.passage));
      bytes += ex.passage.size();
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_TokenizeCorpus);

void BM_Transform(benchmark::State& state) {
  narc::TransformOptions options;
  options.op = static_cast<narc::TransformId>(state.range(0));
  options.seed = 7;
  options.keep = 3;
  state.SetLabel(std::string(narc::TransformIdName(options.op)));
  for (auto _ : state) benchmark::DoNotOptimize(narc::ApplyTransform(Corpus(), options));
}
BENCHMARK(BM_Transform)
    ->Arg(static_cast<int>(narc::TransformId::kP2))
    ->Arg(static_cast<int>(narc::TransformId::kP6))
    ->Arg(static_cast<int>(narc::TransformId::kP9))
    ->Arg(static_cast<int>(narc::TransformId::kO2))
    ->Arg(static_cast<int>(narc::TransformId::kO3));

narc::AttentionRecord RandomRecord(narc::AttentionLayer layer, std::size_t p, std::size_t q) {
  std::mt19937_64 gen(p * 31 + q);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  narc::AttentionRecord r;
  r.layer = layer;
  r.passage_len = p;
  r.query_len = layer == narc::AttentionLayer::kQueryAware ? q : 0;
  r.weights.resize(p * r.cols());
  for (double& w : r.weights) w = u(gen);
  return r;
}

void BM_OutputMrr(benchmark::State& state) {
  const std::size_t p = static_cast<std::size_t>(state.range(0));
  const narc::AttentionRecord r = RandomRecord(narc::AttentionLayer::kOutput, p, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(narc::OutputNgramReciprocalRank(r, {p / 2, p / 2 + 3}));
  }
}
BENCHMARK(BM_OutputMrr)->Arg(30)->Arg(400)->Arg(2000);

void BM_AffinityMrr(benchmark::State& state) {
  const std::size_t p = static_cast<std::size_t>(state.range(0));
  const narc::AttentionRecord r = RandomRecord(narc::AttentionLayer::kQueryAware, p, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(narc::AffinityNgramReciprocalRank(r, {p / 2, p / 2 + 3}));
  }
}
BENCHMARK(BM_AffinityMrr)->Arg(30)->Arg(400);

void BM_SelfMrr(benchmark::State& state) {
  const std::size_t p = static_cast<std::size_t>(state.range(0));
  const narc::AttentionRecord r = RandomRecord(narc::AttentionLayer::kSelf, p, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(narc::SelfMatchReciprocalRank(r, 12, {p - 15, p}));
  }
}
BENCHMARK(BM_SelfMrr)->Arg(30)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
