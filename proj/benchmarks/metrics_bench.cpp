// Copyright 2026 The adaptmt Authors.
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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "adaptmt/metrics/metrics.hpp"

namespace {

using adaptmt::textpipe::Tokens;

Tokens random_tokens(std::mt19937_64& rng, std::size_t length, std::size_t alphabet) {
  Tokens out(length);
  for (auto& t : out) t = "t" + std::to_string(rng() % alphabet);
  return out;
}

// Args: sentence length. A small alphabet makes shifts frequent.
void BM_Ter(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto len = static_cast<std::size_t>(state.range(0));
  const Tokens ref = random_tokens(rng, len, 8);
  Tokens hyp = ref;
  std::rotate(hyp.begin(), hyp.begin() + static_cast<std::ptrdiff_t>(len / 3), hyp.end());
  hyp[len / 2] = "x";
  for (auto _ : state) benchmark::DoNotOptimize(adaptmt::metrics::ter(hyp, ref));
}
BENCHMARK(BM_Ter)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_CorpusBleu(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::vector<Tokens> hyps, refs;
  for (int i = 0; i < 1000; ++i) {
    refs.push_back(random_tokens(rng, 20, 50));
    hyps.push_back(random_tokens(rng, 20, 50));
  }
  for (auto _ : state) benchmark::DoNotOptimize(adaptmt::metrics::bleu(hyps, refs));
}
BENCHMARK(BM_CorpusBleu)->Unit(benchmark::kMillisecond);

}  // namespace
