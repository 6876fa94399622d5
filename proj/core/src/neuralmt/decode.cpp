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

#include "adaptmt/neuralmt/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "adaptmt/common/error.hpp"

namespace adaptmt::nmt {
namespace {

struct Live {
  std::vector<TokenId> ids;
  double log_prob = 0.0;
  Var hidden;
};

struct Candidate {
  std::size_t parent;
  TokenId token;
  double log_prob;
  Var hidden;
};

Hypothesis search(GraphBuilder& graph, Tape& tape, const GraphBuilder::Memory& memory,
                  std::size_t vocab, const DecodeOptions& options, std::size_t beam) {
  std::vector<Live> live{{{}, 0.0, memory.initial_hidden}};
  std::vector<Hypothesis> finished;
  std::vector<std::size_t> order(vocab);

  for (std::size_t len = 0; len < options.max_length && !live.empty() && finished.size() < beam; ++len) {
    std::vector<Candidate> candidates;
    for (std::size_t h = 0; h < live.size(); ++h) {
      const TokenId prev = live[h].ids.empty() ? textpipe::kBosId : live[h].ids.back();
      const auto step = graph.step(memory, live[h].hidden, prev);
      const auto lp = tape.value(tape.log_softmax(step.logits));
      std::iota(order.begin(), order.end(), 0);
      auto allowed_end = std::remove_if(order.begin(), order.end(), [](std::size_t id) {
        return id == static_cast<std::size_t>(textpipe::kPadId) ||
               id == static_cast<std::size_t>(textpipe::kBosId);
      });
      const std::size_t keep = std::min<std::size_t>(beam, static_cast<std::size_t>(allowed_end - order.begin()));
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), allowed_end,
                        [&](std::size_t a, std::size_t b) { return lp[a] > lp[b] || (lp[a] == lp[b] && a < b); });
      for (std::size_t k = 0; k < keep; ++k) {
        candidates.push_back({h, static_cast<TokenId>(order[k]), live[h].log_prob + lp[order[k]], step.hidden});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.log_prob > b.log_prob; });

    std::vector<Live> next;
    for (std::size_t k = 0; k < std::min(beam, candidates.size()); ++k) {
      const Candidate& c = candidates[k];
      std::vector<TokenId> ids = live[c.parent].ids;
      if (c.token == textpipe::kEosId) {
        const std::size_t steps = ids.size() + 1;
        finished.push_back({std::move(ids), c.log_prob, true,
                            hypothesis_score(c.log_prob, steps, options.length_penalty)});
      } else {
        ids.push_back(c.token);
        next.push_back({std::move(ids), c.log_prob, c.hidden});
      }
    }
    live = std::move(next);
  }
  // Hypotheses cut off by the length cap compete as they are.
  for (auto& l : live) {
    const std::size_t steps = l.ids.size();
    finished.push_back({std::move(l.ids), l.log_prob, false,
                        hypothesis_score(l.log_prob, steps, options.length_penalty)});
  }

  auto best = std::max_element(finished.begin(), finished.end(),
                               [](const Hypothesis& a, const Hypothesis& b) { return a.score < b.score; });
  return *best;
}

}  // namespace

void DecodeOptions::validate() const {
  if (beam_size < 1) throw ValidationError("beam_size must be at least 1");
  if (max_length < 1) throw ValidationError("max_length must be at least 1");
  if (!(length_penalty >= 0.0)) throw ValidationError("length_penalty must be non-negative");
}

double hypothesis_score(double log_prob, std::size_t steps, double length_penalty) {
  if (length_penalty == 0.0 || steps == 0) return log_prob;
  return log_prob / std::pow(static_cast<double>(steps), length_penalty);
}

Hypothesis decode_hypothesis(const NmtModel& model, std::span<const TokenId> src, const DecodeOptions& options) {
  options.validate();
  Tape tape(false);
  GraphBuilder graph(model, tape);
  const auto memory = graph.encode(src);
  const std::size_t vocab = model.arch.tgt_vocab_size;

  Hypothesis greedy = search(graph, tape, memory, vocab, options, 1);
  if (options.beam_size == 1) return greedy;
  Hypothesis beam = search(graph, tape, memory, vocab, options, options.beam_size);
  // Pruning can drop the greedy prefix from the beam; keep whichever scores
  // higher so that widening the beam never hurts.
  return beam.score >= greedy.score ? beam : greedy;
}

}  // namespace adaptmt::nmt
