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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adaptmt/neuralmt/model.hpp"

namespace adaptmt::nmt {

struct DecodeOptions {
  std::size_t beam_size = 1;
  std::size_t max_length = 100;
  double length_penalty = 0.0;

  void validate() const;
};

struct Hypothesis {
  std::vector<TokenId> ids;  // without BOS/EOS
  double log_prob = 0.0;     // includes the EOS step when `finished`
  bool finished = false;     // ended on EOS rather than the length cap
  double score = 0.0;
};

// log_prob / steps^length_penalty, where steps counts generated tokens
// including EOS. With length_penalty = 0 this is the plain log-probability.
double hypothesis_score(double log_prob, std::size_t steps, double length_penalty);

// Beam search from BOS until EOS or `max_length` output tokens. PAD and BOS
// are never emitted. The result never scores below the greedy path under
// hypothesis_score.
Hypothesis decode_hypothesis(const NmtModel& model, std::span<const TokenId> src, const DecodeOptions& options);

inline std::vector<TokenId> decode(const NmtModel& model, std::span<const TokenId> src,
                                   const DecodeOptions& options) {
  return decode_hypothesis(model, src, options).ids;
}

}  // namespace adaptmt::nmt
