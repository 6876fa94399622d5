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
#include <cstdint>
#include <span>
#include <vector>

#include "adaptmt/neuralmt/model.hpp"

namespace adaptmt::nmt {

inline constexpr double kDefaultClipNorm = 5.0;

// A training example as token ids, without BOS/EOS.
struct IdPair {
  std::vector<TokenId> src;
  std::vector<TokenId> tgt;
};

struct LossAndGrad {
  double loss = 0.0;
  ParamMap grads;
};

// Mean token-level cross-entropy of tgt + EOS given src, with the decoder
// fed BOS + tgt (teacher forcing).
double sequence_loss(const NmtModel& model, std::span<const TokenId> src, std::span<const TokenId> tgt);

// Same loss plus its gradient for every parameter.
LossAndGrad loss_and_grad(const NmtModel& model, std::span<const TokenId> src,
                          std::span<const TokenId> tgt);

// p <- p - lr * g, after rescaling g to at most `clip_norm` global L2 norm
// (clip_norm <= 0 disables clipping). Requires lr > 0 and grads matching the
// parameters by name and shape. A non-finite gradient throws NumericError
// before any parameter is touched.
void sgd_step(NmtModel& model, const ParamMap& grads, double lr, double clip_norm = kDefaultClipNorm);

enum class Optimizer { kSgd, kAdam };

struct TrainOptions {
  std::size_t epochs = 10;
  double learning_rate = 0.05;
  std::size_t batch_size = 1;
  Optimizer optimizer = Optimizer::kSgd;
  double clip_norm = kDefaultClipNorm;
  std::uint64_t seed = 1;
};

// Shuffled minibatch training. Returns the mean per-pair loss of each epoch,
// measured on the fly before each minibatch update.
std::vector<double> train_batch(NmtModel& model, std::span<const IdPair> pairs, const TrainOptions& options);

}  // namespace adaptmt::nmt
