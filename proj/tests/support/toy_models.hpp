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

#include <cstdint>
#include <random>
#include <vector>

#include "adaptmt/neuralmt/model.hpp"
#include "adaptmt/neuralmt/training.hpp"

namespace adaptmt::testing {

// Vocabulary of `size` entries: the four reserved ones plus "w4", "w5", ...
textpipe::Vocabulary placeholder_vocab(std::size_t size);

// Model over placeholder vocabularies.
nmt::NmtModel toy_model(std::size_t src_vocab, std::size_t tgt_vocab, std::size_t embedding_dim,
                        std::size_t hidden_dim, std::uint64_t seed);

// Multiplies every parameter by `factor`; used to move away from the
// near-linear regime of the default initialization.
void scale_parameters(nmt::NmtModel& model, double factor);

// Random non-reserved ids in [4, vocab).
std::vector<textpipe::TokenId> random_ids(std::mt19937_64& rng, std::size_t vocab, std::size_t min_len,
                                          std::size_t max_len);

nmt::IdPair random_pair(std::mt19937_64& rng, std::size_t src_vocab, std::size_t tgt_vocab,
                        std::size_t min_len, std::size_t max_len);

}  // namespace adaptmt::testing

namespace adaptmt::testing {

// Toy model trained with Adam on a copy task (target = source) over
// `vocab` ids. Cached per process by (vocab, dims, seed).
const nmt::NmtModel& pretrained_copy_model(std::size_t vocab, std::size_t embedding_dim,
                                           std::size_t hidden_dim, std::uint64_t seed);

}  // namespace adaptmt::testing
