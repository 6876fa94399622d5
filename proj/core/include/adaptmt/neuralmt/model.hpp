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
#include <string>

#include "adaptmt/neuralmt/autodiff.hpp"
#include "adaptmt/neuralmt/tensor.hpp"
#include "adaptmt/textpipe/vocabulary.hpp"

namespace adaptmt::nmt {

using textpipe::TokenId;

inline constexpr double kInitRange = 0.08;

// Bidirectional GRU encoder, GRU decoder with global dot-product attention
// over projected encoder states.
struct Architecture {
  std::string kind = "bigru-attn";
  std::size_t embedding_dim = 64;
  std::size_t hidden_dim = 128;
  std::size_t layers = 1;
  std::size_t attention_heads = 1;
  std::size_t src_vocab_size = 0;
  std::size_t tgt_vocab_size = 0;

  // Throws ValidationError for unsupported or degenerate settings.
  void validate() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// Expected name -> shape of every parameter for `arch`.
std::map<std::string, Shape> parameter_shapes(const Architecture& arch);

struct NmtModel {
  Architecture arch;
  ParamMap params;
  textpipe::Vocabulary src_vocab;
  textpipe::Vocabulary tgt_vocab;
  std::uint64_t rng_seed = 0;

  // Fills vocabulary sizes into `arch` and draws every parameter from
  // uniform(-0.08, 0.08) with a generator seeded by `seed`.
  static NmtModel create(Architecture arch, textpipe::Vocabulary src_vocab,
                         textpipe::Vocabulary tgt_vocab, std::uint64_t seed);

  // Checks names and shapes against `arch` and vocab sizes.
  void validate() const;
};

/// Builds the model's computation on a Tape.
///
/// Parameters are bound as leaves once per builder. When `grads` is given,
/// it must hold a zeroed tensor per parameter (see zeros_like) and receives
/// the gradients when the tape runs backward.
class GraphBuilder {
 public:
  GraphBuilder(const NmtModel& model, Tape& tape, ParamMap* grads = nullptr);

  struct Memory {
    Var states;  // [S x 2H] concatenated forward/backward encoder states
    Var keys;    // [S x H] states projected into the decoder space
    Var initial_hidden;
  };

  struct Step {
    Var hidden;
    Var logits;
  };

  // Throws ValidationError("invalid token id") on out-of-range ids.
  Memory encode(std::span<const TokenId> src);
  Step step(const Memory& memory, Var hidden, TokenId previous);

 private:
  struct Gru {
    Var w_in, w_hid, b_in, b_hid;
  };

  Var bind(const std::string& name);
  Gru bind_gru(const std::string& prefix);

  const NmtModel& model_;
  Tape& tape_;
  ParamMap* grads_;
  Var src_embedding_, tgt_embedding_;
  Gru enc_fwd_, enc_bwd_, dec_;
  Var bridge_w_, bridge_b_, attention_w_, combine_w_, combine_b_, output_w_, output_b_;
};

// Per-position logits [tgt_in.size() x tgt vocab] for teacher-forced decoder
// inputs `tgt_in`. Both sequences must be non-empty.
Tensor forward(const NmtModel& model, std::span<const TokenId> src, std::span<const TokenId> tgt_in);

}  // namespace adaptmt::nmt
