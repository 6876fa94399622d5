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

#include "adaptmt/neuralmt/model.hpp"

#include <random>
#include <vector>

#include "adaptmt/common/error.hpp"

namespace adaptmt::nmt {
namespace {

void check_ids(std::span<const TokenId> ids, std::size_t vocab_size) {
  for (TokenId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
      throw ValidationError("invalid token id");
    }
  }
}

// Portable uniform draw in [lo, hi) from the top 53 bits of a 64-bit word.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

}  // namespace

void Architecture::validate() const {
  if (kind != "bigru-attn") throw ValidationError("unsupported architecture kind: " + kind);
  if (layers != 1) throw ValidationError("bigru-attn supports exactly one layer");
  if (attention_heads != 1) throw ValidationError("bigru-attn supports exactly one attention head");
  if (embedding_dim == 0 || hidden_dim == 0) throw ValidationError("model dimensions must be positive");
  if (src_vocab_size <= textpipe::kNumReserved || tgt_vocab_size <= textpipe::kNumReserved) {
    throw ValidationError("vocabularies must hold tokens beyond the reserved entries");
  }
}

std::map<std::string, Shape> parameter_shapes(const Architecture& arch) {
  const std::size_t e = arch.embedding_dim, h = arch.hidden_dim;
  std::map<std::string, Shape> shapes = {
      {"src_embedding", {arch.src_vocab_size, e}},
      {"tgt_embedding", {arch.tgt_vocab_size, e}},
      {"bridge.weight", {h, 2 * h}},
      {"bridge.bias", {h}},
      {"attention.weight", {h, 2 * h}},
      {"combine.weight", {h, 3 * h}},
      {"combine.bias", {h}},
      {"output.weight", {arch.tgt_vocab_size, h}},
      {"output.bias", {arch.tgt_vocab_size}},
  };
  for (const char* prefix : {"encoder.fwd", "encoder.bwd", "decoder"}) {
    const std::string p(prefix);
    shapes[p + ".w_in"] = {3 * h, e};
    shapes[p + ".w_hid"] = {3 * h, h};
    shapes[p + ".b_in"] = {3 * h};
    shapes[p + ".b_hid"] = {3 * h};
  }
  return shapes;
}

NmtModel NmtModel::create(Architecture arch, textpipe::Vocabulary src_vocab,
                          textpipe::Vocabulary tgt_vocab, std::uint64_t seed) {
  arch.src_vocab_size = src_vocab.size();
  arch.tgt_vocab_size = tgt_vocab.size();
  arch.validate();

  NmtModel model;
  model.arch = std::move(arch);
  model.src_vocab = std::move(src_vocab);
  model.tgt_vocab = std::move(tgt_vocab);
  model.rng_seed = seed;

  std::mt19937_64 rng(seed);
  for (auto& [name, shape] : parameter_shapes(model.arch)) {
    Tensor t(shape);
    for (double& v : t.data()) v = uniform(rng, -kInitRange, kInitRange);
    model.params.emplace(name, std::move(t));
  }
  return model;
}

void NmtModel::validate() const {
  arch.validate();
  if (arch.src_vocab_size != src_vocab.size() || arch.tgt_vocab_size != tgt_vocab.size()) {
    throw ValidationError("architecture vocabulary sizes disagree with the vocabularies");
  }
  const auto shapes = parameter_shapes(arch);
  if (shapes.size() != params.size()) throw ValidationError("parameter set does not match architecture");
  for (const auto& [name, shape] : shapes) {
    auto it = params.find(name);
    if (it == params.end()) throw ValidationError("missing parameter: " + name);
    if (it->second.shape() != shape) {
      throw ValidationError("parameter " + name + " has shape " + shape_string(it->second.shape()) +
                            ", expected " + shape_string(shape));
    }
  }
}

GraphBuilder::GraphBuilder(const NmtModel& model, Tape& tape, ParamMap* grads)
    : model_(model), tape_(tape), grads_(grads) {
  src_embedding_ = bind("src_embedding");
  tgt_embedding_ = bind("tgt_embedding");
  enc_fwd_ = bind_gru("encoder.fwd");
  enc_bwd_ = bind_gru("encoder.bwd");
  dec_ = bind_gru("decoder");
  bridge_w_ = bind("bridge.weight");
  bridge_b_ = bind("bridge.bias");
  attention_w_ = bind("attention.weight");
  combine_w_ = bind("combine.weight");
  combine_b_ = bind("combine.bias");
  output_w_ = bind("output.weight");
  output_b_ = bind("output.bias");
}

Var GraphBuilder::bind(const std::string& name) {
  auto it = model_.params.find(name);
  if (it == model_.params.end()) throw ValidationError("missing parameter: " + name);
  std::span<double> grad;
  if (grads_ != nullptr) {
    auto g = grads_->find(name);
    if (g == grads_->end()) throw ValidationError("missing gradient buffer: " + name);
    grad = g->second.data();
  }
  return tape_.leaf(it->second, grad);
}

GraphBuilder::Gru GraphBuilder::bind_gru(const std::string& prefix) {
  return Gru{bind(prefix + ".w_in"), bind(prefix + ".w_hid"), bind(prefix + ".b_in"),
             bind(prefix + ".b_hid")};
}

GraphBuilder::Memory GraphBuilder::encode(std::span<const TokenId> src) {
  if (src.empty()) throw ValidationError("empty source sequence");
  check_ids(src, model_.arch.src_vocab_size);
  const std::size_t n = src.size();
  const std::size_t h = model_.arch.hidden_dim;

  std::vector<Var> embedded(n);
  for (std::size_t i = 0; i < n; ++i) {
    embedded[i] = tape_.row(src_embedding_, static_cast<std::size_t>(src[i]));
  }

  std::vector<Var> fwd(n), bwd(n);
  Var state = tape_.constant(std::vector<double>(h, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    state = tape_.gru(embedded[i], state, enc_fwd_.w_in, enc_fwd_.w_hid, enc_fwd_.b_in, enc_fwd_.b_hid);
    fwd[i] = state;
  }
  state = tape_.constant(std::vector<double>(h, 0.0));
  for (std::size_t i = n; i-- > 0;) {
    state = tape_.gru(embedded[i], state, enc_bwd_.w_in, enc_bwd_.w_hid, enc_bwd_.b_in, enc_bwd_.b_hid);
    bwd[i] = state;
  }

  std::vector<Var> states(n), keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    states[i] = tape_.concat({fwd[i], bwd[i]});
    keys[i] = tape_.affine(attention_w_, states[i]);
  }

  Memory memory;
  memory.states = tape_.stack(states);
  memory.keys = tape_.stack(keys);
  memory.initial_hidden = tape_.tanh(tape_.affine(bridge_w_, tape_.concat({fwd[n - 1], bwd[0]}), bridge_b_));
  return memory;
}

GraphBuilder::Step GraphBuilder::step(const Memory& memory, Var hidden, TokenId previous) {
  const TokenId prev[] = {previous};
  check_ids(prev, model_.arch.tgt_vocab_size);
  Var input = tape_.row(tgt_embedding_, static_cast<std::size_t>(previous));
  Var next = tape_.gru(input, hidden, dec_.w_in, dec_.w_hid, dec_.b_in, dec_.b_hid);
  Var weights = tape_.softmax(tape_.affine(memory.keys, next));
  Var context = tape_.matvec_t(memory.states, weights);
  Var attentional = tape_.tanh(tape_.affine(combine_w_, tape_.concat({context, next}), combine_b_));
  return Step{next, tape_.affine(output_w_, attentional, output_b_)};
}

Tensor forward(const NmtModel& model, std::span<const TokenId> src, std::span<const TokenId> tgt_in) {
  if (tgt_in.empty()) throw ValidationError("empty target sequence");
  Tape tape(false);
  GraphBuilder graph(model, tape);
  const auto memory = graph.encode(src);
  const std::size_t vocab = model.arch.tgt_vocab_size;
  Tensor logits({tgt_in.size(), vocab});
  Var hidden = memory.initial_hidden;
  for (std::size_t t = 0; t < tgt_in.size(); ++t) {
    const auto step = graph.step(memory, hidden, tgt_in[t]);
    hidden = step.hidden;
    const auto row = tape.value(step.logits);
    std::copy(row.begin(), row.end(), logits.data().begin() + static_cast<std::ptrdiff_t>(t * vocab));
  }
  return logits;
}

}  // namespace adaptmt::nmt
