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

#include "adaptmt/neuralmt/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "adaptmt/common/error.hpp"

namespace adaptmt::nmt {
namespace {

Var build_loss(GraphBuilder& graph, Tape& tape, std::span<const TokenId> src,
               std::span<const TokenId> tgt) {
  if (tgt.empty()) throw ValidationError("empty target sequence");
  const auto memory = graph.encode(src);
  std::vector<Var> terms;
  terms.reserve(tgt.size() + 1);
  Var hidden = memory.initial_hidden;
  TokenId previous = textpipe::kBosId;
  for (std::size_t t = 0; t <= tgt.size(); ++t) {
    const TokenId gold = t < tgt.size() ? tgt[t] : textpipe::kEosId;
    const auto step = graph.step(memory, hidden, previous);
    hidden = step.hidden;
    terms.push_back(tape.pick(tape.log_softmax(step.logits), static_cast<std::size_t>(gold)));
    previous = gold;
  }
  // Mean log-likelihood; the caller negates.
  return tape.mean(terms);
}

void check_matching(const ParamMap& params, const ParamMap& grads) {
  if (params.size() != grads.size()) throw ValidationError("gradient map does not match parameters");
  for (const auto& [name, p] : params) {
    auto it = grads.find(name);
    if (it == grads.end()) throw ValidationError("missing gradient for " + name);
    if (it->second.shape() != p.shape()) throw ValidationError("gradient shape mismatch for " + name);
  }
}

void check_finite(const ParamMap& grads) {
  for (const auto& [name, g] : grads) {
    if (!g.all_finite()) throw NumericError("non-finite gradient for " + name);
  }
}

double clip_scale(const ParamMap& grads, double clip_norm) {
  if (clip_norm <= 0.0) return 1.0;
  const double norm = global_norm(grads);
  return norm > clip_norm ? clip_norm / norm : 1.0;
}

void accumulate(ParamMap& into, const ParamMap& from, double weight) {
  for (auto& [name, t] : into) {
    auto src = from.at(name).data();
    auto dst = t.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += weight * src[i];
  }
}

struct AdamState {
  ParamMap m, v;
  std::size_t step = 0;
};

void adam_step(NmtModel& model, const ParamMap& grads, AdamState& state, double lr, double clip_norm) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  check_matching(model.params, grads);
  check_finite(grads);
  const double scale = clip_scale(grads, clip_norm);
  ++state.step;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
  for (auto& [name, p] : model.params) {
    auto g = grads.at(name).data();
    auto m = state.m.at(name).data();
    auto v = state.v.at(name).data();
    auto w = p.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g[i] * scale;
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * gi;
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * gi * gi;
      w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + kEps);
    }
  }
}

}  // namespace

double sequence_loss(const NmtModel& model, std::span<const TokenId> src, std::span<const TokenId> tgt) {
  Tape tape(false);
  GraphBuilder graph(model, tape);
  return -tape.scalar(build_loss(graph, tape, src, tgt));
}

LossAndGrad loss_and_grad(const NmtModel& model, std::span<const TokenId> src,
                          std::span<const TokenId> tgt) {
  LossAndGrad out;
  out.grads = zeros_like(model.params);
  Tape tape(true);
  GraphBuilder graph(model, tape, &out.grads);
  const Var log_likelihood = build_loss(graph, tape, src, tgt);
  tape.backward(log_likelihood);
  out.loss = -tape.scalar(log_likelihood);
  for (auto& [name, g] : out.grads) {
    for (double& v : g.data()) v = -v;
  }
  return out;
}

void sgd_step(NmtModel& model, const ParamMap& grads, double lr, double clip_norm) {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ValidationError("learning rate must be positive");
  check_matching(model.params, grads);
  check_finite(grads);
  const double step = lr * clip_scale(grads, clip_norm);
  for (auto& [name, p] : model.params) {
    auto g = grads.at(name).data();
    auto w = p.data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * g[i];
  }
}

std::vector<double> train_batch(NmtModel& model, std::span<const IdPair> pairs, const TrainOptions& options) {
  if (pairs.empty()) throw ValidationError("no training pairs");
  if (options.batch_size == 0) throw ValidationError("batch size must be positive");
  if (!(options.learning_rate > 0.0)) throw ValidationError("learning rate must be positive");

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  AdamState adam;
  if (options.optimizer == Optimizer::kAdam) {
    adam.m = zeros_like(model.params);
    adam.v = zeros_like(model.params);
  }

  std::vector<double> trace;
  trace.reserve(options.epochs);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    // Fisher-Yates with our own draws keeps the order identical across
    // standard library implementations.
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      const double weight = 1.0 / static_cast<double>(end - start);
      ParamMap batch_grads = zeros_like(model.params);
      for (std::size_t k = start; k < end; ++k) {
        const IdPair& pair = pairs[order[k]];
        auto lg = loss_and_grad(model, pair.src, pair.tgt);
        total += lg.loss;
        accumulate(batch_grads, lg.grads, weight);
      }
      if (options.optimizer == Optimizer::kAdam) {
        adam_step(model, batch_grads, adam, options.learning_rate, options.clip_norm);
      } else {
        sgd_step(model, batch_grads, options.learning_rate, options.clip_norm);
      }
    }
    trace.push_back(total / static_cast<double>(pairs.size()));
  }
  return trace;
}

}  // namespace adaptmt::nmt
