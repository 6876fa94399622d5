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

#include "adaptmt/simulator/experiment.hpp"

#include <chrono>
#include <filesystem>

#include "adaptmt/adaptation/session.hpp"
#include "adaptmt/neuralmt/training.hpp"
#include "adaptmt/textpipe/vocabulary.hpp"

namespace adaptmt::sim {

PretrainedSystem pretrain(const Document& train, const Document& dev, const PretrainOptions& options,
                          const textpipe::Tokenizer& tokenizer) {
  if (train.empty()) throw ValidationError("empty training document");
  if (options.restarts == 0) throw ValidationError("restarts must be at least 1");
  auto tokenize_side = [&](const Document& doc, bool source) {
    std::vector<textpipe::Tokens> out;
    for (const auto& seg : doc) out.push_back(tokenizer.tokenize(source ? seg.source : seg.reference));
    return out;
  };
  auto src_tokens = tokenize_side(train, true);
  auto tgt_tokens = tokenize_side(train, false);
  auto dev_src = tokenize_side(dev, true);
  auto dev_tgt = tokenize_side(dev, false);

  std::optional<textpipe::BpeModel> bpe;
  if (options.bpe_merges > 0) {
    textpipe::Tokens all;
    for (const auto& t : src_tokens) all.insert(all.end(), t.begin(), t.end());
    for (const auto& t : tgt_tokens) all.insert(all.end(), t.begin(), t.end());
    bpe = textpipe::bpe_train(all, options.bpe_merges);
    for (auto* side : {&src_tokens, &tgt_tokens, &dev_src, &dev_tgt}) {
      for (auto& t : *side) t = bpe->apply(t);
    }
  }

  const auto src_vocab = textpipe::Vocabulary::build(src_tokens);
  const auto tgt_vocab = textpipe::Vocabulary::build(tgt_tokens);
  auto encode = [&](const std::vector<textpipe::Tokens>& src, const std::vector<textpipe::Tokens>& tgt) {
    std::vector<nmt::IdPair> pairs;
    for (std::size_t i = 0; i < src.size(); ++i) {
      pairs.push_back(nmt::IdPair{src_vocab.encode(src[i]), tgt_vocab.encode(tgt[i])});
    }
    return pairs;
  };
  const auto pairs = encode(src_tokens, tgt_tokens);
  const auto dev_pairs = encode(dev_src, dev_tgt);

  nmt::Architecture arch;
  arch.embedding_dim = options.embedding_dim;
  arch.hidden_dim = options.hidden_dim;
  arch.src_vocab_size = src_vocab.size();
  arch.tgt_vocab_size = tgt_vocab.size();

  const std::size_t restarts = dev_pairs.empty() ? 1 : options.restarts;
  std::optional<PretrainedSystem> best;
  for (std::size_t k = 0; k < restarts; ++k) {
    PretrainedSystem candidate;
    candidate.bpe = bpe;
    candidate.init_seed = options.seed + k;
    candidate.model = nmt::NmtModel::create(arch, src_vocab, tgt_vocab, candidate.init_seed);
    nmt::TrainOptions train_options;
    train_options.epochs = options.epochs;
    train_options.learning_rate = options.learning_rate;
    train_options.batch_size = options.batch_size;
    train_options.optimizer = nmt::Optimizer::kAdam;
    train_options.seed = candidate.init_seed;
    candidate.epoch_losses = nmt::train_batch(candidate.model, pairs, train_options);
    double dev_total = 0.0;
    for (const auto& p : dev_pairs) dev_total += nmt::sequence_loss(candidate.model, p.src, p.tgt);
    candidate.dev_loss = dev_pairs.empty() ? 0.0 : dev_total / static_cast<double>(dev_pairs.size());
    if (!best || candidate.dev_loss < best->dev_loss) best = std::move(candidate);
  }
  return std::move(*best);
}

adapt::ModelConfig experiment_config(const ExperimentOptions& options) {
  adapt::ModelConfig config;
  config.project_id = "synthetic";
  config.src_lang = "en";
  config.tgt_lang = "es";
  config.learning_rate = options.ol_learning_rate;
  config.ol_iterations = options.ol_iterations;
  config.beam_size = options.beam_size;
  config.max_length = options.max_length;
  config.checkpoint_path = std::filesystem::temp_directory_path() / "adaptmt-synthetic.ckpt";
  config.checkpoint_every = 0;
  return config;
}

ExperimentResult run_efficacy_experiment(const ExperimentOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.corpus = generate_corpus(options.corpus);
  PretrainedSystem system = pretrain(result.corpus.train, result.corpus.dev, options.pretrain);
  const adapt::ModelConfig config = experiment_config(options);

  adapt::AdaptiveSession static_session(config, system.model, system.bpe);
  result.static_run = run_simulation(static_session, result.corpus.test, false);
  adapt::AdaptiveSession adaptive_session(config, std::move(system.model), system.bpe);
  result.adaptive_run = run_simulation(adaptive_session, result.corpus.test, true);
  result.comparison = compare_runs(result.static_run, result.adaptive_run);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace adaptmt::sim
