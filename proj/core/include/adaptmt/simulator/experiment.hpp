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
#include <filesystem>
#include <optional>
#include <vector>

#include "adaptmt/adaptation/config.hpp"
#include "adaptmt/neuralmt/model.hpp"
#include "adaptmt/simulator/corpus.hpp"
#include "adaptmt/simulator/simulation.hpp"
#include "adaptmt/textpipe/bpe.hpp"
#include "adaptmt/textpipe/tokenizer.hpp"

namespace adaptmt::sim {

struct PretrainOptions {
  std::size_t embedding_dim = 64;
  std::size_t hidden_dim = 128;
  std::size_t epochs = 40;
  double learning_rate = 0.005;  // Adam
  std::size_t batch_size = 4;
  std::uint64_t seed = 1;
  std::size_t bpe_merges = 0;  // 0: word-level, no BPE model
  // Independent initializations tried; the one with the lowest dev loss is
  // kept. Ignored without a dev set.
  std::size_t restarts = 2;
};

struct PretrainedSystem {
  nmt::NmtModel model;
  std::optional<textpipe::BpeModel> bpe;
  std::vector<double> epoch_losses;
  std::uint64_t init_seed = 0;
  double dev_loss = 0.0;  // mean over `dev`, 0 without one
};

// Builds vocabularies (and BPE merges when requested) from `train` and fits
// a fresh model to it with Adam. Restart k uses seed + k.
PretrainedSystem pretrain(const Document& train, const Document& dev, const PretrainOptions& options,
                          const textpipe::Tokenizer& tokenizer = textpipe::Tokenizer());

struct ExperimentOptions {
  CorpusOptions corpus;
  PretrainOptions pretrain;
  double ol_learning_rate = 0.05;
  std::size_t ol_iterations = 1;
  std::size_t beam_size = 1;
  std::size_t max_length = 30;
};

struct ExperimentResult {
  SyntheticCorpus corpus;
  SimulationRun static_run;
  SimulationRun adaptive_run;
  ComparisonReport comparison;
  double seconds = 0.0;
};

// Config used for sessions over a pretrained system. Its checkpoint path is
// a placeholder; simulations never write checkpoints.
adapt::ModelConfig experiment_config(const ExperimentOptions& options);

// Generates the corpus, pretrains on its training part and replays the test
// part once without and once with online learning, each from the same
// pretrained parameters.
ExperimentResult run_efficacy_experiment(const ExperimentOptions& options);

}  // namespace adaptmt::sim
