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

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "adaptmt/adaptation/config.hpp"
#include "adaptmt/common/error.hpp"
#include "adaptmt/neuralmt/checkpoint.hpp"
#include "adaptmt/simulator/corpus.hpp"
#include "adaptmt/simulator/experiment.hpp"

namespace fs = std::filesystem;

// Generates the synthetic corpus, pretrains a model on it and writes a
// project directory usable by adaptmt-sim and adaptmt-server.
int main(int argc, char** argv) {
  CLI::App app{"Builds a pretrained synthetic-domain project."};
  std::string out_dir;
  std::string project = "synthetic";
  adaptmt::sim::CorpusOptions corpus;
  adaptmt::sim::PretrainOptions pretrain;
  double ol_learning_rate = 0.05;
  std::size_t max_length = 30;
  app.add_option("--out-dir", out_dir, "directory for the project files")->required();
  app.add_option("--project", project, "project id");
  app.add_option("--seed", corpus.seed, "corpus and initialization seed");
  app.add_option("--train-size", corpus.train_size);
  app.add_option("--dev-size", corpus.dev_size);
  app.add_option("--test-size", corpus.test_size);
  app.add_option("--epochs", pretrain.epochs);
  app.add_option("--embedding-dim", pretrain.embedding_dim);
  app.add_option("--hidden-dim", pretrain.hidden_dim);
  app.add_option("--bpe-merges", pretrain.bpe_merges, "0 keeps word-level vocabularies");
  app.add_option("--restarts", pretrain.restarts);
  app.add_option("--ol-learning-rate", ol_learning_rate, "learning rate written to the config");
  app.add_option("--max-length", max_length);
  CLI11_PARSE(app, argc, argv);

  try {
    if (!adaptmt::adapt::is_valid_project_id(project)) throw adaptmt::ValidationError("invalid project id: " + project);
    pretrain.seed = corpus.seed;
    const fs::path dir = fs::absolute(out_dir);
    fs::create_directories(dir);
    const auto data = adaptmt::sim::generate_corpus(corpus);
    adaptmt::sim::write_document(data.train, dir / "train.tsv");
    adaptmt::sim::write_document(data.dev, dir / "dev.tsv");
    adaptmt::sim::write_document(data.test, dir / "test.tsv");

    const auto system = adaptmt::sim::pretrain(data.train, data.dev, pretrain);
    adaptmt::adapt::ModelConfig config;
    config.project_id = project;
    config.src_lang = "en";
    config.tgt_lang = "es";
    config.learning_rate = ol_learning_rate;
    config.max_length = max_length;
    config.checkpoint_path = dir / (project + ".ckpt");
    if (system.bpe) {
      config.bpe_model_path = dir / (project + ".bpe");
      system.bpe->save(config.bpe_model_path);
    }
    adaptmt::nmt::save_checkpoint(system.model, config.checkpoint_path);
    adaptmt::adapt::save_config(config, dir / (project + ".conf"));

    std::cout << "train_loss=" << system.epoch_losses.back() << " dev_loss=" << system.dev_loss
              << " init_seed=" << system.init_seed << '\n'
              << "wrote " << (dir / (project + ".conf")).string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
