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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adaptmt/adaptation/config.hpp"
#include "adaptmt/common/time.hpp"
#include "adaptmt/neuralmt/model.hpp"
#include "adaptmt/textpipe/bpe.hpp"
#include "adaptmt/textpipe/tokenizer.hpp"

namespace adaptmt::adapt {

struct TrainingPair {
  std::string source;
  std::string post_edit;
  std::string segment_id;
  Instant timestamp{};
};

struct UpdateRecord {
  TrainingPair pair;
  double pre_loss = 0.0;
  double post_loss = 0.0;
};

struct UpdateReport {
  double pre_loss = 0.0;   // loss before the first gradient step
  double post_loss = 0.0;  // loss re-evaluated after the last step
  std::size_t steps = 0;
  double elapsed_seconds = 0.0;
  std::size_t updates_applied = 0;
};

struct Translation {
  std::string text;
  std::string hypothesis_id;
};

// Raw text <-> model token ids: tokenize, segment into subwords, look up.
class TextPipeline {
 public:
  TextPipeline(textpipe::Tokenizer tokenizer, std::optional<textpipe::BpeModel> bpe);

  textpipe::Tokens segment(std::string_view text) const;
  std::string restore(const textpipe::Tokens& subwords) const;

  const textpipe::Tokenizer& tokenizer() const noexcept { return tokenizer_; }
  const std::optional<textpipe::BpeModel>& bpe() const noexcept { return bpe_; }

 private:
  textpipe::Tokenizer tokenizer_;
  std::optional<textpipe::BpeModel> bpe_;
};

/// A model being adapted online from confirmed post-edits.
///
/// Single writer: confirm_and_update needs exclusive access, while
/// translate_segment and the other const members may run concurrently with
/// each other.
class AdaptiveSession {
 public:
  // Loads the BPE model named by the config, if any.
  AdaptiveSession(ModelConfig config, nmt::NmtModel model);
  AdaptiveSession(ModelConfig config, nmt::NmtModel model, std::optional<textpipe::BpeModel> bpe);

  AdaptiveSession(AdaptiveSession&&) noexcept;
  AdaptiveSession& operator=(AdaptiveSession&&) noexcept;
  ~AdaptiveSession();

  // Throws ValidationError("untranslatable segment") when the source has no
  // tokens.
  Translation translate_segment(std::string_view source) const;

  // ol_iterations SGD steps on the pair. On NumericError the parameters are
  // restored bit for bit and the error is rethrown.
  UpdateReport confirm_and_update(const TrainingPair& pair);

  // Current loss of the pair under the model.
  double pair_loss(std::string_view source, std::string_view post_edit) const;

  std::optional<std::string> hypothesis(std::string_view hypothesis_id) const;

  // Writes to config().checkpoint_path, or to `path` when given.
  std::filesystem::path checkpoint() const;
  std::filesystem::path checkpoint(const std::filesystem::path& path) const;
  static AdaptiveSession restore(const std::filesystem::path& path, ModelConfig config);
  // Restores from config.checkpoint_path.
  static AdaptiveSession open(ModelConfig config);

  // True when checkpoint_every > 0 and the latest update completes a period.
  bool checkpoint_due() const noexcept;

  std::size_t updates_applied() const noexcept { return update_log_.size(); }
  const std::vector<UpdateRecord>& update_log() const noexcept { return update_log_; }
  // One line per update: segment_id TAB timestamp TAB pre_loss TAB post_loss.
  std::string export_update_log() const;

  const nmt::NmtModel& model() const noexcept { return model_; }
  const ModelConfig& config() const noexcept { return config_; }
  const TextPipeline& pipeline() const noexcept { return pipeline_; }

 private:
  struct HypothesisStore;

  std::vector<nmt::TokenId> source_ids(std::string_view text) const;
  std::vector<nmt::TokenId> target_ids(std::string_view text) const;

  ModelConfig config_;
  nmt::NmtModel model_;
  TextPipeline pipeline_;
  std::vector<UpdateRecord> update_log_;
  std::unique_ptr<HypothesisStore> hypotheses_;
};

std::optional<textpipe::BpeModel> load_bpe_for(const ModelConfig& config);

}  // namespace adaptmt::adapt
