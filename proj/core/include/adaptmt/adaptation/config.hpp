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
#include <string>
#include <string_view>

#include "adaptmt/neuralmt/decode.hpp"

namespace adaptmt::adapt {

/// Per-project settings, stored as a key:value text file:
///
///   version: 1
///   project_id: legal-en-es
///   src_lang: en
///   tgt_lang: es
///   checkpoint_path: models/legal.ckpt
///   learning_rate: 0.05
///
/// `version`, `project_id`, `src_lang`, `tgt_lang` and `checkpoint_path` are
/// required. Blank lines and lines starting with '#' are ignored. Unknown
/// keys are rejected. Relative paths are resolved against the directory of
/// the config file.
struct ModelConfig {
  std::string project_id;
  std::string src_lang;
  std::string tgt_lang;
  std::string tokenizer = "simple";
  std::filesystem::path bpe_model_path;  // empty: no subword segmentation
  double learning_rate = 0.05;
  std::size_t ol_iterations = 1;
  std::size_t beam_size = 1;
  std::size_t max_length = 100;
  double length_penalty = 0.0;
  std::filesystem::path checkpoint_path;
  std::size_t checkpoint_every = 10;  // 0: never persist automatically

  // Throws ValidationError naming the offending field.
  void validate() const;
  nmt::DecodeOptions decode_options() const;

  std::string serialize() const;
  static ModelConfig parse(std::string_view text, const std::filesystem::path& base_dir = {});

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

inline constexpr int kConfigVersion = 1;

// Project ids are non-empty, at most 64 chars of [A-Za-z0-9_.-], and do not
// start with '.'.
bool is_valid_project_id(std::string_view id) noexcept;

ModelConfig load_config(const std::filesystem::path& path);
void save_config(const ModelConfig& config, const std::filesystem::path& path);

}  // namespace adaptmt::adapt
