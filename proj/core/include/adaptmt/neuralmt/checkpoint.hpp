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

#include <filesystem>
#include <string>
#include <string_view>

#include "adaptmt/neuralmt/model.hpp"

namespace adaptmt::nmt {

inline constexpr std::string_view kCheckpointVersion = "adaptmt-ckpt-v1";

/// Checkpoint container:
///
///   "adaptmt-ckpt-v1\n"
///   u64 little-endian length N, then N bytes of JSON header holding the
///     architecture, rng_seed, vocabulary file names, opaque session state
///     and the ordered list of parameter names and shapes
///   every parameter's values as little-endian IEEE-754 doubles, in header
///     order
///   u64 little-endian FNV-1a digest of everything above
///
/// Vocabularies are written next to the checkpoint as
/// `<file>.src.vocab` / `<file>.tgt.vocab` and referenced by file name.
struct CheckpointContents {
  NmtModel model;
  // JSON text stored by the caller, empty when none was given.
  std::string session_state;
};

// Writes atomically (temporary file + rename).
void save_checkpoint(const NmtModel& model, const std::filesystem::path& path,
                     std::string_view session_state = {});

// Throws IncompatibleCheckpoint for another format version and ParseError
// for truncated or corrupted files.
CheckpointContents load_checkpoint(const std::filesystem::path& path);

}  // namespace adaptmt::nmt
