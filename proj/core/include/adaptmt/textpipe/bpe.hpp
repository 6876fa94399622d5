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
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adaptmt/textpipe/tokenizer.hpp"

namespace adaptmt::textpipe {

// Marker appended to every non-final subword piece of a token.
inline constexpr std::string_view kJoiner = "@@";
// Marks the last symbol of a word while learning and applying merges.
inline constexpr std::string_view kEndOfWord = "</w>";

using MergePair = std::pair<std::string, std::string>;

/// Byte-pair-encoding merge table.
///
/// Merges are stored in learning order; rank 0 is the most frequent pair.
/// Symbols follow the subword-nmt convention: the last character of a word
/// carries the `</w>` suffix, so a merge like ("e", "r</w>") only applies at
/// the end of a word.
class BpeModel {
 public:
  BpeModel() = default;
  explicit BpeModel(std::vector<MergePair> merges);

  const std::vector<MergePair>& merges() const noexcept { return merges_; }
  std::size_t num_merges() const noexcept { return merges_.size(); }

  // Segments each token. Non-final pieces end with "@@".
  Tokens apply(const Tokens& tokens) const;
  Tokens apply_word(std::string_view word) const;

  // "#bpe v1 <n>" header followed by one "<left> <right>" line per merge.
  void save(const std::filesystem::path& path) const;
  static BpeModel load(const std::filesystem::path& path);
  std::string serialize() const;
  static BpeModel parse(std::string_view text);

  friend bool operator==(const BpeModel&, const BpeModel&) = default;

 private:
  std::vector<MergePair> merges_;
  std::map<MergePair, std::size_t> rank_;
};

// Learns up to `num_merges` merges greedily by pair frequency. Ties go to the
// lexicographically smallest pair. Stops early once no pair occurs.
// Throws ValidationError("empty training corpus") when `corpus` is empty.
BpeModel bpe_train(const Tokens& corpus, std::size_t num_merges);

struct UndoResult {
  Tokens tokens;
  // Set when the sequence ended on a piece still carrying a joiner; that
  // piece is kept verbatim.
  bool dangling_joiner = false;
};

UndoResult bpe_undo(const Tokens& subwords);

}  // namespace adaptmt::textpipe
