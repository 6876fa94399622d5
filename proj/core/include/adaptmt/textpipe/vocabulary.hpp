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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adaptmt/textpipe/tokenizer.hpp"

namespace adaptmt::textpipe {

using TokenId = std::int32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kBosId = 2;
inline constexpr TokenId kEosId = 3;
inline constexpr std::size_t kNumReserved = 4;

// Token <-> index map with PAD/UNK/BOS/EOS pinned at indices 0..3.
class Vocabulary {
 public:
  Vocabulary();

  // Adds every distinct token of `sequences` that occurs at least
  // `min_count` times, most frequent first (ties alphabetical).
  static Vocabulary build(std::span<const Tokens> sequences, std::size_t min_count = 1);
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  std::size_t size() const noexcept { return token_of_.size(); }

  // Returns kUnkId for unknown tokens.
  TokenId id_of(std::string_view token) const;
  bool contains(std::string_view token) const;
  // Throws ValidationError("invalid token id") when out of range.
  const std::string& token_of(TokenId id) const;

  // Adds if absent; returns the id either way.
  TokenId add(const std::string& token);

  std::vector<TokenId> encode(const Tokens& tokens) const;
  // Drops PAD/BOS/EOS.
  Tokens decode(std::span<const TokenId> ids) const;

  // One token per line; line number - 1 is the index.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  const std::vector<std::string>& tokens() const noexcept { return token_of_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.token_of_ == b.token_of_;
  }

 private:
  std::vector<std::string> token_of_;
  std::unordered_map<std::string, TokenId> id_of_;
};

}  // namespace adaptmt::textpipe
