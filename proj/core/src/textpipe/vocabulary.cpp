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

#include "adaptmt/textpipe/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "adaptmt/common/error.hpp"

namespace adaptmt::textpipe {
namespace {

constexpr const char* kReservedNames[kNumReserved] = {"<pad>", "<unk>", "<bos>", "<eos>"};

}  // namespace

Vocabulary::Vocabulary() {
  for (const char* name : kReservedNames) add(name);
}

Vocabulary Vocabulary::build(std::span<const Tokens> sequences, std::size_t min_count) {
  std::map<std::string, std::size_t> freq;
  for (const auto& seq : sequences) {
    for (const auto& tok : seq) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary vocab;
  for (const auto& [tok, count] : ranked) {
    if (count >= min_count) vocab.add(tok);
  }
  return vocab;
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  Vocabulary vocab;
  for (const auto& tok : tokens) vocab.add(tok);
  return vocab;
}

TokenId Vocabulary::id_of(std::string_view token) const {
  auto it = id_of_.find(std::string(token));
  return it == id_of_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return id_of_.count(std::string(token)) != 0;
}

const std::string& Vocabulary::token_of(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= token_of_.size()) {
    throw ValidationError("invalid token id");
  }
  return token_of_[static_cast<std::size_t>(id)];
}

TokenId Vocabulary::add(const std::string& token) {
  auto [it, inserted] = id_of_.emplace(token, static_cast<TokenId>(token_of_.size()));
  if (inserted) token_of_.push_back(token);
  return it->second;
}

std::vector<TokenId> Vocabulary::encode(const Tokens& tokens) const {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) ids.push_back(id_of(tok));
  return ids;
}

Tokens Vocabulary::decode(std::span<const TokenId> ids) const {
  Tokens out;
  out.reserve(ids.size());
  for (TokenId id : ids) {
    if (id == kPadId || id == kBosId || id == kEosId) continue;
    out.push_back(token_of(id));
  }
  return out;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write vocabulary: " + path.string());
  for (const auto& tok : token_of_) out << tok << '\n';
  if (!out) throw Error("failed writing vocabulary: " + path.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read vocabulary: " + path.string());
  Vocabulary vocab;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno <= kNumReserved) {
      if (line != kReservedNames[lineno - 1]) {
        throw ParseError("vocabulary: line " + std::to_string(lineno) + " must be " +
                             kReservedNames[lineno - 1],
                         lineno);
      }
      continue;
    }
    if (line.empty() || vocab.contains(line)) {
      throw ParseError("vocabulary: empty or duplicate token", lineno);
    }
    vocab.add(line);
  }
  if (lineno < kNumReserved) throw ParseError("vocabulary: missing reserved entries");
  return vocab;
}

}  // namespace adaptmt::textpipe
