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

#include "adaptmt/textpipe/bpe.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "adaptmt/common/error.hpp"
#include "adaptmt/textpipe/utf8.hpp"

namespace adaptmt::textpipe {
namespace {

using Symbols = std::vector<std::string>;

Symbols initial_symbols(std::string_view word) {
  Symbols syms = utf8_chars(word);
  if (!syms.empty()) syms.back() += kEndOfWord;
  return syms;
}

// Merges every left-to-right occurrence of (left, right) in place.
void merge_pair(Symbols& syms, const MergePair& pair) {
  Symbols out;
  out.reserve(syms.size());
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (i + 1 < syms.size() && syms[i] == pair.first && syms[i + 1] == pair.second) {
      out.push_back(syms[i] + syms[i + 1]);
      ++i;
    } else {
      out.push_back(std::move(syms[i]));
    }
  }
  syms = std::move(out);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

BpeModel::BpeModel(std::vector<MergePair> merges) : merges_(std::move(merges)) {
  for (std::size_t i = 0; i < merges_.size(); ++i) rank_.emplace(merges_[i], i);
}

Tokens BpeModel::apply_word(std::string_view word) const {
  Symbols syms = initial_symbols(word);
  while (syms.size() > 1) {
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    const MergePair* best = nullptr;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      auto it = rank_.find(MergePair{syms[i], syms[i + 1]});
      if (it != rank_.end() && it->second < best_rank) {
        best_rank = it->second;
        best = &it->first;
      }
    }
    if (best == nullptr) break;
    merge_pair(syms, *best);
  }

  Tokens pieces;
  pieces.reserve(syms.size());
  for (std::size_t i = 0; i < syms.size(); ++i) {
    std::string& s = syms[i];
    if (i + 1 == syms.size()) {
      if (ends_with(s, kEndOfWord)) s.resize(s.size() - kEndOfWord.size());
      pieces.push_back(std::move(s));
    } else {
      pieces.push_back(s + std::string(kJoiner));
    }
  }
  return pieces;
}

Tokens BpeModel::apply(const Tokens& tokens) const {
  Tokens out;
  for (const auto& tok : tokens) {
    for (auto& piece : apply_word(tok)) out.push_back(std::move(piece));
  }
  return out;
}

std::string BpeModel::serialize() const {
  std::ostringstream os;
  os << "#bpe v1 " << merges_.size() << '\n';
  for (const auto& [left, right] : merges_) os << left << ' ' << right << '\n';
  return os.str();
}

BpeModel BpeModel::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("bpe model: missing header", 1);
  std::istringstream header(line);
  std::string magic, version;
  std::size_t count = 0;
  if (!(header >> magic >> version >> count) || magic != "#bpe" || version != "v1") {
    throw ParseError("bpe model: expected '#bpe v1 <num_merges>'", 1);
  }
  std::vector<MergePair> merges;
  merges.reserve(count);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0 || sp + 1 == line.size() ||
        line.find(' ', sp + 1) != std::string::npos) {
      throw ParseError("bpe model: expected '<left> <right>'", lineno);
    }
    merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
  }
  if (merges.size() != count) {
    throw ParseError("bpe model: header announces " + std::to_string(count) + " merges, found " +
                     std::to_string(merges.size()));
  }
  return BpeModel(std::move(merges));
}

void BpeModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write bpe model: " + path.string());
  out << serialize();
  if (!out) throw Error("failed writing bpe model: " + path.string());
}

BpeModel BpeModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read bpe model: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

BpeModel bpe_train(const Tokens& corpus, std::size_t num_merges) {
  if (corpus.empty()) throw ValidationError("empty training corpus");

  std::map<std::string, std::size_t> word_freq;
  for (const auto& w : corpus) {
    if (!w.empty()) ++word_freq[w];
  }
  std::vector<std::pair<Symbols, std::size_t>> words;
  words.reserve(word_freq.size());
  for (const auto& [w, f] : word_freq) words.emplace_back(initial_symbols(w), f);

  std::vector<MergePair> merges;
  while (merges.size() < num_merges) {
    std::map<MergePair, std::size_t> counts;
    for (const auto& [syms, freq] : words) {
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) counts[{syms[i], syms[i + 1]}] += freq;
    }
    if (counts.empty()) break;
    // std::map iterates in lexicographic pair order, so a strict '>' keeps
    // the smallest pair among equal counts.
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    const MergePair pair = best->first;
    for (auto& [syms, freq] : words) merge_pair(syms, pair);
    merges.push_back(pair);
  }
  return BpeModel(std::move(merges));
}

UndoResult bpe_undo(const Tokens& subwords) {
  UndoResult result;
  std::string cur;
  bool open = false;
  for (const auto& piece : subwords) {
    if (ends_with(piece, kJoiner)) {
      cur.append(piece, 0, piece.size() - kJoiner.size());
      open = true;
    } else {
      cur += piece;
      result.tokens.push_back(std::move(cur));
      cur.clear();
      open = false;
    }
  }
  if (open) {
    result.tokens.push_back(cur + std::string(kJoiner));
    result.dangling_joiner = true;
  }
  return result;
}

}  // namespace adaptmt::textpipe
