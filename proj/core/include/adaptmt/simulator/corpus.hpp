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
#include <string>
#include <string_view>
#include <vector>

namespace adaptmt::sim {

struct Segment {
  std::string source;
  std::string reference;

  friend bool operator==(const Segment&, const Segment&) = default;
};

using Document = std::vector<Segment>;

// One segment per line: source TAB reference. Blank lines are skipped.
Document parse_document(std::string_view tsv);
Document read_document(const std::filesystem::path& path);
std::string format_document(const Document& doc);
void write_document(const Document& doc, const std::filesystem::path& path);

struct TermOverride {
  std::string source;          // source noun
  std::string general_target;  // its translation in the training domain
  std::string domain_target;   // its translation in the test domain
};

struct CorpusOptions {
  std::uint64_t seed = 1;
  std::size_t train_size = 200;
  std::size_t test_size = 100;
  std::size_t dev_size = 50;  // held-out training-domain pairs
  std::size_t overrides = 4;
  // Chance that a noun slot of a test sentence takes an overridden noun.
  double override_rate = 0.6;
};

/// Templated sentence pairs over a small English-to-Spanish style lexicon.
/// Targets translate word by word and put adjectives after their noun.
///
/// The test domain translates the overridden nouns differently. Every
/// domain target is the general translation of another training noun, so it
/// is already in the training vocabulary.
struct SyntheticCorpus {
  Document train;
  Document dev;
  Document test;
  std::vector<TermOverride> overrides;
};

SyntheticCorpus generate_corpus(const CorpusOptions& options);

}  // namespace adaptmt::sim
