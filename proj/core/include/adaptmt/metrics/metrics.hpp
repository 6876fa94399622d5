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

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adaptmt/textpipe/tokenizer.hpp"

namespace adaptmt::metrics {

using textpipe::Tokens;

inline constexpr std::size_t kMaxBleuOrder = 4;

// n-gram counts of one token sequence for n = 1..4.
struct NGramProfile {
  std::array<std::map<std::vector<std::string>, std::size_t>, kMaxBleuOrder> counts;
  std::size_t length = 0;

  static NGramProfile of(const Tokens& tokens);
  // max(0, length - n + 1)
  std::size_t total(std::size_t order) const;
};

/// Corpus BLEU on a 0-100 scale: brevity penalty times the geometric mean
/// of clipped n-gram precisions, without smoothing.
///
/// Orders for which the whole hypothesis side has no n-grams (every
/// hypothesis shorter than n) are left out of the mean, so a corpus of short
/// segments scored against itself is still 100. Any included order with
/// zero matches gives 0.
///
/// Throws ValidationError on a count mismatch or an empty corpus.
double bleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references);

// Sentence-level diagnostic BLEU with add-one smoothing for orders >= 2.
double sentence_bleu_smoothed(const Tokens& hypothesis, const Tokens& reference);

struct TerOptions {
  std::size_t max_block = 10;
};

struct TerAlignment {
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t shifts = 0;
  std::size_t reference_length = 0;
  double score = 0.0;

  std::size_t edits() const noexcept { return insertions + deletions + substitutions + shifts; }
};

// Plain Levenshtein distance over tokens (unit costs, no shifts).
std::size_t edit_distance(const Tokens& hypothesis, const Tokens& reference);

/// Translation edit rate of `hypothesis` against `reference`.
///
/// Greedy block shifts: while some shift strictly lowers the total cost
/// (edit distance + 1 per shift), apply the one with the largest reduction.
/// A shifted block is at most `max_block` tokens, occurs verbatim in the
/// reference and contains at least one token not matched in the current
/// minimum-edit alignment. Ties go to the smallest block, then the leftmost
/// origin, then the leftmost destination. Insertions count reference tokens
/// missing from the hypothesis and deletions count surplus hypothesis tokens.
///
/// Throws ValidationError("empty reference") when `reference` is empty.
TerAlignment ter(const Tokens& hypothesis, const Tokens& reference, const TerOptions& options = {});

// Sums edits and reference lengths over segments; score = edits / length.
TerAlignment corpus_ter(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
                        const TerOptions& options = {});

// Human-targeted variants: the post-edit is the reference.
double hter(const Tokens& mt_output, const Tokens& post_edit);
double hbleu(std::span<const Tokens> mt_outputs, std::span<const Tokens> post_edits);

// "BLEU=<x.x> TER=<x.xxx> segs=<n>"
std::string format_eval_line(double bleu_score, double ter_score, std::size_t segments);

}  // namespace adaptmt::metrics
