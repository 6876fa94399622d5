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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "adaptmt/common/error.hpp"
#include "adaptmt/metrics/metrics.hpp"
#include "support/oracles.hpp"

namespace adaptmt::metrics {
namespace {

using testing::all_sequences;
using testing::exact_ter_edits;

// Exact minimum of (shifts + edit distance) over arbitrary block moves of any
// length and distance. Shifts permute the hypothesis, so the reachable set is
// bounded by the number of distinct orderings.
Tokens random_tokens(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len, int alphabet) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  Tokens t(len(rng));
  for (auto& tok : t) tok = "t" + std::to_string(sym(rng));
  return t;
}

TEST(BleuTest, IdenticalCorpusScoresHundred) {
  std::vector<Tokens> c{{"the", "cat", "sat", "on", "the", "mat"}, {"a", "b"}};
  EXPECT_DOUBLE_EQ(bleu(c, c), 100.0);
}

TEST(BleuTest, ShortSegmentsAgainstThemselvesScoreHundred) {
  std::vector<Tokens> c{{"hi"}, {"ok", "go"}};
  EXPECT_DOUBLE_EQ(bleu(c, c), 100.0);
}

TEST(BleuTest, EmptyHypothesisScoresZero) {
  std::vector<Tokens> hyp{{}};
  std::vector<Tokens> ref{{"a", "b"}};
  EXPECT_DOUBLE_EQ(bleu(hyp, ref), 0.0);
}

TEST(BleuTest, RepeatedTokenClipping) {
  std::vector<Tokens> hyp{{"the", "the", "the", "the"}};
  std::vector<Tokens> ref{{"the", "cat"}};
  const auto h = NGramProfile::of(hyp[0]);
  const auto r = NGramProfile::of(ref[0]);
  // clipped unigram matches: min(4, 1) = 1 of 4
  EXPECT_EQ(std::min(h.counts[0].at({"the"}), r.counts[0].at({"the"})), 1u);
  EXPECT_EQ(h.total(1), 4u);
  EXPECT_EQ(r.counts[1].count({"the", "the"}), 0u);
  EXPECT_DOUBLE_EQ(bleu(hyp, ref), 0.0);
}

TEST(BleuTest, HandComputedPartialMatch) {
  // hyp: a b c d e ; ref: a b c d f
  // p1 = 4/5, p2 = 3/4, p3 = 2/3, p4 = 1/2, BP = 1
  std::vector<Tokens> hyp{{"a", "b", "c", "d", "e"}};
  std::vector<Tokens> ref{{"a", "b", "c", "d", "f"}};
  const double expected = 100.0 * std::pow(0.8 * 0.75 * (2.0 / 3.0) * 0.5, 0.25);
  EXPECT_NEAR(bleu(hyp, ref), expected, 1e-12);
}

TEST(BleuTest, HandComputedBrevityPenalty) {
  // hyp is a 4-token prefix of a 6-token reference: all precisions 1
  std::vector<Tokens> hyp{{"a", "b", "c", "d"}};
  std::vector<Tokens> ref{{"a", "b", "c", "d", "e", "f"}};
  EXPECT_NEAR(bleu(hyp, ref), 100.0 * std::exp(1.0 - 6.0 / 4.0), 1e-12);
}

TEST(BleuTest, CountMismatchAndEmptyCorpusRejected) {
  std::vector<Tokens> one{{"a"}};
  std::vector<Tokens> two{{"a"}, {"b"}};
  std::vector<Tokens> none;
  EXPECT_THROW(bleu(one, two), ValidationError);
  EXPECT_THROW(bleu(none, none), ValidationError);
}

TEST(BleuTest, SmoothedSentenceBleuIsPositiveWithoutHigherOrderMatches) {
  Tokens hyp{"a", "x", "b", "y"};
  Tokens ref{"a", "z", "b", "w"};
  EXPECT_DOUBLE_EQ(bleu(std::vector<Tokens>{hyp}, std::vector<Tokens>{ref}), 0.0);
  // p1 = 2/4, p2 = 1/4, p3 = 1/3, p4 = 1/2
  const double expected = 100.0 * std::pow(0.5 * 0.25 * (1.0 / 3.0) * 0.5, 0.25);
  EXPECT_NEAR(sentence_bleu_smoothed(hyp, ref), expected, 1e-12);
}

TEST(BleuProperty, BoundsAndIdentity) {
  std::mt19937_64 rng(11);
  for (int c = 0; c < 300; ++c) {
    std::vector<Tokens> hyp, ref;
    const int segs = 1 + static_cast<int>(rng() % 4);
    for (int s = 0; s < segs; ++s) {
      hyp.push_back(random_tokens(rng, 0, 8, 5));
      ref.push_back(random_tokens(rng, 1, 8, 5));
    }
    const double b = bleu(hyp, ref);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 100.0);
    EXPECT_DOUBLE_EQ(bleu(ref, ref), 100.0);
  }
}

TEST(BleuProperty, AppendingNonReferenceTokenNeverIncreasesBleuWithoutBrevityPenalty) {
  std::mt19937_64 rng(12);
  int checked = 0;
  for (int c = 0; c < 500; ++c) {
    std::vector<Tokens> hyp, ref;
    std::size_t hyp_len = 0;
    std::size_t ref_len = 0;
    for (int s = 0; s < 3; ++s) {
      hyp.push_back(random_tokens(rng, 1, 9, 4));
      ref.push_back(random_tokens(rng, 1, 6, 4));
      hyp_len += hyp.back().size();
      ref_len += ref.back().size();
    }
    if (hyp_len < ref_len) continue;
    ++checked;
    auto longer = hyp;
    for (auto& h : longer) h.push_back("zz");
    EXPECT_LE(bleu(longer, ref), bleu(hyp, ref));
  }
  EXPECT_GT(checked, 100);
}

TEST(BleuProperty, AppendingTokenToShortHypothesisCanRaiseBleu) {
  // With a brevity penalty in force the longer output is penalised less,
  // which can outweigh the lost precision.
  std::vector<Tokens> hyp{{"a", "b", "c", "d", "e"}};
  std::vector<Tokens> ref{{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"}};
  std::vector<Tokens> longer{{"a", "b", "c", "d", "e", "zz"}};
  EXPECT_GT(bleu(longer, ref), bleu(hyp, ref));
}

TEST(TerTest, IdenticalIsZero) {
  const auto t = ter({"a", "b", "c"}, {"a", "b", "c"});
  EXPECT_EQ(t.edits(), 0u);
  EXPECT_DOUBLE_EQ(t.score, 0.0);
}

TEST(TerTest, SwapIsOneShift) {
  const auto t = ter({"b", "a"}, {"a", "b"});
  EXPECT_EQ(t.shifts, 1u);
  EXPECT_EQ(t.insertions + t.deletions + t.substitutions, 0u);
  EXPECT_DOUBLE_EQ(t.score, 0.5);
}

TEST(TerTest, MissingTokenIsOneInsertion) {
  const auto t = ter({"a"}, {"a", "b"});
  EXPECT_EQ(t.insertions, 1u);
  EXPECT_EQ(t.deletions, 0u);
  EXPECT_EQ(t.shifts, 0u);
  EXPECT_DOUBLE_EQ(t.score, 0.5);
}

TEST(TerTest, SurplusTokenIsOneDeletion) {
  const auto t = ter({"a", "x", "b"}, {"a", "b"});
  EXPECT_EQ(t.deletions, 1u);
  EXPECT_DOUBLE_EQ(t.score, 0.5);
}

TEST(TerTest, RewrittenSegmentIsAllSubstitutions) {
  const auto t = ter({"x", "y", "z"}, {"a", "b", "c"});
  EXPECT_EQ(t.substitutions, 3u);
  EXPECT_EQ(t.shifts, 0u);
  EXPECT_DOUBLE_EQ(t.score, 1.0);
  EXPECT_DOUBLE_EQ(hter({"x", "y", "z"}, {"a", "b", "c"}), 1.0);
}

TEST(TerTest, BlockShiftCountsOnce) {
  // moving "d e f" to the front costs one shift instead of six edits
  const auto t = ter({"a", "b", "c", "d", "e", "f"}, {"d", "e", "f", "a", "b", "c"});
  EXPECT_EQ(t.shifts, 1u);
  EXPECT_EQ(t.edits(), 1u);
}

TEST(TerTest, BlockLongerThanLimitIsNotShifted) {
  Tokens left, right;
  for (int i = 0; i < 11; ++i) left.push_back("l" + std::to_string(i));
  for (int i = 0; i < 11; ++i) right.push_back("r" + std::to_string(i));
  Tokens hyp = left;
  hyp.insert(hyp.end(), right.begin(), right.end());
  Tokens ref = right;
  ref.insert(ref.end(), left.begin(), left.end());
  const auto limited = ter(hyp, ref, TerOptions{.max_block = 10});
  const auto unlimited = ter(hyp, ref, TerOptions{.max_block = 11});
  EXPECT_EQ(unlimited.edits(), 1u);
  EXPECT_GT(limited.edits(), 1u);
}

TEST(TerTest, EmptyReferenceRejected) { EXPECT_THROW(ter({"a"}, {}), ValidationError); }

TEST(TerTest, EmptyHypothesisIsAllInsertions) {
  const auto t = ter({}, {"a", "b"});
  EXPECT_EQ(t.insertions, 2u);
  EXPECT_DOUBLE_EQ(t.score, 1.0);
}

TEST(TerTest, CorpusTerPoolsEdits) {
  std::vector<Tokens> hyp{{"a"}, {"x", "y"}};
  std::vector<Tokens> ref{{"a", "b"}, {"x", "y"}};
  const auto t = corpus_ter(hyp, ref);
  EXPECT_EQ(t.edits(), 1u);
  EXPECT_EQ(t.reference_length, 4u);
  EXPECT_DOUBLE_EQ(t.score, 0.25);
}

TEST(TerProperty, NeverAboveEditDistanceBound) {
  std::mt19937_64 rng(21);
  for (int c = 0; c < 400; ++c) {
    const Tokens h = random_tokens(rng, 0, 12, 4);
    const Tokens r = random_tokens(rng, 1, 12, 4);
    const auto t = ter(h, r);
    EXPECT_LE(t.score, static_cast<double>(edit_distance(h, r)) / static_cast<double>(r.size()) + 1e-15);
    EXPECT_DOUBLE_EQ(t.score, static_cast<double>(t.edits()) / static_cast<double>(r.size()));
  }
}

TEST(TerProperty, GreedyMatchesBruteForceOnSmallInputs) {
  const auto seqs = all_sequences(4, {"a", "b", "c"});
  std::size_t total = 0;
  std::size_t equal = 0;
  for (const auto& h : seqs) {
    for (const auto& r : seqs) {
      if (r.empty()) continue;
      const std::size_t exact = exact_ter_edits(h, r);
      const std::size_t greedy = ter(h, r).edits();
      ASSERT_GE(greedy, exact);
      ++total;
      if (greedy == exact) ++equal;
    }
  }
  EXPECT_GE(static_cast<double>(equal) / static_cast<double>(total), 0.90);
}

TEST(EvalLineTest, Format) {
  EXPECT_EQ(format_eval_line(27.345, 0.51234, 12), "BLEU=27.3 TER=0.512 segs=12");
}

}  // namespace
}  // namespace adaptmt::metrics
