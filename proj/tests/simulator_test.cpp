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

#include <set>
#include <sstream>

#include "adaptmt/metrics/metrics.hpp"
#include "adaptmt/neuralmt/tensor.hpp"
#include "adaptmt/simulator/corpus.hpp"
#include "adaptmt/simulator/experiment.hpp"
#include "adaptmt/simulator/simulation.hpp"
#include "adaptmt/textpipe/tokenizer.hpp"
#include "support/sessions.hpp"
#include "support/toy_models.hpp"

namespace adaptmt::sim {
namespace {

using testing::copy_session;
using testing::TempDir;

std::set<std::string> token_set(const Document& doc, bool source) {
  std::set<std::string> out;
  for (const auto& s : doc) {
    for (auto& t : textpipe::tokenize(source ? s.source : s.reference)) out.insert(t);
  }
  return out;
}

Document copy_document(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Document doc;
  for (std::size_t i = 0; i < n; ++i) {
    doc.push_back(Segment{testing::words(testing::random_ids(rng, 20, 2, 5)),
                          testing::words(testing::random_ids(rng, 20, 2, 5))});
  }
  return doc;
}

std::size_t data_rows(const std::string& report) {
  std::istringstream in(report);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++n;
  }
  return n;
}

TEST(CorpusTest, SizesAndDeterminism) {
  CorpusOptions o;
  o.seed = 9;
  const auto a = generate_corpus(o);
  const auto b = generate_corpus(o);
  EXPECT_EQ(a.train.size(), 200u);
  EXPECT_EQ(a.dev.size(), 50u);
  EXPECT_EQ(a.test.size(), 100u);
  EXPECT_EQ(a.overrides.size(), 4u);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  o.seed = 10;
  EXPECT_NE(generate_corpus(o).train, a.train);
}

TEST(CorpusTest, TestDomainStaysInsideTrainingVocabulary) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    CorpusOptions o;
    o.seed = seed;
    const auto c = generate_corpus(o);
    const auto train_src = token_set(c.train, true);
    const auto train_tgt = token_set(c.train, false);
    for (const auto& t : token_set(c.test, true)) EXPECT_TRUE(train_src.count(t)) << t;
    for (const auto& t : token_set(c.test, false)) EXPECT_TRUE(train_tgt.count(t)) << t;
    for (const auto& ov : c.overrides) {
      EXPECT_NE(ov.general_target, ov.domain_target);
      EXPECT_TRUE(train_tgt.count(ov.domain_target));
    }
  }
}

TEST(CorpusTest, OverriddenNounsUseDomainTranslation) {
  CorpusOptions o;
  o.seed = 4;
  const auto c = generate_corpus(o);
  std::size_t hits = 0;
  for (const auto& seg : c.test) {
    const auto src = textpipe::tokenize(seg.source);
    const auto ref = textpipe::tokenize(seg.reference);
    for (const auto& ov : c.overrides) {
      const bool in_src = std::find(src.begin(), src.end(), ov.source) != src.end();
      if (!in_src) continue;
      ++hits;
      EXPECT_NE(std::find(ref.begin(), ref.end(), ov.domain_target), ref.end()) << seg.reference;
    }
  }
  EXPECT_GT(hits, 50u);
}

TEST(CorpusTest, BadOptionsRejected) {
  CorpusOptions o;
  o.overrides = 99;
  EXPECT_THROW(generate_corpus(o), ValidationError);
  o.overrides = 2;
  o.override_rate = 1.5;
  EXPECT_THROW(generate_corpus(o), ValidationError);
}

TEST(DocumentTest, RoundTripAndErrors) {
  const Document doc = {{"a b", "c"}, {"d", "e f"}};
  EXPECT_EQ(parse_document(format_document(doc)), doc);
  EXPECT_THROW(parse_document("no tab here\n"), ParseError);
  EXPECT_THROW(parse_document("a\tb\tc\n"), ParseError);
}

TEST(SimulationTest, StaticRunLeavesParametersAlone) {
  TempDir dir;
  auto session = copy_session(dir.path());
  const auto before = nmt::parameter_digest(session.model().params);
  const Document doc = copy_document(12, 1);
  const auto run = run_simulation(session, doc, false);
  EXPECT_EQ(run.results.size(), doc.size());
  EXPECT_EQ(run.params_before, before);
  EXPECT_EQ(run.params_after, before);
  EXPECT_EQ(session.updates_applied(), 0u);
  for (const auto& r : run.results) EXPECT_FALSE(r.pre_loss.has_value());
}

TEST(SimulationTest, SummaryMatchesIndependentScoring) {
  TempDir dir;
  auto session = copy_session(dir.path());
  const Document doc = copy_document(15, 2);
  const auto run = run_simulation(session, doc, true);
  std::vector<textpipe::Tokens> hyps, refs;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    hyps.push_back(textpipe::tokenize(run.results[i].hypothesis));
    refs.push_back(textpipe::tokenize(doc[i].reference));
  }
  EXPECT_DOUBLE_EQ(run.summary.hbleu, metrics::bleu(hyps, refs));
  EXPECT_DOUBLE_EQ(run.summary.hter, metrics::corpus_ter(hyps, refs).score);
  EXPECT_EQ(session.updates_applied(), doc.size());
  EXPECT_GT(run.summary.mean_update_seconds, 0.0);
}

TEST(SimulationTest, RepeatedPairConverges) {
  TempDir dir;
  auto session = copy_session(dir.path(), 0.1);
  const Document doc(30, Segment{"w5 w6 w7", "w9 w8"});
  const auto run = run_simulation(session, doc, true);
  double first = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < 10; ++i) first += run.results[i].hter;
  for (std::size_t i = 20; i < 30; ++i) last += run.results[i].hter;
  EXPECT_LT(last, first);
  EXPECT_EQ(run.results.back().hypothesis, "w9 w8");
}

TEST(SimulationProperty, HypothesisDependsOnlyOnEarlierSegments) {
  TempDir dir;
  const Document doc = copy_document(6, 3);
  auto full_session = copy_session(dir.path(), 0.1);
  const auto full = run_simulation(full_session, doc, true);
  for (std::size_t i = 1; i < doc.size(); ++i) {
    auto s = copy_session(dir.path(), 0.1);
    const Document prefix(doc.begin(), doc.begin() + static_cast<std::ptrdiff_t>(i));
    run_simulation(s, prefix, true);
    EXPECT_EQ(s.translate_segment(doc[i].source).text, full.results[i].hypothesis) << "segment " << i;
  }
}

TEST(SimulationProperty, Reproducible) {
  TempDir dir;
  const Document doc = copy_document(10, 4);
  auto a = copy_session(dir.path());
  auto b = copy_session(dir.path());
  const auto ra = run_simulation(a, doc, true);
  const auto rb = run_simulation(b, doc, true);
  ASSERT_EQ(ra.results.size(), rb.results.size());
  for (std::size_t i = 0; i < ra.results.size(); ++i) {
    EXPECT_EQ(ra.results[i].hypothesis, rb.results[i].hypothesis);
    EXPECT_EQ(ra.results[i].post_loss, rb.results[i].post_loss);
  }
  EXPECT_EQ(ra.params_after, rb.params_after);
}

TEST(SimulationTest, ErrorsCarrySegmentIndex) {
  TempDir dir;
  auto session = copy_session(dir.path());
  Document doc = copy_document(4, 5);
  doc[2].source = " ";
  try {
    run_simulation(session, doc, true);
    FAIL() << "expected an error";
  } catch (const SegmentError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  EXPECT_THROW(run_simulation(session, Document{}, false), ValidationError);
}

TEST(CompareTest, NullAdaptationHasNoDeltas) {
  TempDir dir;
  const Document doc = copy_document(10, 6);
  auto s1 = copy_session(dir.path(), 1e-300);
  auto s2 = copy_session(dir.path(), 1e-300);
  const auto st = run_simulation(s1, doc, false);
  const auto ad = run_simulation(s2, doc, true);
  const auto c = compare_runs(st, ad);
  EXPECT_NEAR(c.delta_hter_points, 0.0, 1e-12);
  EXPECT_NEAR(c.delta_hbleu_points, 0.0, 1e-12);
  EXPECT_EQ(data_rows(format_comparison(c)), doc.size() + 1);
}

TEST(CompareTest, RepetitiveDocumentFavoursAdaptation) {
  TempDir dir;
  // Four-token reference so that unsmoothed corpus BLEU is not zero on both sides.
  const Document doc(30, Segment{"w5 w6 w7 w4", "w9 w8 w11 w10"});
  auto s1 = copy_session(dir.path(), 0.1);
  auto s2 = copy_session(dir.path(), 0.1);
  const auto c = compare_runs(run_simulation(s1, doc, false), run_simulation(s2, doc, true));
  EXPECT_GT(c.delta_hter_points, 0.0);
  EXPECT_GT(c.delta_hbleu_points, 0.0);
}

TEST(CompareTest, DocumentMismatchRejected) {
  TempDir dir;
  auto s1 = copy_session(dir.path());
  auto s2 = copy_session(dir.path());
  const auto a = run_simulation(s1, copy_document(3, 7), false);
  const auto b = run_simulation(s2, copy_document(3, 8), false);
  EXPECT_THROW(compare_runs(a, b), ValidationError);
}

TEST(ReportTest, Formats) {
  SimulationSummary s{27.345, 0.41234, 0.0123};
  EXPECT_EQ(format_summary(s), "hBLEU=27.3 hTER=0.412 mean_update_s=0.012");
  TempDir dir;
  auto session = copy_session(dir.path());
  const auto run = run_simulation(session, copy_document(5, 9), true);
  const std::string report = format_run_report(run);
  EXPECT_EQ(data_rows(report), 6u);
  EXPECT_NE(report.find("\nhBLEU="), std::string::npos);
}

TEST(PretrainTest, RestartsPickLowestDevLoss) {
  CorpusOptions co;
  co.train_size = 20;
  co.dev_size = 10;
  co.test_size = 5;
  const auto corpus = generate_corpus(co);
  PretrainOptions po;
  po.embedding_dim = 8;
  po.hidden_dim = 8;
  po.epochs = 2;
  po.restarts = 1;
  std::vector<double> dev_losses;
  for (std::uint64_t seed : {5u, 6u}) {
    po.seed = seed;
    dev_losses.push_back(pretrain(corpus.train, corpus.dev, po).dev_loss);
  }
  po.seed = 5;
  po.restarts = 2;
  const auto best = pretrain(corpus.train, corpus.dev, po);
  EXPECT_DOUBLE_EQ(best.dev_loss, std::min(dev_losses[0], dev_losses[1]));
  EXPECT_EQ(best.init_seed, dev_losses[0] <= dev_losses[1] ? 5u : 6u);
}

TEST(PretrainTest, BpeOptionProducesSubwordModel) {
  CorpusOptions co;
  co.train_size = 20;
  co.dev_size = 0;
  co.test_size = 5;
  const auto corpus = generate_corpus(co);
  PretrainOptions po;
  po.embedding_dim = 8;
  po.hidden_dim = 8;
  po.epochs = 1;
  po.bpe_merges = 30;
  const auto sys = pretrain(corpus.train, corpus.dev, po);
  ASSERT_TRUE(sys.bpe.has_value());
  EXPECT_EQ(sys.bpe->num_merges(), 30u);
}

}  // namespace
}  // namespace adaptmt::sim
