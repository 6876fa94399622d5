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

#include "adaptmt/simulator/simulation.hpp"

#include <chrono>
#include <cstdio>

#include "adaptmt/metrics/metrics.hpp"
#include "adaptmt/neuralmt/tensor.hpp"

namespace adaptmt::sim {
namespace {

std::string fixed(double v, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string optional_loss(const std::optional<double>& v) { return v ? fixed(*v, 6) : "-"; }

}  // namespace

SimulationRun run_simulation(adapt::AdaptiveSession& session, const Document& document, bool ol_enabled) {
  if (document.empty()) throw ValidationError("empty document");
  SimulationRun run;
  run.config = session.config();
  run.document = document;
  run.ol_enabled = ol_enabled;
  run.params_before = nmt::parameter_digest(session.model().params);

  const auto& tokenizer = session.pipeline().tokenizer();
  std::vector<textpipe::Tokens> hyps;
  std::vector<textpipe::Tokens> refs;
  double update_total = 0.0;
  std::size_t updates = 0;
  for (std::size_t i = 0; i < document.size(); ++i) {
    const Segment& seg = document[i];
    SegmentResult r;
    r.index = i;
    try {
      r.hypothesis = session.translate_segment(seg.source).text;
      hyps.push_back(tokenizer.tokenize(r.hypothesis));
      refs.push_back(tokenizer.tokenize(seg.reference));
      const auto t = metrics::ter(hyps.back(), refs.back());
      r.hter = t.score;
      r.edits = t.edits();
      r.reference_length = t.reference_length;
      if (ol_enabled) {
        adapt::TrainingPair pair{seg.source, seg.reference, "seg-" + std::to_string(i), now_utc()};
        const auto report = session.confirm_and_update(pair);
        r.pre_loss = report.pre_loss;
        r.post_loss = report.post_loss;
        r.update_seconds = report.elapsed_seconds;
        update_total += report.elapsed_seconds;
        ++updates;
      }
    } catch (const Error& e) {
      throw SegmentError(i, e.what());
    }
    run.results.push_back(std::move(r));
  }

  run.summary.hbleu = metrics::hbleu(hyps, refs);
  run.summary.hter = metrics::corpus_ter(hyps, refs).score;
  run.summary.mean_update_seconds = updates ? update_total / static_cast<double>(updates) : 0.0;
  run.params_after = nmt::parameter_digest(session.model().params);
  if (!ol_enabled && run.params_after != run.params_before) {
    throw Error("static simulation changed the model parameters");
  }
  return run;
}

ComparisonReport compare_runs(const SimulationRun& static_run, const SimulationRun& adaptive_run) {
  if (static_run.document != adaptive_run.document) throw ValidationError("runs cover different documents");
  if (static_run.params_before != adaptive_run.params_before) {
    throw ValidationError("runs start from different models");
  }
  ComparisonReport c;
  c.static_summary = static_run.summary;
  c.adaptive_summary = adaptive_run.summary;
  c.delta_hter_points = 100.0 * (static_run.summary.hter - adaptive_run.summary.hter);
  c.delta_hbleu_points = adaptive_run.summary.hbleu - static_run.summary.hbleu;
  c.mean_update_seconds = adaptive_run.summary.mean_update_seconds;
  for (std::size_t i = 0; i < static_run.results.size(); ++i) {
    c.segments.push_back(SegmentDelta{i, static_run.results[i].hter, adaptive_run.results[i].hter});
  }
  return c;
}

std::string format_summary(const SimulationSummary& s) {
  return "hBLEU=" + fixed(s.hbleu, 1) + " hTER=" + fixed(s.hter, 3) + " mean_update_s=" +
         fixed(s.mean_update_seconds, 3);
}

std::string format_run_report(const SimulationRun& run) {
  std::string out = "# index\thter\tpre_loss\tpost_loss\tupdate_s\thypothesis\treference\n";
  for (const auto& r : run.results) {
    out += std::to_string(r.index) + '\t' + fixed(r.hter, 3) + '\t' + optional_loss(r.pre_loss) + '\t' +
           optional_loss(r.post_loss) + '\t' + fixed(r.update_seconds, 4) + '\t' + r.hypothesis + '\t' +
           run.document[r.index].reference + '\n';
  }
  out += format_summary(run.summary) + '\n';
  return out;
}

std::string format_comparison(const ComparisonReport& report) {
  std::string out = "# index\tstatic_hter\tadaptive_hter\tdelta_hter_points\n";
  for (const auto& s : report.segments) {
    out += std::to_string(s.index) + '\t' + fixed(s.static_hter, 3) + '\t' + fixed(s.adaptive_hter, 3) + '\t' +
           fixed(100.0 * (s.static_hter - s.adaptive_hter), 1) + '\n';
  }
  out += "SUMMARY\t" + fixed(report.static_summary.hter, 3) + '\t' + fixed(report.adaptive_summary.hter, 3) + '\t' +
         fixed(report.delta_hter_points, 1) + "\tdelta_hbleu=" + fixed(report.delta_hbleu_points, 1) +
         "\tmean_update_s=" + fixed(report.mean_update_seconds, 3) + '\n';
  return out;
}

}  // namespace adaptmt::sim
