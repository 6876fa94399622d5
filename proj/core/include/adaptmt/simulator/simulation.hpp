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
#include <optional>
#include <string>
#include <vector>

#include "adaptmt/adaptation/session.hpp"
#include "adaptmt/common/error.hpp"
#include "adaptmt/simulator/corpus.hpp"

namespace adaptmt::sim {

// An adaptation error raised while processing segment `index` (0-based).
class SegmentError : public Error {
 public:
  SegmentError(std::size_t index, const std::string& what)
      : Error("segment " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

struct SegmentResult {
  std::size_t index = 0;
  std::string hypothesis;  // produced before this segment's own update
  double hter = 0.0;
  std::size_t edits = 0;
  std::size_t reference_length = 0;
  std::optional<double> pre_loss;
  std::optional<double> post_loss;
  double update_seconds = 0.0;
};

struct SimulationSummary {
  double hbleu = 0.0;  // 0-100
  double hter = 0.0;   // fraction, corpus level
  double mean_update_seconds = 0.0;
};

struct SimulationRun {
  adapt::ModelConfig config;
  Document document;
  bool ol_enabled = false;
  std::vector<SegmentResult> results;
  SimulationSummary summary;
  std::uint64_t params_before = 0;  // parameter_digest of the model
  std::uint64_t params_after = 0;
};

/// Replays `document` through the session in order. Each segment is
/// translated first and scored against its reference. With `ol_enabled`
/// the reference is then confirmed as the post-edit.
///
/// Metrics run on tokens from the session's tokenizer. Throws SegmentError
/// when a segment fails, and Error if a run without OL changed the
/// parameters.
SimulationRun run_simulation(adapt::AdaptiveSession& session, const Document& document, bool ol_enabled);

struct SegmentDelta {
  std::size_t index = 0;
  double static_hter = 0.0;
  double adaptive_hter = 0.0;
};

struct ComparisonReport {
  double delta_hter_points = 0.0;   // 100 * (static - adaptive)
  double delta_hbleu_points = 0.0;  // adaptive - static
  double mean_update_seconds = 0.0;
  SimulationSummary static_summary;
  SimulationSummary adaptive_summary;
  std::vector<SegmentDelta> segments;
};

// Throws ValidationError when the runs cover different documents.
ComparisonReport compare_runs(const SimulationRun& static_run, const SimulationRun& adaptive_run);

// "hBLEU=<x.x> hTER=<x.xxx> mean_update_s=<x.xxx>"
std::string format_summary(const SimulationSummary& summary);

// '#' header line, one row per segment, then the summary line.
std::string format_run_report(const SimulationRun& run);

// '#' header line, one row per segment and one SUMMARY row.
std::string format_comparison(const ComparisonReport& report);

}  // namespace adaptmt::sim
