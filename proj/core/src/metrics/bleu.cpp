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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "adaptmt/common/error.hpp"
#include "adaptmt/metrics/metrics.hpp"

namespace adaptmt::metrics {
namespace {

struct OrderStats {
  std::array<std::size_t, kMaxBleuOrder> matches{};
  std::array<std::size_t, kMaxBleuOrder> totals{};
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;
};

void add_segment(OrderStats& stats, const Tokens& hyp, const Tokens& ref) {
  const NGramProfile h = NGramProfile::of(hyp);
  const NGramProfile r = NGramProfile::of(ref);
  for (std::size_t n = 0; n < kMaxBleuOrder; ++n) {
    for (const auto& [gram, count] : h.counts[n]) {
      auto it = r.counts[n].find(gram);
      if (it != r.counts[n].end()) stats.matches[n] += std::min(count, it->second);
    }
    stats.totals[n] += h.total(n + 1);
  }
  stats.hyp_length += hyp.size();
  stats.ref_length += ref.size();
}

double brevity_penalty(std::size_t hyp_length, std::size_t ref_length) {
  if (hyp_length == 0) return 0.0;
  if (hyp_length >= ref_length) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_length) / static_cast<double>(hyp_length));
}

}  // namespace

NGramProfile NGramProfile::of(const Tokens& tokens) {
  NGramProfile p;
  p.length = tokens.size();
  for (std::size_t n = 1; n <= kMaxBleuOrder; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      ++p.counts[n - 1][std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                                  tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
  }
  return p;
}

std::size_t NGramProfile::total(std::size_t order) const {
  return length >= order ? length - order + 1 : 0;
}

double bleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references) {
  if (hypotheses.size() != references.size()) {
    throw ValidationError("bleu: " + std::to_string(hypotheses.size()) + " hypotheses vs " +
                          std::to_string(references.size()) + " references");
  }
  if (references.empty()) throw ValidationError("bleu: empty corpus");
  OrderStats stats;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) add_segment(stats, hypotheses[i], references[i]);

  double log_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 0; n < kMaxBleuOrder; ++n) {
    if (stats.totals[n] == 0) break;
    if (stats.matches[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(stats.matches[n]) / static_cast<double>(stats.totals[n]));
    ++orders;
  }
  if (orders == 0) return 0.0;
  return 100.0 * brevity_penalty(stats.hyp_length, stats.ref_length) *
         std::exp(log_sum / static_cast<double>(orders));
}

double sentence_bleu_smoothed(const Tokens& hypothesis, const Tokens& reference) {
  OrderStats stats;
  add_segment(stats, hypothesis, reference);
  if (stats.matches[0] == 0) return 0.0;
  double log_sum = std::log(static_cast<double>(stats.matches[0]) / static_cast<double>(stats.totals[0]));
  for (std::size_t n = 1; n < kMaxBleuOrder; ++n) {
    log_sum += std::log((static_cast<double>(stats.matches[n]) + 1.0) / (static_cast<double>(stats.totals[n]) + 1.0));
  }
  return 100.0 * brevity_penalty(stats.hyp_length, stats.ref_length) *
         std::exp(log_sum / static_cast<double>(kMaxBleuOrder));
}

double hbleu(std::span<const Tokens> mt_outputs, std::span<const Tokens> post_edits) {
  return bleu(mt_outputs, post_edits);
}

std::string format_eval_line(double bleu_score, double ter_score, std::size_t segments) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "BLEU=%.1f TER=%.3f segs=%zu", bleu_score, ter_score, segments);
  return buf;
}

}  // namespace adaptmt::metrics
