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
#include <optional>

#include "adaptmt/common/error.hpp"
#include "adaptmt/metrics/metrics.hpp"

namespace adaptmt::metrics {
namespace {

struct Alignment {
  std::size_t cost = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::vector<bool> hyp_matched;
};

std::vector<std::size_t> distance_table(const Tokens& hyp, const Tokens& ref) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  return d;
}

// Traceback prefers matches, then substitutions, then deletions.
Alignment align(const Tokens& hyp, const Tokens& ref) {
  const std::size_t m = ref.size();
  const auto d = distance_table(hyp, ref);
  auto at = [&](std::size_t i, std::size_t j) { return d[i * (m + 1) + j]; };
  Alignment a;
  a.cost = at(hyp.size(), m);
  a.hyp_matched.assign(hyp.size(), false);
  std::size_t i = hyp.size();
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = hyp[i - 1] == ref[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (same) {
          a.hyp_matched[i - 1] = true;
        } else {
          ++a.substitutions;
        }
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++a.deletions;
      --i;
    } else {
      ++a.insertions;
      --j;
    }
  }
  return a;
}

bool occurs_in(const Tokens& ref, Tokens::const_iterator first, Tokens::const_iterator last) {
  return std::search(ref.begin(), ref.end(), first, last) != ref.end();
}

}  // namespace

std::size_t edit_distance(const Tokens& hypothesis, const Tokens& reference) {
  return distance_table(hypothesis, reference).back();
}

TerAlignment ter(const Tokens& hypothesis, const Tokens& reference, const TerOptions& options) {
  if (reference.empty()) throw ValidationError("empty reference");
  Tokens current = hypothesis;
  std::size_t shifts = 0;
  Alignment alignment = align(current, reference);

  while (alignment.cost > 0) {
    std::optional<Tokens> best;
    std::size_t best_cost = alignment.cost;
    const std::size_t n = current.size();
    const std::size_t max_block = std::min(options.max_block, n);
    for (std::size_t len = 1; len <= max_block; ++len) {
      for (std::size_t start = 0; start + len <= n; ++start) {
        const auto first = current.begin() + static_cast<std::ptrdiff_t>(start);
        const auto last = first + static_cast<std::ptrdiff_t>(len);
        const bool misaligned = std::any_of(alignment.hyp_matched.begin() + static_cast<std::ptrdiff_t>(start),
                                            alignment.hyp_matched.begin() + static_cast<std::ptrdiff_t>(start + len),
                                            [](bool matched) { return !matched; });
        if (!misaligned || !occurs_in(reference, first, last)) continue;
        Tokens rest;
        rest.reserve(n);
        rest.insert(rest.end(), current.begin(), first);
        rest.insert(rest.end(), last, current.end());
        for (std::size_t dest = 0; dest + len <= n; ++dest) {
          if (dest == start) continue;
          Tokens candidate;
          candidate.reserve(n);
          candidate.insert(candidate.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(dest));
          candidate.insert(candidate.end(), first, last);
          candidate.insert(candidate.end(), rest.begin() + static_cast<std::ptrdiff_t>(dest), rest.end());
          const std::size_t cost = edit_distance(candidate, reference) + 1;
          if (cost < best_cost) {
            best_cost = cost;
            best = std::move(candidate);
          }
        }
      }
    }
    if (!best) break;
    current = std::move(*best);
    ++shifts;
    alignment = align(current, reference);
  }

  TerAlignment out;
  out.insertions = alignment.insertions;
  out.deletions = alignment.deletions;
  out.substitutions = alignment.substitutions;
  out.shifts = shifts;
  out.reference_length = reference.size();
  out.score = static_cast<double>(out.edits()) / static_cast<double>(reference.size());
  return out;
}

TerAlignment corpus_ter(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
                        const TerOptions& options) {
  if (hypotheses.size() != references.size()) {
    throw ValidationError("ter: " + std::to_string(hypotheses.size()) + " hypotheses vs " +
                          std::to_string(references.size()) + " references");
  }
  if (references.empty()) throw ValidationError("ter: empty corpus");
  TerAlignment total;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const TerAlignment t = ter(hypotheses[i], references[i], options);
    total.insertions += t.insertions;
    total.deletions += t.deletions;
    total.substitutions += t.substitutions;
    total.shifts += t.shifts;
    total.reference_length += t.reference_length;
  }
  total.score = static_cast<double>(total.edits()) / static_cast<double>(total.reference_length);
  return total;
}

double hter(const Tokens& mt_output, const Tokens& post_edit) { return ter(mt_output, post_edit).score; }

}  // namespace adaptmt::metrics
