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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adaptmt::pelog {

enum class EventKind { kKeystroke, kMouse, kFocus, kConfirm };
// Logical edit operation of a keystroke event. A paste carries the whole
// pasted text in `key`.
enum class EditOp { kInsert, kDelete, kPaste };

std::string_view to_string(EventKind kind) noexcept;
std::string_view to_string(EditOp op) noexcept;

struct LogEvent {
  EventKind kind = EventKind::kKeystroke;
  std::int64_t t_ms = 0;  // UTC, milliseconds since the Unix epoch
  std::string segment_id;
  std::string key;     // keystroke: inserted, deleted or pasted text
  EditOp op = EditOp::kInsert;
  std::string action;  // mouse: click, scroll, select, ...

  friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

/// XML effort log:
///
///   <pelog version="1">
///     <segment id="s1">
///       <event seq="0" kind="focus" t="1700000000000"/>
///       <event seq="1" kind="keystroke" t="1700000000250" op="insert" key="a"/>
///     </segment>
///   </pelog>
///
/// Each segment appears once, in order of its first event. `seq` is the
/// event's position in the original stream, so interleaved streams read
/// back in their original order. Files without any `seq` are read in
/// document order.
///
/// Throws ValidationError when timestamps decrease within a segment (the
/// message names the segment) or a text field holds characters XML 1.0
/// cannot represent.
std::string write_log(std::span<const LogEvent> events);
void write_log_file(std::span<const LogEvent> events, const std::filesystem::path& path);

struct ParsedLog {
  std::vector<LogEvent> events;
  // Unknown elements and attributes, skipped.
  std::vector<std::string> warnings;
};

// Throws ParseError (with line number when the XML itself is malformed) or
// ValidationError("unsupported pelog version: N"). Nothing partial is
// returned on failure.
ParsedLog parse_log(std::string_view xml);
ParsedLog read_log_file(const std::filesystem::path& path);

struct SegmentText {
  std::string segment_id;
  std::string source;
  std::string final_target;
};

// One segment per line: segment_id TAB source TAB final_target.
std::vector<SegmentText> read_segments_file(const std::filesystem::path& path);
std::vector<SegmentText> parse_segments(std::string_view tsv);

struct SegmentEffort {
  std::string segment_id;
  std::size_t keystroke_count = 0;  // one per logical edit operation
  std::size_t mouse_count = 0;
  std::int64_t editing_ms = 0;      // last confirm - first focus
  bool timing_missing = false;      // no focus, no confirm, or confirm before focus
  std::size_t source_char_count = 0;
  std::size_t final_target_char_count = 0;

  double editing_seconds() const noexcept { return static_cast<double>(editing_ms) / 1000.0; }
};

struct EffortReport {
  std::vector<SegmentEffort> segments;
  SegmentEffort totals;  // segment_id "TOTAL"

  double mean_seconds_per_segment() const noexcept;
  double keystrokes_per_target_char() const noexcept;
};

// Segments are reported in the order given. Throws ValidationError naming
// the first event segment_id missing from `segments`.
EffortReport compute_effort(std::span<const LogEvent> events, std::span<const SegmentText> segments);

// Tab-separated table: header, one row per segment, a TOTAL row and a
// summary line.
std::string format_report(const EffortReport& report);

}  // namespace adaptmt::pelog
