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

#include "adaptmt/pelog/pelog.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "adaptmt/common/error.hpp"
#include "adaptmt/textpipe/utf8.hpp"

namespace adaptmt::pelog {
namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kVersion = "1";

void check_xml_text(std::string_view field, std::string_view text) {
  for (unsigned char c : text) {
    if (c < 0x20 && c != '\t' && c != '\n' && c != '\r') {
      throw ValidationError(std::string(field) + " contains a control character XML cannot carry");
    }
  }
}

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
}

void append_attr(std::string& out, std::string_view name, std::string_view value) {
  out += ' ';
  out += name;
  out += "=\"";
  append_escaped(out, value);
  out += '"';
}

std::optional<EventKind> kind_from(std::string_view s) {
  if (s == "keystroke") return EventKind::kKeystroke;
  if (s == "mouse") return EventKind::kMouse;
  if (s == "focus") return EventKind::kFocus;
  if (s == "confirm") return EventKind::kConfirm;
  return std::nullopt;
}

std::optional<EditOp> op_from(std::string_view s) {
  if (s == "insert") return EditOp::kInsert;
  if (s == "delete") return EditOp::kDelete;
  if (s == "paste") return EditOp::kPaste;
  return std::nullopt;
}

template <typename Int>
Int parse_int(std::string_view what, const std::string& s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad " + std::string(what) + ": '" + s + "'");
  return v;
}

void check_order(std::span<const LogEvent> events, bool parsing) {
  std::map<std::string_view, std::int64_t> last;
  for (const auto& e : events) {
    auto [it, inserted] = last.emplace(e.segment_id, e.t_ms);
    if (!inserted) {
      if (e.t_ms < it->second) {
        const std::string msg = "timestamps out of order in segment '" + e.segment_id + "'";
        if (parsing) throw ParseError(msg);
        throw ValidationError(msg);
      }
      it->second = e.t_ms;
    }
  }
}

struct SeqEvent {
  std::optional<std::size_t> seq;
  LogEvent event;
};

LogEvent read_event(const pt::ptree& node, const std::string& segment_id, std::optional<std::size_t>& seq,
                    std::vector<std::string>& warnings) {
  LogEvent e;
  e.segment_id = segment_id;
  std::optional<std::string> kind;
  std::optional<std::string> t;
  std::optional<std::string> op;
  for (const auto& [name, child] : node) {
    if (name != "<xmlattr>") {
      if (name != "<xmlcomment>") warnings.push_back("ignored element <" + name + "> inside <event>");
      continue;
    }
    for (const auto& [attr, value] : child) {
      const std::string& v = value.data();
      if (attr == "kind") {
        kind = v;
      } else if (attr == "t") {
        t = v;
      } else if (attr == "seq") {
        seq = parse_int<std::size_t>("seq", v);
      } else if (attr == "key") {
        e.key = v;
      } else if (attr == "op") {
        op = v;
      } else if (attr == "action") {
        e.action = v;
      } else {
        warnings.push_back("ignored attribute '" + attr + "' on <event>");
      }
    }
  }
  if (!kind) throw ParseError("event without kind in segment '" + segment_id + "'");
  if (!t) throw ParseError("event without t in segment '" + segment_id + "'");
  const auto k = kind_from(*kind);
  if (!k) throw ParseError("unknown event kind '" + *kind + "'");
  e.kind = *k;
  e.t_ms = parse_int<std::int64_t>("t", *t);
  if (op) {
    const auto o = op_from(*op);
    if (!o) throw ParseError("unknown edit op '" + *op + "'");
    e.op = *o;
  }
  return e;
}

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::kKeystroke: return "keystroke";
    case EventKind::kMouse: return "mouse";
    case EventKind::kFocus: return "focus";
    case EventKind::kConfirm: return "confirm";
  }
  return "?";
}

std::string_view to_string(EditOp op) noexcept {
  switch (op) {
    case EditOp::kInsert: return "insert";
    case EditOp::kDelete: return "delete";
    case EditOp::kPaste: return "paste";
  }
  return "?";
}

std::string write_log(std::span<const LogEvent> events) {
  check_order(events, false);
  if (events.empty()) return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pelog version=\"1\"/>\n";

  std::vector<std::string_view> order;
  std::map<std::string_view, std::vector<std::size_t>> by_segment;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    check_xml_text("segment_id", e.segment_id);
    check_xml_text("key", e.key);
    check_xml_text("action", e.action);
    auto [it, inserted] = by_segment.try_emplace(e.segment_id);
    if (inserted) order.push_back(e.segment_id);
    it->second.push_back(i);
  }

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pelog version=\"1\">\n";
  for (std::string_view seg : order) {
    out += "  <segment";
    append_attr(out, "id", seg);
    out += ">\n";
    for (std::size_t i : by_segment[seg]) {
      const auto& e = events[i];
      out += "    <event";
      append_attr(out, "seq", std::to_string(i));
      append_attr(out, "kind", to_string(e.kind));
      append_attr(out, "t", std::to_string(e.t_ms));
      if (e.kind == EventKind::kKeystroke || e.op != EditOp::kInsert) append_attr(out, "op", to_string(e.op));
      if (!e.key.empty()) append_attr(out, "key", e.key);
      if (!e.action.empty()) append_attr(out, "action", e.action);
      out += "/>\n";
    }
    out += "  </segment>\n";
  }
  out += "</pelog>\n";
  return out;
}

void write_log_file(std::span<const LogEvent> events, const std::filesystem::path& path) {
  const std::string xml = write_log(events);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << xml;
}

ParsedLog parse_log(std::string_view xml) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed pelog XML: " + e.message(), e.line());
  }

  ParsedLog out;
  const pt::ptree* root = nullptr;
  for (const auto& [name, child] : tree) {
    if (name == "pelog") {
      root = &child;
    } else if (name != "<xmlcomment>") {
      throw ParseError("expected <pelog> root element, found <" + name + ">");
    }
  }
  if (!root) throw ParseError("missing <pelog> root element");

  std::optional<std::string> version;
  std::vector<SeqEvent> collected;
  for (const auto& [name, child] : *root) {
    if (name == "<xmlattr>") {
      for (const auto& [attr, value] : child) {
        if (attr == "version") {
          version = value.data();
        } else {
          out.warnings.push_back("ignored attribute '" + attr + "' on <pelog>");
        }
      }
    } else if (name == "segment") {
      const auto id = child.get_optional<std::string>("<xmlattr>.id");
      if (!id) throw ParseError("<segment> without id");
      for (const auto& [ename, enode] : child) {
        if (ename == "event") {
          SeqEvent se;
          se.event = read_event(enode, *id, se.seq, out.warnings);
          collected.push_back(std::move(se));
        } else if (ename == "<xmlattr>") {
          for (const auto& [attr, value] : enode) {
            if (attr != "id") out.warnings.push_back("ignored attribute '" + attr + "' on <segment>");
          }
        } else if (ename != "<xmlcomment>") {
          out.warnings.push_back("ignored element <" + ename + "> inside <segment>");
        }
      }
    } else if (name != "<xmlcomment>") {
      out.warnings.push_back("ignored element <" + name + ">");
    }
  }
  if (!version) throw ParseError("<pelog> without version");
  if (*version != kVersion) throw ValidationError("unsupported pelog version: " + *version);

  const auto with_seq = std::count_if(collected.begin(), collected.end(), [](const SeqEvent& e) { return e.seq; });
  if (with_seq != 0 && static_cast<std::size_t>(with_seq) != collected.size()) {
    throw ParseError("seq must be given on every event or on none");
  }
  if (with_seq != 0) {
    std::stable_sort(collected.begin(), collected.end(),
                     [](const SeqEvent& a, const SeqEvent& b) { return *a.seq < *b.seq; });
    for (std::size_t i = 1; i < collected.size(); ++i) {
      if (*collected[i].seq == *collected[i - 1].seq) {
        throw ParseError("duplicate seq " + std::to_string(*collected[i].seq));
      }
    }
  }
  out.events.reserve(collected.size());
  for (auto& se : collected) out.events.push_back(std::move(se.event));
  check_order(out.events, true);
  return out;
}

ParsedLog read_log_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_log(buf.str());
}

std::vector<SegmentText> parse_segments(std::string_view tsv) {
  std::vector<SegmentText> out;
  std::set<std::string> seen;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto a = line.find('\t');
    const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos || line.find('\t', b + 1) != std::string::npos) {
      throw ParseError("expected segment_id<TAB>source<TAB>final_target", line_no);
    }
    SegmentText s{line.substr(0, a), line.substr(a + 1, b - a - 1), line.substr(b + 1)};
    if (s.segment_id.empty()) throw ParseError("empty segment_id", line_no);
    if (!seen.insert(s.segment_id).second) throw ParseError("duplicate segment_id '" + s.segment_id + "'", line_no);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SegmentText> read_segments_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_segments(buf.str());
}

EffortReport compute_effort(std::span<const LogEvent> events, std::span<const SegmentText> segments) {
  std::map<std::string_view, std::size_t> index;
  EffortReport report;
  report.segments.reserve(segments.size());
  for (const auto& s : segments) {
    index.emplace(s.segment_id, report.segments.size());
    SegmentEffort e;
    e.segment_id = s.segment_id;
    e.source_char_count = textpipe::utf8_length(s.source);
    e.final_target_char_count = textpipe::utf8_length(s.final_target);
    report.segments.push_back(std::move(e));
  }

  std::vector<std::optional<std::int64_t>> first_focus(segments.size());
  std::vector<std::optional<std::int64_t>> last_confirm(segments.size());
  for (const auto& ev : events) {
    auto it = index.find(ev.segment_id);
    if (it == index.end()) throw ValidationError("event for unknown segment '" + ev.segment_id + "'");
    const std::size_t i = it->second;
    switch (ev.kind) {
      case EventKind::kKeystroke: ++report.segments[i].keystroke_count; break;
      case EventKind::kMouse: ++report.segments[i].mouse_count; break;
      case EventKind::kFocus:
        if (!first_focus[i] || ev.t_ms < *first_focus[i]) first_focus[i] = ev.t_ms;
        break;
      case EventKind::kConfirm:
        if (!last_confirm[i] || ev.t_ms > *last_confirm[i]) last_confirm[i] = ev.t_ms;
        break;
    }
  }

  SegmentEffort& totals = report.totals;
  totals.segment_id = "TOTAL";
  for (std::size_t i = 0; i < report.segments.size(); ++i) {
    SegmentEffort& s = report.segments[i];
    if (first_focus[i] && last_confirm[i] && *last_confirm[i] >= *first_focus[i]) {
      s.editing_ms = *last_confirm[i] - *first_focus[i];
    } else {
      s.timing_missing = true;
    }
    totals.keystroke_count += s.keystroke_count;
    totals.mouse_count += s.mouse_count;
    totals.editing_ms += s.editing_ms;
    totals.source_char_count += s.source_char_count;
    totals.final_target_char_count += s.final_target_char_count;
    totals.timing_missing = totals.timing_missing || s.timing_missing;
  }
  return report;
}

double EffortReport::mean_seconds_per_segment() const noexcept {
  return segments.empty() ? 0.0 : totals.editing_seconds() / static_cast<double>(segments.size());
}

double EffortReport::keystrokes_per_target_char() const noexcept {
  return totals.final_target_char_count == 0
             ? 0.0
             : static_cast<double>(totals.keystroke_count) / static_cast<double>(totals.final_target_char_count);
}

std::string format_report(const EffortReport& report) {
  std::string out = "segment_id\tkeystrokes\tmouse\tediting_s\tsource_chars\ttarget_chars\ttiming\n";
  auto row = [&out](const SegmentEffort& s) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", s.editing_seconds());
    out += s.segment_id + '\t' + std::to_string(s.keystroke_count) + '\t' + std::to_string(s.mouse_count) + '\t' +
           secs + '\t' + std::to_string(s.source_char_count) + '\t' + std::to_string(s.final_target_char_count) +
           '\t' + (s.timing_missing ? "missing" : "ok") + '\n';
  };
  for (const auto& s : report.segments) row(s);
  row(report.totals);
  char summary[128];
  std::snprintf(summary, sizeof summary, "mean_s_per_segment=%.3f keystrokes_per_char=%.3f\n",
                report.mean_seconds_per_segment(), report.keystrokes_per_target_char());
  out += summary;
  return out;
}

}  // namespace adaptmt::pelog
