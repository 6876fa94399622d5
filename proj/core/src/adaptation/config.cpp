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

#include "adaptmt/adaptation/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "adaptmt/common/error.hpp"
#include "adaptmt/textpipe/tokenizer.hpp"

namespace adaptmt::adapt {
namespace fs = std::filesystem;
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

std::size_t parse_count(const std::string& key, const Entry& e) {
  std::size_t v = 0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(key + ": expected a non-negative integer", e.line);
  return v;
}

double parse_real(const std::string& key, const Entry& e) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (e.value.empty() || end != e.value.c_str() + e.value.size() || errno == ERANGE) {
    throw ParseError(key + ": expected a number", e.line);
  }
  return v;
}

fs::path resolve(const std::string& value, const fs::path& base_dir) {
  if (value.empty()) return {};
  fs::path p(value);
  if (p.is_relative()) p = base_dir / p;
  return fs::absolute(p).lexically_normal();
}

std::string format_real(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

bool is_valid_project_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > 64 || id.front() == '.') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

void ModelConfig::validate() const {
  if (!is_valid_project_id(project_id)) throw ValidationError("invalid project_id: '" + project_id + "'");
  if (src_lang.empty()) throw ValidationError("src_lang must not be empty");
  if (tgt_lang.empty()) throw ValidationError("tgt_lang must not be empty");
  textpipe::Tokenizer::from_name(tokenizer);
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
  if (ol_iterations < 1) throw ValidationError("ol_iterations must be at least 1");
  if (checkpoint_path.empty()) throw ValidationError("checkpoint_path must not be empty");
  decode_options().validate();
}

nmt::DecodeOptions ModelConfig::decode_options() const {
  return nmt::DecodeOptions{.beam_size = beam_size, .max_length = max_length, .length_penalty = length_penalty};
}

std::string ModelConfig::serialize() const {
  std::ostringstream out;
  out << "version: " << kConfigVersion << '\n';
  out << "project_id: " << project_id << '\n';
  out << "src_lang: " << src_lang << '\n';
  out << "tgt_lang: " << tgt_lang << '\n';
  out << "tokenizer: " << tokenizer << '\n';
  out << "bpe_model_path: " << bpe_model_path.string() << '\n';
  out << "learning_rate: " << format_real(learning_rate) << '\n';
  out << "ol_iterations: " << ol_iterations << '\n';
  out << "beam_size: " << beam_size << '\n';
  out << "max_length: " << max_length << '\n';
  out << "length_penalty: " << format_real(length_penalty) << '\n';
  out << "checkpoint_path: " << checkpoint_path.string() << '\n';
  out << "checkpoint_every: " << checkpoint_every << '\n';
  return out.str();
}

ModelConfig ModelConfig::parse(std::string_view text, const fs::path& base_dir) {
  static const std::set<std::string> kKnown = {
      "version",   "project_id",    "src_lang",   "tgt_lang",       "tokenizer",       "bpe_model_path",
      "learning_rate", "ol_iterations", "beam_size", "max_length", "length_penalty", "checkpoint_path",
      "checkpoint_every"};

  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_no);
    const std::string key(trim(line.substr(0, colon)));
    const std::string value(trim(line.substr(colon + 1)));
    if (!kKnown.count(key)) throw ParseError("unknown config key: " + key, line_no);
    if (!entries.emplace(key, Entry{value, line_no}).second) throw ParseError("duplicate config key: " + key, line_no);
  }

  auto required = [&](const std::string& key) -> const Entry& {
    auto it = entries.find(key);
    if (it == entries.end()) throw ValidationError("missing required key: " + key);
    return it->second;
  };
  auto optional = [&](const std::string& key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  const Entry& version = required("version");
  if (version.value != std::to_string(kConfigVersion)) {
    throw ParseError("unsupported config version: " + version.value, version.line);
  }

  const fs::path base = base_dir.empty() ? fs::current_path() : base_dir;
  ModelConfig c;
  c.project_id = required("project_id").value;
  c.src_lang = required("src_lang").value;
  c.tgt_lang = required("tgt_lang").value;
  c.checkpoint_path = resolve(required("checkpoint_path").value, base);
  if (auto* e = optional("tokenizer")) c.tokenizer = e->value;
  if (auto* e = optional("bpe_model_path")) c.bpe_model_path = resolve(e->value, base);
  if (auto* e = optional("learning_rate")) c.learning_rate = parse_real("learning_rate", *e);
  if (auto* e = optional("ol_iterations")) c.ol_iterations = parse_count("ol_iterations", *e);
  if (auto* e = optional("beam_size")) c.beam_size = parse_count("beam_size", *e);
  if (auto* e = optional("max_length")) c.max_length = parse_count("max_length", *e);
  if (auto* e = optional("length_penalty")) c.length_penalty = parse_real("length_penalty", *e);
  if (auto* e = optional("checkpoint_every")) c.checkpoint_every = parse_count("checkpoint_every", *e);
  c.validate();
  return c;
}

ModelConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ModelConfig::parse(buf.str(), fs::absolute(path).parent_path());
}

void save_config(const ModelConfig& config, const fs::path& path) {
  config.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write config: " + path.string());
  out << config.serialize();
}

}  // namespace adaptmt::adapt
