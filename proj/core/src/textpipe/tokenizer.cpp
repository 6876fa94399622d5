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

#include "adaptmt/textpipe/tokenizer.hpp"

#include "adaptmt/common/error.hpp"

namespace adaptmt::textpipe {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool attaches_left(const std::string& tok) {
  if (tok.size() != 1) return false;
  switch (tok[0]) {
    case '.': case ',': case ';': case ':': case '!': case '?': case ')':
      return true;
    default:
      return false;
  }
}

}  // namespace

bool is_detached_punct(char c) noexcept {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

Tokenizer Tokenizer::from_name(std::string_view name) {
  if (name == "simple") return Tokenizer(Scheme::kSimple);
  if (name == "whitespace") return Tokenizer(Scheme::kWhitespace);
  throw ValidationError("unknown tokenizer scheme: " + std::string(name));
}

std::string_view Tokenizer::name() const noexcept {
  return scheme_ == Scheme::kSimple ? "simple" : "whitespace";
}

Tokens Tokenizer::tokenize(std::string_view text) const {
  Tokens out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : text) {
    if (is_space(c)) {
      flush();
    } else if (scheme_ == Scheme::kSimple && is_detached_punct(c)) {
      flush();
      out.emplace_back(1, c);
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

std::string Tokenizer::detokenize(const Tokens& tokens) const {
  std::string out;
  bool glue_next = false;  // previous token was an opening bracket or quote
  bool quote_open = false;
  for (const auto& tok : tokens) {
    bool glue = out.empty() || glue_next;
    glue_next = false;
    if (scheme_ == Scheme::kSimple) {
      if (attaches_left(tok)) {
        glue = true;
      } else if (tok == "(") {
        glue_next = true;
      } else if (tok == "\"") {
        if (quote_open) {
          glue = true;
        } else {
          glue_next = true;
        }
        quote_open = !quote_open;
      }
    }
    if (!glue) out.push_back(' ');
    out += tok;
  }
  return out;
}

}  // namespace adaptmt::textpipe
