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

#include <string>
#include <string_view>
#include <vector>

namespace adaptmt::textpipe {

using Tokens = std::vector<std::string>;

// Splits UTF-8 text on ASCII whitespace and detaches the punctuation marks
// . , ; : ! ? " ( ) into single-character tokens. Stateless.
class Tokenizer {
 public:
  enum class Scheme {
    kSimple,      // whitespace + punctuation detachment
    kWhitespace,  // whitespace only
  };

  explicit Tokenizer(Scheme scheme = Scheme::kSimple) : scheme_(scheme) {}

  // Accepts "simple" and "whitespace"; throws ValidationError otherwise.
  static Tokenizer from_name(std::string_view name);

  Scheme scheme() const noexcept { return scheme_; }
  std::string_view name() const noexcept;

  Tokens tokenize(std::string_view text) const;

  // Joins with single spaces, then re-attaches punctuation: no space before
  // . , ; : ! ? ) or after (. Double quotes alternate opening/closing.
  std::string detokenize(const Tokens& tokens) const;

 private:
  Scheme scheme_;
};

bool is_detached_punct(char c) noexcept;

inline Tokens tokenize(std::string_view text) { return Tokenizer().tokenize(text); }
inline std::string detokenize(const Tokens& tokens) { return Tokenizer().detokenize(tokens); }

}  // namespace adaptmt::textpipe
