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
#include <string>
#include <string_view>
#include <vector>

namespace adaptmt::textpipe {

// Splits into code points. Invalid lead or continuation bytes are kept as
// single-byte units so that concatenating the result restores the input.
std::vector<std::string> utf8_chars(std::string_view text);

// Number of code points under the same rules as utf8_chars.
std::size_t utf8_length(std::string_view text);

// ASCII-only lowercase; other bytes pass through.
std::string ascii_lower(std::string_view text);

}  // namespace adaptmt::textpipe
