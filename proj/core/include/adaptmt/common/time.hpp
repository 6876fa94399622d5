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

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace adaptmt {

using Clock = std::chrono::system_clock;
using Instant = std::chrono::time_point<Clock, std::chrono::milliseconds>;

Instant now_utc();

// Milliseconds since the Unix epoch.
std::int64_t to_epoch_ms(Instant t) noexcept;
Instant from_epoch_ms(std::int64_t ms) noexcept;

// "2026-10-16T08:30:00.250Z"
std::string format_utc(Instant t);
// Accepts the format above, with or without the fractional part.
// Throws ParseError otherwise.
Instant parse_utc(std::string_view text);

}  // namespace adaptmt
