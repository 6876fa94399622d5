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

#include "adaptmt/common/time.hpp"

#include <cstdio>
#include <ctime>

#include "adaptmt/common/error.hpp"

namespace adaptmt {

Instant now_utc() { return std::chrono::time_point_cast<std::chrono::milliseconds>(Clock::now()); }

std::int64_t to_epoch_ms(Instant t) noexcept { return t.time_since_epoch().count(); }

Instant from_epoch_ms(std::int64_t ms) noexcept { return Instant(std::chrono::milliseconds(ms)); }

std::string format_utc(Instant t) {
  const std::int64_t ms = to_epoch_ms(t);
  std::int64_t secs = ms / 1000;
  std::int64_t frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    secs -= 1;
  }
  const std::time_t tt = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(frac));
  return buf;
}

Instant parse_utc(std::string_view text) {
  std::tm tm{};
  int ms = 0;
  int consumed = 0;
  const std::string s(text);
  const int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &tm.tm_year, &tm.tm_mon, &tm.tm_mday, &tm.tm_hour,
                            &tm.tm_min, &tm.tm_sec, &consumed);
  if (n != 6) throw ParseError("bad UTC timestamp: " + s);
  std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest.front() == '.') {
    rest.remove_prefix(1);
    int digits = 0;
    while (!rest.empty() && rest.front() >= '0' && rest.front() <= '9') {
      if (digits < 3) ms = ms * 10 + (rest.front() - '0');
      ++digits;
      rest.remove_prefix(1);
    }
    if (digits == 0) throw ParseError("bad UTC timestamp: " + s);
    for (; digits < 3; ++digits) ms *= 10;
  }
  if (rest != "Z") throw ParseError("bad UTC timestamp: " + s);
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  const std::time_t secs = timegm(&tm);
  return from_epoch_ms(static_cast<std::int64_t>(secs) * 1000 + ms);
}

}  // namespace adaptmt
