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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "adaptmt/pelog/pelog.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Post-editing effort logs."};
  app.require_subcommand(1);

  auto* report = app.add_subcommand("report", "print the effort table of a log");
  std::string log_path;
  std::string segments_path;
  report->add_option("log", log_path, "pelog XML file")->required()->check(CLI::ExistingFile);
  report->add_option("--segments", segments_path, "segment_id TAB source TAB final target, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  try {
    const auto log = adaptmt::pelog::read_log_file(log_path);
    for (const auto& w : log.warnings) std::cerr << "warning: " << w << '\n';
    const auto segments = adaptmt::pelog::read_segments_file(segments_path);
    std::cout << adaptmt::pelog::format_report(adaptmt::pelog::compute_effort(log.events, segments));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
