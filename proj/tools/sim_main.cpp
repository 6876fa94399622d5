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

#include <fstream>
#include <iostream>
#include <string>

#include "adaptmt/adaptation/config.hpp"
#include "adaptmt/adaptation/session.hpp"
#include "adaptmt/common/error.hpp"
#include "adaptmt/simulator/corpus.hpp"
#include "adaptmt/simulator/simulation.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Replays a document through a model as if a post-editor produced the references."};
  std::string config_path;
  std::string document_path;
  std::string ol = "on";
  std::string out_path;
  app.add_option("--config", config_path, "model config file")->required()->check(CLI::ExistingFile);
  app.add_option("--document", document_path, "source TAB reference, one segment per line")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--ol", ol, "online learning")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--out", out_path, "report file, '-' for stdout")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    auto config = adaptmt::adapt::load_config(config_path);
    auto session = adaptmt::adapt::AdaptiveSession::open(config);
    const auto document = adaptmt::sim::read_document(document_path);
    const auto run = adaptmt::sim::run_simulation(session, document, ol == "on");
    const std::string report = adaptmt::sim::format_run_report(run);
    if (out_path == "-") {
      std::cout << report;
    } else {
      std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
      if (!(out << report)) throw adaptmt::Error("cannot write " + out_path);
      std::cout << adaptmt::sim::format_summary(run.summary) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
