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
#include <vector>

#include "adaptmt/common/error.hpp"
#include "adaptmt/metrics/metrics.hpp"
#include "adaptmt/textpipe/tokenizer.hpp"
#include "adaptmt/textpipe/utf8.hpp"

namespace {

std::vector<adaptmt::textpipe::Tokens> read_segments(const std::string& path, bool lowercase) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw adaptmt::Error("cannot read " + path);
  std::vector<adaptmt::textpipe::Tokens> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(adaptmt::textpipe::tokenize(lowercase ? adaptmt::textpipe::ascii_lower(line) : line));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scores hypotheses against references, one segment per line."};
  std::string hyp_path;
  std::string ref_path;
  bool lowercase = false;
  app.add_option("hypotheses", hyp_path, "hypothesis file")->required()->check(CLI::ExistingFile);
  app.add_option("references", ref_path, "reference file")->required()->check(CLI::ExistingFile);
  app.add_flag("--lowercase", lowercase, "lowercase ASCII letters before scoring");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto hyps = read_segments(hyp_path, lowercase);
    const auto refs = read_segments(ref_path, lowercase);
    if (hyps.size() != refs.size()) {
      std::cerr << "error: " << hyps.size() << " hypotheses but " << refs.size() << " references\n";
      return 1;
    }
    const double bleu = adaptmt::metrics::bleu(hyps, refs);
    const double ter = hyps.empty() ? 0.0 : adaptmt::metrics::corpus_ter(hyps, refs).score;
    std::cout << adaptmt::metrics::format_eval_line(bleu, ter, hyps.size()) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
