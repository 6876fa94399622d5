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

#include "adaptmt/simulator/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "adaptmt/common/error.hpp"
#include "adaptmt/textpipe/tokenizer.hpp"

namespace adaptmt::sim {
namespace {

struct Word {
  const char* src;
  const char* tgt;
};

constexpr Word kNouns[] = {
    {"device", "aparato"},   {"gadget", "dispositivo"}, {"screen", "pantalla"}, {"display", "monitor"},
    {"key", "llave"},        {"button", "tecla"},       {"file", "archivo"},    {"record", "fichero"},
    {"user", "usuario"},     {"client", "cliente"},     {"message", "mensaje"}, {"note", "aviso"},
    {"window", "ventana"},   {"panel", "marco"},        {"printer", "impresora"}, {"network", "red"},
    {"system", "sistema"},   {"server", "servidor"},    {"report", "informe"},  {"table", "tabla"},
};

constexpr Word kVerbs[] = {
    {"opens", "abre"},   {"closes", "cierra"},  {"shows", "muestra"},  {"saves", "guarda"},
    {"sends", "envia"},  {"deletes", "borra"},  {"checks", "revisa"},  {"updates", "actualiza"},
};

constexpr Word kAdjectives[] = {
    {"new", "nuevo"},    {"old", "viejo"},  {"red", "rojo"},     {"small", "pequeno"},
    {"large", "grande"}, {"main", "principal"}, {"blue", "azul"}, {"fast", "rapido"},
};

// (noun, synonym): in the test domain the noun takes the synonym's
// translation.
constexpr std::pair<const char*, const char*> kOverridePool[] = {
    {"device", "gadget"}, {"screen", "display"}, {"key", "button"},  {"file", "record"},
    {"user", "client"},   {"message", "note"},   {"window", "panel"},
};

// Slots: N1/N2 nouns, A1/A2 adjectives, V verb. Anything else is a literal
// whose translation sits at the same slot position in `tgt`.
struct Template {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
};

const std::vector<Template>& templates() {
  static const std::vector<Template> t = {
      {{"the", "N1", "V", "the", "N2", "."}, {"el", "N1", "V", "el", "N2", "."}},
      {{"the", "A1", "N1", "V", "a", "N2", "."}, {"el", "N1", "A1", "V", "un", "N2", "."}},
      {{"a", "N1", "V", "the", "A2", "N2", "."}, {"un", "N1", "V", "el", "N2", "A2", "."}},
      {{"the", "N1", "V", "."}, {"el", "N1", "V", "."}},
      {{"the", "N1", "and", "the", "N2", "V", "."}, {"el", "N1", "y", "el", "N2", "V", "."}},
      {{"the", "N1", "of", "the", "A1", "N2", "V", "."}, {"el", "N1", "de", "el", "N2", "A1", "V", "."}},
  };
  return t;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Lexicon {
  std::map<std::string, std::string> general;
};

Segment realize(const Template& t, const std::map<std::string, std::string>& fill,
                const std::map<std::string, std::string>& translation) {
  textpipe::Tokens src;
  textpipe::Tokens tgt;
  for (const auto& item : t.src) {
    auto it = fill.find(item);
    src.push_back(it == fill.end() ? item : it->second);
  }
  for (const auto& item : t.tgt) {
    auto it = fill.find(item);
    tgt.push_back(it == fill.end() ? item : translation.at(it->second));
  }
  return Segment{textpipe::detokenize(src), textpipe::detokenize(tgt)};
}

}  // namespace

Document parse_document(std::string_view tsv) {
  Document doc;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("expected source<TAB>reference", line_no);
    }
    doc.push_back(Segment{line.substr(0, tab), line.substr(tab + 1)});
  }
  return doc;
}

Document read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string format_document(const Document& doc) {
  std::string out;
  for (const auto& s : doc) out += s.source + '\t' + s.reference + '\n';
  return out;
}

void write_document(const Document& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << format_document(doc);
}

SyntheticCorpus generate_corpus(const CorpusOptions& options) {
  constexpr std::size_t kPool = std::size(kOverridePool);
  if (options.overrides > kPool) {
    throw ValidationError("at most " + std::to_string(kPool) + " terminology overrides are available");
  }
  if (options.override_rate < 0.0 || options.override_rate > 1.0) {
    throw ValidationError("override_rate must lie in [0, 1]");
  }
  std::mt19937_64 rng(options.seed);

  Lexicon lex;
  std::vector<std::string> nouns, verbs, adjectives;
  for (const auto& w : kNouns) {
    lex.general.emplace(w.src, w.tgt);
    nouns.emplace_back(w.src);
  }
  for (const auto& w : kVerbs) {
    lex.general.emplace(w.src, w.tgt);
    verbs.emplace_back(w.src);
  }
  for (const auto& w : kAdjectives) {
    lex.general.emplace(w.src, w.tgt);
    adjectives.emplace_back(w.src);
  }

  std::vector<std::size_t> pool(kPool);
  for (std::size_t i = 0; i < kPool; ++i) pool[i] = i;
  for (std::size_t i = kPool - 1; i > 0; --i) std::swap(pool[i], pool[pick(rng, i + 1)]);

  SyntheticCorpus corpus;
  std::vector<std::string> overridden;
  for (std::size_t i = 0; i < options.overrides; ++i) {
    const auto& [noun, synonym] = kOverridePool[pool[i]];
    corpus.overrides.push_back(TermOverride{noun, lex.general.at(noun), lex.general.at(synonym)});
    overridden.emplace_back(noun);
  }
  std::map<std::string, std::string> domain = lex.general;
  for (const auto& o : corpus.overrides) domain[o.source] = o.domain_target;
  std::vector<std::string> plain_nouns;
  for (const auto& n : nouns) {
    if (std::find(overridden.begin(), overridden.end(), n) == overridden.end()) plain_nouns.push_back(n);
  }

  const auto& tpl = templates();
  auto fill_slots = [&](bool test_domain) {
    std::map<std::string, std::string> fill;
    for (const char* slot : {"N1", "N2"}) {
      if (test_domain && !overridden.empty() && unit(rng) < options.override_rate) {
        fill[slot] = overridden[pick(rng, overridden.size())];
      } else {
        const auto& from = test_domain ? plain_nouns : nouns;
        fill[slot] = from[pick(rng, from.size())];
      }
    }
    fill["A1"] = adjectives[pick(rng, adjectives.size())];
    fill["A2"] = adjectives[pick(rng, adjectives.size())];
    fill["V"] = verbs[pick(rng, verbs.size())];
    return fill;
  };

  for (std::size_t i = 0; i < options.train_size; ++i) {
    const Template& t = tpl[pick(rng, tpl.size())];
    corpus.train.push_back(realize(t, fill_slots(false), lex.general));
  }
  for (std::size_t i = 0; i < options.dev_size; ++i) {
    const Template& t = tpl[pick(rng, tpl.size())];
    corpus.dev.push_back(realize(t, fill_slots(false), lex.general));
  }
  for (std::size_t i = 0; i < options.test_size; ++i) {
    const Template& t = tpl[pick(rng, tpl.size())];
    corpus.test.push_back(realize(t, fill_slots(true), domain));
  }
  return corpus;
}

}  // namespace adaptmt::sim
