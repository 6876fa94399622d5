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

#include "adaptmt/neuralmt/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "adaptmt/common/error.hpp"

namespace adaptmt::nmt {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::string_view kVersionPrefix = "adaptmt-ckpt-";

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return out;
  }
}

class Fnv {
 public:
  void update(const char* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= static_cast<unsigned char>(p[i]);
      h_ *= 1099511628211ULL;
    }
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 1469598103934665603ULL;
};

void append_u64(std::string& out, std::uint64_t v) {
  v = to_little(v);
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

std::uint64_t read_u64(std::string_view bytes, std::size_t& pos) {
  if (pos + 8 > bytes.size()) throw ParseError("checkpoint truncated");
  std::uint64_t v;
  std::memcpy(&v, bytes.data() + pos, 8);
  pos += 8;
  return to_little(v);
}

json arch_to_json(const Architecture& a) {
  return {{"kind", a.kind},
          {"embedding_dim", a.embedding_dim},
          {"hidden_dim", a.hidden_dim},
          {"layers", a.layers},
          {"attention_heads", a.attention_heads},
          {"src_vocab_size", a.src_vocab_size},
          {"tgt_vocab_size", a.tgt_vocab_size}};
}

Architecture arch_from_json(const json& j) {
  Architecture a;
  a.kind = j.at("kind").get<std::string>();
  a.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  a.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  a.layers = j.at("layers").get<std::size_t>();
  a.attention_heads = j.at("attention_heads").get<std::size_t>();
  a.src_vocab_size = j.at("src_vocab_size").get<std::size_t>();
  a.tgt_vocab_size = j.at("tgt_vocab_size").get<std::size_t>();
  return a;
}

}  // namespace

void save_checkpoint(const NmtModel& model, const fs::path& path, std::string_view session_state) {
  model.validate();
  const std::string base = path.filename().string();
  const std::string src_vocab_name = base + ".src.vocab";
  const std::string tgt_vocab_name = base + ".tgt.vocab";

  json header;
  header["format"] = std::string(kCheckpointVersion);
  header["arch"] = arch_to_json(model.arch);
  header["rng_seed"] = model.rng_seed;
  header["src_vocab"] = src_vocab_name;
  header["tgt_vocab"] = tgt_vocab_name;
  header["session"] = std::string(session_state);
  json params = json::array();
  for (const auto& [name, t] : model.params) params.push_back({{"name", name}, {"shape", t.shape()}});
  header["params"] = std::move(params);
  const std::string header_text = header.dump();

  std::string blob;
  blob += kCheckpointVersion;
  blob += '\n';
  append_u64(blob, header_text.size());
  blob += header_text;
  for (const auto& [name, t] : model.params) {
    for (double v : t.data()) append_u64(blob, std::bit_cast<std::uint64_t>(v));
  }
  Fnv fnv;
  fnv.update(blob.data(), blob.size());
  append_u64(blob, fnv.digest());

  const fs::path dir = path.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  model.src_vocab.save(dir / src_vocab_name);
  model.tgt_vocab.save(dir / tgt_vocab_name);

  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint: " + tmp.string());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw Error("failed writing checkpoint: " + tmp.string());
  }
  fs::rename(tmp, path);
}

CheckpointContents load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read checkpoint: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  const auto eol = bytes.find('\n');
  const std::string_view first = std::string_view(bytes).substr(0, eol == std::string::npos ? bytes.size() : eol);
  if (first != kCheckpointVersion) {
    if (first.substr(0, kVersionPrefix.size()) == kVersionPrefix) throw IncompatibleCheckpoint();
    throw ParseError("not an adaptmt checkpoint: " + path.string());
  }

  if (bytes.size() < eol + 1 + 16) throw ParseError("checkpoint truncated");
  std::size_t tail = bytes.size() - 8;
  const std::uint64_t stored_digest = read_u64(bytes, tail);
  Fnv fnv;
  fnv.update(bytes.data(), bytes.size() - 8);
  if (fnv.digest() != stored_digest) throw ParseError("checkpoint checksum mismatch");

  std::size_t pos = eol + 1;
  const std::uint64_t header_len = read_u64(bytes, pos);
  if (pos + header_len > bytes.size() - 8) throw ParseError("checkpoint truncated");
  json header;
  try {
    header = json::parse(bytes.substr(pos, header_len));
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what());
  }
  pos += header_len;

  CheckpointContents out;
  try {
    if (header.at("format").get<std::string>() != kCheckpointVersion) throw IncompatibleCheckpoint();
    NmtModel& model = out.model;
    model.arch = arch_from_json(header.at("arch"));
    model.rng_seed = header.at("rng_seed").get<std::uint64_t>();
    out.session_state = header.value("session", std::string());
    const fs::path dir = path.parent_path();
    model.src_vocab = textpipe::Vocabulary::load(dir / header.at("src_vocab").get<std::string>());
    model.tgt_vocab = textpipe::Vocabulary::load(dir / header.at("tgt_vocab").get<std::string>());
    for (const auto& p : header.at("params")) {
      Shape shape = p.at("shape").get<Shape>();
      const std::size_t n = shape_size(shape);
      if (pos + 8 * n > bytes.size() - 8) throw ParseError("checkpoint truncated");
      std::vector<double> values(n);
      for (double& v : values) v = std::bit_cast<double>(read_u64(bytes, pos));
      model.params.emplace(p.at("name").get<std::string>(), Tensor(std::move(shape), std::move(values)));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what());
  }
  if (pos != bytes.size() - 8) throw ParseError("checkpoint has trailing bytes");
  out.model.validate();
  return out;
}

}  // namespace adaptmt::nmt
