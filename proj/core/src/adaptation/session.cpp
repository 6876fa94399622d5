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

#include "adaptmt/adaptation/session.hpp"

#include <chrono>
#include <cstdio>
#include <deque>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "adaptmt/common/error.hpp"
#include "adaptmt/neuralmt/checkpoint.hpp"
#include "adaptmt/neuralmt/decode.hpp"
#include "adaptmt/neuralmt/training.hpp"

namespace adaptmt::adapt {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxStoredHypotheses = 4096;

std::string format_loss(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

struct AdaptiveSession::HypothesisStore {
  mutable std::mutex mu;
  std::uint64_t next_id = 1;
  std::unordered_map<std::string, std::string> texts;
  std::deque<std::string> order;

  std::string add(std::string text) {
    std::lock_guard lock(mu);
    std::string id = "h" + std::to_string(next_id++);
    texts.emplace(id, std::move(text));
    order.push_back(id);
    if (order.size() > kMaxStoredHypotheses) {
      texts.erase(order.front());
      order.pop_front();
    }
    return id;
  }

  std::optional<std::string> find(std::string_view id) const {
    std::lock_guard lock(mu);
    auto it = texts.find(std::string(id));
    if (it == texts.end()) return std::nullopt;
    return it->second;
  }
};

TextPipeline::TextPipeline(textpipe::Tokenizer tokenizer, std::optional<textpipe::BpeModel> bpe)
    : tokenizer_(tokenizer), bpe_(std::move(bpe)) {}

textpipe::Tokens TextPipeline::segment(std::string_view text) const {
  textpipe::Tokens tokens = tokenizer_.tokenize(text);
  return bpe_ ? bpe_->apply(tokens) : tokens;
}

std::string TextPipeline::restore(const textpipe::Tokens& subwords) const {
  return tokenizer_.detokenize(bpe_ ? textpipe::bpe_undo(subwords).tokens : subwords);
}

std::optional<textpipe::BpeModel> load_bpe_for(const ModelConfig& config) {
  if (config.bpe_model_path.empty()) return std::nullopt;
  return textpipe::BpeModel::load(config.bpe_model_path);
}

AdaptiveSession::AdaptiveSession(ModelConfig config, nmt::NmtModel model)
    : AdaptiveSession(config, std::move(model), load_bpe_for(config)) {}

AdaptiveSession::AdaptiveSession(ModelConfig config, nmt::NmtModel model, std::optional<textpipe::BpeModel> bpe)
    : config_(std::move(config)),
      model_(std::move(model)),
      pipeline_(textpipe::Tokenizer::from_name(config_.tokenizer), std::move(bpe)),
      hypotheses_(std::make_unique<HypothesisStore>()) {
  config_.validate();
  model_.validate();
}

AdaptiveSession::AdaptiveSession(AdaptiveSession&&) noexcept = default;
AdaptiveSession& AdaptiveSession::operator=(AdaptiveSession&&) noexcept = default;
AdaptiveSession::~AdaptiveSession() = default;

std::vector<nmt::TokenId> AdaptiveSession::source_ids(std::string_view text) const {
  return model_.src_vocab.encode(pipeline_.segment(text));
}

std::vector<nmt::TokenId> AdaptiveSession::target_ids(std::string_view text) const {
  return model_.tgt_vocab.encode(pipeline_.segment(text));
}

Translation AdaptiveSession::translate_segment(std::string_view source) const {
  const auto src = source_ids(source);
  if (src.empty()) throw ValidationError("untranslatable segment");
  const auto out = nmt::decode(model_, src, config_.decode_options());
  std::string text = pipeline_.restore(model_.tgt_vocab.decode(out));
  std::string id = hypotheses_->add(text);
  return Translation{std::move(text), std::move(id)};
}

double AdaptiveSession::pair_loss(std::string_view source, std::string_view post_edit) const {
  const auto src = source_ids(source);
  const auto tgt = target_ids(post_edit);
  if (src.empty() || tgt.empty()) throw ValidationError("training pair is empty after tokenization");
  return nmt::sequence_loss(model_, src, tgt);
}

UpdateReport AdaptiveSession::confirm_and_update(const TrainingPair& pair) {
  if (pair.segment_id.empty() || pair.segment_id.find_first_of("\t\r\n") != std::string::npos) {
    throw ValidationError("segment_id must be non-empty and free of tabs and line breaks");
  }
  const auto src = source_ids(pair.source);
  if (src.empty()) throw ValidationError("source is empty after tokenization");
  const auto tgt = target_ids(pair.post_edit);
  if (tgt.empty()) throw ValidationError("post_edit is empty after tokenization");

  const auto start = std::chrono::steady_clock::now();
  nmt::ParamMap snapshot = model_.params;
  UpdateReport report;
  try {
    for (std::size_t i = 0; i < config_.ol_iterations; ++i) {
      nmt::LossAndGrad lg = nmt::loss_and_grad(model_, src, tgt);
      if (i == 0) report.pre_loss = lg.loss;
      nmt::sgd_step(model_, lg.grads, config_.learning_rate);
      ++report.steps;
    }
    report.post_loss = nmt::sequence_loss(model_, src, tgt);
  } catch (const NumericError&) {
    model_.params = std::move(snapshot);
    throw;
  }
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  update_log_.push_back(UpdateRecord{pair, report.pre_loss, report.post_loss});
  report.updates_applied = update_log_.size();
  return report;
}

std::optional<std::string> AdaptiveSession::hypothesis(std::string_view hypothesis_id) const {
  return hypotheses_->find(hypothesis_id);
}

bool AdaptiveSession::checkpoint_due() const noexcept {
  return config_.checkpoint_every > 0 && !update_log_.empty() && update_log_.size() % config_.checkpoint_every == 0;
}

fs::path AdaptiveSession::checkpoint() const { return checkpoint(config_.checkpoint_path); }

fs::path AdaptiveSession::checkpoint(const fs::path& path) const {
  json updates = json::array();
  for (const auto& r : update_log_) {
    updates.push_back({{"segment_id", r.pair.segment_id},
                       {"timestamp", format_utc(r.pair.timestamp)},
                       {"source", r.pair.source},
                       {"post_edit", r.pair.post_edit},
                       {"pre_loss", r.pre_loss},
                       {"post_loss", r.post_loss}});
  }
  std::uint64_t next_hypothesis;
  {
    std::lock_guard lock(hypotheses_->mu);
    next_hypothesis = hypotheses_->next_id;
  }
  const json state = {{"project_id", config_.project_id},
                      {"next_hypothesis", next_hypothesis},
                      {"updates", std::move(updates)}};
  nmt::save_checkpoint(model_, path, state.dump());
  return path;
}

AdaptiveSession AdaptiveSession::restore(const fs::path& path, ModelConfig config) {
  nmt::CheckpointContents contents = nmt::load_checkpoint(path);
  AdaptiveSession session(std::move(config), std::move(contents.model));
  if (contents.session_state.empty()) return session;
  try {
    const json state = json::parse(contents.session_state);
    for (const auto& u : state.at("updates")) {
      TrainingPair pair{u.at("source").get<std::string>(), u.at("post_edit").get<std::string>(),
                        u.at("segment_id").get<std::string>(), parse_utc(u.at("timestamp").get<std::string>())};
      session.update_log_.push_back(
          UpdateRecord{std::move(pair), u.at("pre_loss").get<double>(), u.at("post_loss").get<double>()});
    }
    session.hypotheses_->next_id = state.value("next_hypothesis", std::uint64_t{1});
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint session state: ") + e.what());
  }
  return session;
}

AdaptiveSession AdaptiveSession::open(ModelConfig config) {
  const fs::path path = config.checkpoint_path;
  return restore(path, std::move(config));
}

std::string AdaptiveSession::export_update_log() const {
  std::ostringstream out;
  for (const auto& r : update_log_) {
    out << r.pair.segment_id << '\t' << format_utc(r.pair.timestamp) << '\t' << format_loss(r.pre_loss) << '\t'
        << format_loss(r.post_loss) << '\n';
  }
  return out.str();
}

}  // namespace adaptmt::adapt
