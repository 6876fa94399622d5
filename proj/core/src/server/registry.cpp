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

#include "adaptmt/server/registry.hpp"

#include <system_error>

#include "adaptmt/adaptation/config.hpp"
#include "adaptmt/common/error.hpp"

namespace adaptmt::server {

namespace fs = std::filesystem;

void ProjectLock::lock_shared() {
  std::unique_lock guard(mu_);
  cv_.wait(guard, [&] { return !writer_ && next_ticket_ == serving_; });
  ++readers_;
}

void ProjectLock::unlock_shared() {
  std::lock_guard guard(mu_);
  if (--readers_ == 0) cv_.notify_all();
}

void ProjectLock::wait_for_turn(std::unique_lock<std::mutex>& guard, std::uint64_t ticket) {
  cv_.wait(guard, [&] { return serving_ == ticket && !writer_ && readers_ == 0; });
  writer_ = true;
}

bool ProjectLock::try_lock_queued(std::size_t max_waiting) {
  std::unique_lock guard(mu_);
  const std::uint64_t pending = next_ticket_ - serving_;
  // One of the pending writers may be the holder rather than a waiter.
  if (pending > max_waiting) return false;
  wait_for_turn(guard, next_ticket_++);
  return true;
}

bool ProjectLock::try_lock_exclusive() {
  std::unique_lock guard(mu_);
  if (next_ticket_ != serving_) return false;
  wait_for_turn(guard, next_ticket_++);
  return true;
}

void ProjectLock::lock() {
  std::unique_lock guard(mu_);
  wait_for_turn(guard, next_ticket_++);
}

void ProjectLock::unlock() {
  std::lock_guard guard(mu_);
  writer_ = false;
  ++serving_;
  cv_.notify_all();
}

std::size_t ProjectLock::pending_writers() const {
  std::lock_guard guard(mu_);
  return static_cast<std::size_t>(next_ticket_ - serving_);
}

ModelRegistry::ModelRegistry(fs::path config_root) : config_root_(std::move(config_root)) {}

fs::path ModelRegistry::config_path(std::string_view project_id) const {
  return config_root_ / (std::string(project_id) + ".conf");
}

bool ModelRegistry::knows(std::string_view project_id) const {
  if (!adapt::is_valid_project_id(project_id)) return false;
  std::error_code ec;
  return fs::is_regular_file(config_path(project_id), ec);
}

std::shared_ptr<Project> ModelRegistry::find(std::string_view project_id) {
  {
    std::lock_guard guard(mu_);
    if (auto it = projects_.find(project_id); it != projects_.end()) return it->second;
  }
  if (!knows(project_id)) return nullptr;
  std::lock_guard guard(mu_);
  auto [it, inserted] = projects_.try_emplace(std::string(project_id), nullptr);
  if (inserted) it->second = std::make_shared<Project>(std::string(project_id));
  return it->second;
}

void ModelRegistry::ensure_loaded(Project& project) {
  std::lock_guard guard(project.load_mu_);
  if (project.session) return;
  adapt::ModelConfig config = adapt::load_config(config_path(project.project_id));
  if (config.project_id != project.project_id) {
    throw ValidationError("config for '" + project.project_id + "' declares project_id '" + config.project_id + "'");
  }
  auto session = adapt::AdaptiveSession::open(std::move(config));
  // Nobody reads `session` before it is set, and it is set only here.
  std::lock_guard write(project.lock);
  project.session.emplace(std::move(session));
}

std::shared_ptr<Project> ModelRegistry::add(adapt::AdaptiveSession session) {
  const std::string id = session.config().project_id;
  auto project = std::make_shared<Project>(id);
  project->session.emplace(std::move(session));
  std::lock_guard guard(mu_);
  auto [it, inserted] = projects_.try_emplace(id, project);
  if (!inserted) throw ValidationError("project already registered: " + id);
  return project;
}

std::vector<std::shared_ptr<Project>> ModelRegistry::loaded() const {
  std::vector<std::shared_ptr<Project>> all;
  {
    std::lock_guard guard(mu_);
    for (const auto& entry : projects_) all.push_back(entry.second);
  }
  std::vector<std::shared_ptr<Project>> out;
  for (auto& project : all) {
    std::lock_guard load(project->load_mu_);
    if (project->session) out.push_back(std::move(project));
  }
  return out;
}

std::vector<std::string> ModelRegistry::flush_checkpoints() {
  std::vector<std::string> failures;
  for (const auto& project : loaded()) {
    std::lock_guard write(project->lock);
    try {
      project->session->checkpoint();
    } catch (const std::exception& e) {
      failures.push_back(project->project_id + ": " + e.what());
    }
  }
  return failures;
}

}  // namespace adaptmt::server
