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

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adaptmt/adaptation/session.hpp"

namespace adaptmt::server {

/// Reader-writer lock that prefers writers and admits them in arrival order.
///
/// A reader waits while any writer holds or waits for the lock. Writers take
/// numbered tickets and enter strictly in ticket order.
class ProjectLock {
 public:
  void lock_shared();
  void unlock_shared();

  // Returns false without waiting when `max_waiting` writers already wait
  // behind the current holder.
  bool try_lock_queued(std::size_t max_waiting);
  // Returns false when another writer holds or waits for the lock.
  bool try_lock_exclusive();
  void lock();
  void unlock();

  // Writers holding or waiting for the lock.
  std::size_t pending_writers() const;

 private:
  void wait_for_turn(std::unique_lock<std::mutex>& guard, std::uint64_t ticket);

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t readers_ = 0;
  bool writer_ = false;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t serving_ = 0;
};

struct Project {
  explicit Project(std::string id) : project_id(std::move(id)) {}

  const std::string project_id;
  ProjectLock lock;
  // Set once by ModelRegistry and never reset; read under `lock`.
  std::optional<adapt::AdaptiveSession> session;

 private:
  friend class ModelRegistry;
  std::mutex load_mu_;
};

/// Per-project adaptive sessions backed by `<config_root>/<project_id>.conf`.
/// Sessions load lazily on first use and stay resident.
class ModelRegistry {
 public:
  explicit ModelRegistry(std::filesystem::path config_root);

  const std::filesystem::path& config_root() const noexcept { return config_root_; }
  std::filesystem::path config_path(std::string_view project_id) const;

  // True when the id is well formed and a config file exists for it.
  bool knows(std::string_view project_id) const;

  // nullptr for unknown projects. The returned project may not be loaded
  // yet; see ensure_loaded.
  std::shared_ptr<Project> find(std::string_view project_id);

  // Loads the session from its config and checkpoint if needed. Throws
  // Error when either cannot be read; the next call retries.
  void ensure_loaded(Project& project);

  // Registers an already built session, replacing nothing.
  std::shared_ptr<Project> add(adapt::AdaptiveSession session);

  std::vector<std::shared_ptr<Project>> loaded() const;

  // Checkpoints every loaded session under its exclusive lock. Returns one
  // message per failure.
  std::vector<std::string> flush_checkpoints();

 private:
  std::filesystem::path config_root_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Project>, std::less<>> projects_;
};

}  // namespace adaptmt::server
