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

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "adaptmt/server/api.hpp"

namespace adaptmt::server {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
};

// "host:port", ":port" or "port". Throws ValidationError.
BindAddress parse_bind_address(std::string_view text);

struct ServiceOptions {
  BindAddress bind;
  std::size_t worker_threads = 16;
  std::size_t max_body_bytes = 8u << 20;
};

/// HTTP/1.1 front end for an ApiHandler.
class Service {
 public:
  Service(ApiHandler& handler, ModelRegistry& registry, ServiceOptions options = {});
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;
  // Calls stop().
  ~Service();

  // Binds and serves on a background thread. Throws Error when the address
  // cannot be bound.
  void start();
  // Port actually bound, valid after start().
  int port() const noexcept;
  bool running() const noexcept;

  // Stops accepting requests, waits for in-flight ones and checkpoints
  // every loaded session. Returns the checkpoint failures. Idempotent.
  std::vector<std::string> stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace adaptmt::server
