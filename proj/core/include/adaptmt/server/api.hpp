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
#include <string>
#include <utility>
#include <vector>

#include "adaptmt/server/credentials.hpp"
#include "adaptmt/server/registry.hpp"

namespace adaptmt::server {

struct ApiRequest {
  std::string method;         // "GET", "POST", ...
  std::string path;           // without query string
  std::string authorization;  // raw Authorization header, may be empty
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // always a JSON document
  std::vector<std::pair<std::string, std::string>> headers;
};

struct ApiOptions {
  // Updates allowed to wait behind the one being applied on a project.
  std::size_t update_queue_depth = 64;
  // When false a second concurrent update is refused with 409.
  bool queue_updates = true;
};

/// The JSON protocol, independent of any transport.
///
///   GET  /api/v1/health
///   POST /api/v1/translate  {project_id, segments: [{id, src}]}
///   POST /api/v1/update     {project_id, segment_id, src, post_edit}
///   GET  /api/v1/status/{project_id}
///
/// Errors are {"code": ..., "message": ...} with an HTTP status.
class ApiHandler {
 public:
  ApiHandler(ModelRegistry& registry, const CredentialStore& credentials, ApiOptions options = {});

  // Never throws.
  ApiResponse handle(const ApiRequest& request);

 private:
  ModelRegistry& registry_;
  const CredentialStore& credentials_;
  ApiOptions options_;
};

}  // namespace adaptmt::server
