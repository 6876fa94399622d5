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

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <pthread.h>
#include <string>

#include "adaptmt/server/api.hpp"
#include "adaptmt/server/credentials.hpp"
#include "adaptmt/server/registry.hpp"
#include "adaptmt/server/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive translation server."};
  std::string bind = "127.0.0.1:8080";
  std::string config_root;
  std::string credentials_path;
  std::size_t queue_depth = 64;
  std::size_t workers = 16;
  app.add_option("--bind", bind, "host:port to listen on");
  app.add_option("--config-root", config_root, "directory of <project_id>.conf files (default: $ADAPTMT_CONFIG_ROOT)");
  app.add_option("--credentials", credentials_path, "credentials JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--update-queue-depth", queue_depth, "updates that may wait per project");
  app.add_option("--workers", workers, "HTTP worker threads");
  CLI11_PARSE(app, argc, argv);

  if (config_root.empty()) {
    if (const char* env = std::getenv("ADAPTMT_CONFIG_ROOT")) config_root = env;
  }
  if (config_root.empty()) {
    std::cerr << "error: no config root; pass --config-root or set ADAPTMT_CONFIG_ROOT\n";
    return 2;
  }

  // Block termination signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    using namespace adaptmt::server;
    const CredentialStore credentials = CredentialStore::load(credentials_path);
    ModelRegistry registry(config_root);
    ApiHandler handler(registry, credentials, ApiOptions{queue_depth, true});
    ServiceOptions options;
    options.bind = parse_bind_address(bind);
    options.worker_threads = workers;
    Service service(handler, registry, options);
    service.start();
    std::cerr << "listening on " << options.bind.host << ':' << service.port() << " (config root " << config_root
              << ")\n";

    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "shutting down\n";
    const auto failures = service.stop();
    for (const auto& f : failures) std::cerr << "checkpoint failed: " << f << '\n';
    return failures.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
