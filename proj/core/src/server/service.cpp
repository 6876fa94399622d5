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

#include "adaptmt/server/service.hpp"

#include <httplib.h>

#include <charconv>
#include <thread>

#include "adaptmt/common/error.hpp"

namespace adaptmt::server {

BindAddress parse_bind_address(std::string_view text) {
  BindAddress out;
  std::string_view port = text;
  if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) out.host = std::string(text.substr(0, colon));
    port = text.substr(colon + 1);
  }
  int value = -1;
  const auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (port.empty() || ec != std::errc() || end != port.data() + port.size() || value < 0 || value > 65535) {
    throw ValidationError("bad bind address '" + std::string(text) + "', expected host:port");
  }
  out.port = value;
  return out;
}

struct Service::Impl {
  ApiHandler& handler;
  ModelRegistry& registry;
  ServiceOptions options;
  httplib::Server http;
  std::thread thread;
  int port = 0;
  bool started = false;
  bool stopped = false;

  Impl(ApiHandler& h, ModelRegistry& r, ServiceOptions o) : handler(h), registry(r), options(std::move(o)) {}

  void dispatch(const httplib::Request& req, httplib::Response& res) {
    ApiRequest api{req.method, req.path, req.get_header_value("Authorization"), req.body};
    ApiResponse out = handler.handle(api);
    res.status = out.status;
    for (const auto& [k, v] : out.headers) res.set_header(k, v);
    res.set_content(out.body, "application/json; charset=utf-8");
  }
};

Service::Service(ApiHandler& handler, ModelRegistry& registry, ServiceOptions options)
    : impl_(std::make_unique<Impl>(handler, registry, std::move(options))) {
  auto& http = impl_->http;
  const std::size_t workers = std::max<std::size_t>(1, impl_->options.worker_threads);
  http.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  http.set_payload_max_length(impl_->options.max_body_bytes);
  // httplib also sets SO_REUSEPORT by default, which would let a second
  // server share the port instead of failing to bind.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  auto route = [impl = impl_.get()](const httplib::Request& req, httplib::Response& res) { impl->dispatch(req, res); };
  http.Get(".*", route);
  http.Post(".*", route);
  http.Put(".*", route);
  http.Patch(".*", route);
  http.Delete(".*", route);
  http.Options(".*", route);
  // Requests httplib rejects itself (bad framing, oversized bodies) still
  // get a JSON error.
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string body = "{\"code\":\"http_error\",\"message\":\"HTTP status " + std::to_string(res.status) + "\"}";
    res.set_content(body, "application/json; charset=utf-8");
  });
}

Service::~Service() {
  try {
    stop();
  } catch (...) {
  }
}

void Service::start() {
  if (impl_->started) throw Error("service already started");
  const auto& bind = impl_->options.bind;
  int port = bind.port;
  if (port == 0) {
    port = impl_->http.bind_to_any_port(bind.host);
    if (port < 0) throw Error("cannot bind " + bind.host + ":0");
  } else if (!impl_->http.bind_to_port(bind.host, port)) {
    throw Error("cannot bind " + bind.host + ":" + std::to_string(port));
  }
  impl_->port = port;
  impl_->started = true;
  impl_->thread = std::thread([impl = impl_.get()] { impl->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

int Service::port() const noexcept { return impl_->port; }

bool Service::running() const noexcept { return impl_->started && !impl_->stopped && impl_->http.is_running(); }

std::vector<std::string> Service::stop() {
  if (!impl_->started || impl_->stopped) return {};
  impl_->stopped = true;
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  return impl_->registry.flush_checkpoints();
}

}  // namespace adaptmt::server
