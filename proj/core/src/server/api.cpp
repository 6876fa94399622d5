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

#include "adaptmt/server/api.hpp"

#include <exception>
#include <json.hpp>
#include <mutex>
#include <shared_mutex>
#include <string_view>

#include "adaptmt/common/error.hpp"
#include "adaptmt/common/time.hpp"

namespace adaptmt::server {
namespace {

using json = nlohmann::json;

constexpr std::string_view kPrefix = "/api/v1/";

// Carries an HTTP status out of the request handlers.
struct ApiError {
  int status;
  json body;
};

ApiError api_error(int status, std::string code, std::string message) {
  return ApiError{status, json{{"code", std::move(code)}, {"message", std::move(message)}}};
}

ApiResponse respond(int status, const json& body) {
  return ApiResponse{status, body.dump(-1, ' ', false, json::error_handler_t::replace), {}};
}

json parse_body(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw api_error(422, "malformed_json", "request body is not valid JSON");
  if (!doc.is_object()) throw api_error(422, "malformed_body", "request body must be a JSON object");
  return doc;
}

const json& field(const json& obj, const std::string& name, const std::string& where = "") {
  const std::string label = where.empty() ? name : where + "." + name;
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) {
    ApiError e = api_error(422, "missing_field", "missing field: " + label);
    e.body["field"] = label;
    throw e;
  }
  return *it;
}

std::string string_field(const json& obj, const std::string& name, const std::string& where = "") {
  const json& v = field(obj, name, where);
  const std::string label = where.empty() ? name : where + "." + name;
  if (!v.is_string()) {
    ApiError e = api_error(422, "invalid_field", "field must be a string: " + label);
    e.body["field"] = label;
    throw e;
  }
  return v.get<std::string>();
}

// Segment ids may be strings or integers.
std::string id_field(const json& obj, const std::string& name, const std::string& where = "") {
  const json& v = field(obj, name, where);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  const std::string label = where.empty() ? name : where + "." + name;
  ApiError e = api_error(422, "invalid_field", "field must be a string or an integer: " + label);
  e.body["field"] = label;
  throw e;
}

}  // namespace

ApiHandler::ApiHandler(ModelRegistry& registry, const CredentialStore& credentials, ApiOptions options)
    : registry_(registry), credentials_(credentials), options_(options) {}

ApiResponse ApiHandler::handle(const ApiRequest& request) {
  try {
    std::string_view path = request.path;
    if (path.size() > 1 && path.back() == '/') path.remove_suffix(1);
    if (path.substr(0, kPrefix.size()) != kPrefix) throw api_error(404, "not_found", "no such endpoint");
    const std::string_view route = path.substr(kPrefix.size());
    const bool is_status = route.substr(0, 7) == "status/";
    const char* expected = nullptr;
    if (route == "health" || is_status) {
      expected = "GET";
    } else if (route == "translate" || route == "update") {
      expected = "POST";
    } else {
      throw api_error(404, "not_found", "no such endpoint");
    }
    if (request.method != expected) {
      throw api_error(405, "method_not_allowed", std::string("use ") + expected);
    }
    if (route == "health") return respond(200, json{{"status", "ok"}});

    const auto creds = parse_basic_auth(request.authorization);
    const UserRecord* user = creds ? credentials_.authenticate(creds->first, creds->second) : nullptr;
    if (user == nullptr) {
      ApiResponse r = respond(401, json{{"code", "unauthenticated"}, {"message", "valid credentials required"}});
      r.headers.emplace_back("WWW-Authenticate", "Basic realm=\"adaptmt\"");
      return r;
    }

    std::string project_id;
    json body;
    if (is_status) {
      project_id = std::string(route.substr(7));
    } else {
      body = parse_body(request.body);
      project_id = string_field(body, "project_id");
    }
    if (!user->may_access(project_id)) {
      throw api_error(403, "forbidden", "user '" + user->username + "' may not access project '" + project_id + "'");
    }
    std::shared_ptr<Project> project = registry_.find(project_id);
    if (!project) throw api_error(404, "unknown_project", "unknown project: " + project_id);

    if (is_status) {
      json out = {{"project_id", project_id}, {"model_loaded", false}, {"updates_applied", 0},
                  {"last_update_time", nullptr}, {"src_lang", nullptr}, {"tgt_lang", nullptr}};
      try {
        registry_.ensure_loaded(*project);
      } catch (const Error& e) {
        out["load_error"] = e.what();
        return respond(200, out);
      }
      std::shared_lock guard(project->lock);
      const auto& s = *project->session;
      out["model_loaded"] = true;
      out["updates_applied"] = s.updates_applied();
      if (!s.update_log().empty()) out["last_update_time"] = format_utc(s.update_log().back().pair.timestamp);
      out["src_lang"] = s.config().src_lang;
      out["tgt_lang"] = s.config().tgt_lang;
      return respond(200, out);
    }

    // Validate the whole body before touching the model.
    std::vector<std::pair<json, std::string>> segments;
    adapt::TrainingPair pair;
    if (route == "translate") {
      const json& list = field(body, "segments");
      if (!list.is_array()) {
        ApiError e = api_error(422, "invalid_field", "field must be an array: segments");
        e.body["field"] = "segments";
        throw e;
      }
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "segments[" + std::to_string(i) + "]";
        if (!list[i].is_object()) throw api_error(422, "invalid_field", where + " must be an object");
        id_field(list[i], "id", where);
        segments.emplace_back(list[i].at("id"), string_field(list[i], "src", where));
      }
    } else {
      pair.segment_id = id_field(body, "segment_id");
      pair.source = string_field(body, "src");
      pair.post_edit = string_field(body, "post_edit");
    }

    try {
      registry_.ensure_loaded(*project);
    } catch (const Error& e) {
      throw api_error(500, "model_unavailable", std::string("cannot load model: ") + e.what());
    }

    if (route == "translate") {
      json out = json::array();
      std::shared_lock guard(project->lock);
      const auto& s = *project->session;
      const std::size_t seen = s.updates_applied();
      for (std::size_t i = 0; i < segments.size(); ++i) {
        adapt::Translation t;
        try {
          t = s.translate_segment(segments[i].second);
        } catch (const ValidationError& e) {
          throw api_error(422, "untranslatable", "segments[" + std::to_string(i) + "]: " + e.what());
        }
        out.push_back({{"id", segments[i].first},
                       {"tgt", t.text},
                       {"hypothesis_id", t.hypothesis_id},
                       {"model_updates_seen", seen}});
      }
      return respond(200, json{{"segments", std::move(out)}});
    }

    const bool locked = options_.queue_updates ? project->lock.try_lock_queued(options_.update_queue_depth)
                                               : project->lock.try_lock_exclusive();
    if (!locked) {
      throw api_error(409, options_.queue_updates ? "update_queue_full" : "update_in_flight",
                      "another update on project '" + project_id + "' is in progress");
    }
    std::unique_lock guard(project->lock, std::adopt_lock);
    auto& s = *project->session;
    pair.timestamp = now_utc();
    adapt::UpdateReport report;
    try {
      report = s.confirm_and_update(pair);
    } catch (const NumericError& e) {
      ApiError err = api_error(500, "numeric_error", std::string("update rolled back: ") + e.what());
      err.body["rolled_back"] = true;
      throw err;
    } catch (const ValidationError& e) {
      throw api_error(422, "invalid_pair", e.what());
    }
    json out = {{"accepted", true},
                {"pre_loss", report.pre_loss},
                {"post_loss", report.post_loss},
                {"updates_applied", report.updates_applied}};
    if (s.checkpoint_due()) {
      try {
        s.checkpoint();
      } catch (const Error& e) {
        out["checkpoint_error"] = e.what();
      }
    }
    return respond(200, out);
  } catch (const ApiError& e) {
    return respond(e.status, e.body);
  } catch (const std::exception& e) {
    return respond(500, json{{"code", "internal_error"}, {"message", e.what()}});
  } catch (...) {
    return respond(500, json{{"code", "internal_error"}, {"message", "unknown failure"}});
  }
}

}  // namespace adaptmt::server
