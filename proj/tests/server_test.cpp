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

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <json.hpp>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "adaptmt/adaptation/config.hpp"
#include "adaptmt/common/error.hpp"
#include "adaptmt/server/api.hpp"
#include "adaptmt/server/credentials.hpp"
#include "adaptmt/server/registry.hpp"
#include "adaptmt/server/service.hpp"
#include "support/sessions.hpp"

namespace adaptmt::server {
namespace {

using json = nlohmann::json;
using testing::TempDir;
using testing::write_copy_project;

std::string hex(const std::vector<unsigned char>& bytes) {
  std::string out;
  char buf[3];
  for (unsigned char b : bytes) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

std::vector<unsigned char> bytes(std::string_view s) { return {s.begin(), s.end()}; }

TEST(Pbkdf2Test, PublishedVectors) {
  EXPECT_EQ(hex(pbkdf2_sha256("password", bytes("salt"), 1)),
            "120fb6cffcf8b32c43e7225256c4f837a86548c92ccc35480805987cb70be17b");
  EXPECT_EQ(hex(pbkdf2_sha256("password", bytes("salt"), 2)),
            "ae4d0c95af6b46d32d0adff928f06dd02a303f8ef3c251dfd6e2d85a95474c43");
  EXPECT_EQ(hex(pbkdf2_sha256("password", bytes("salt"), 4096)),
            "c5e478d59288c841aa530db6845c4c8d962893a001ce4e11a4963873aa98134a");
  EXPECT_EQ(hex(pbkdf2_sha256("passwordPASSWORDpassword", bytes("saltSALTsaltSALTsaltSALTsaltSALTsalt"), 4096, 40)),
            "348c89dbcbd32b2f32d814b8116e84cf2b17347ebc1800181c4e2a1fb8dd53e1c635518c7dac47e9");
  EXPECT_THROW(pbkdf2_sha256("x", bytes("s"), 0), ValidationError);
}

TEST(BasicAuthTest, Decodes) {
  auto r = parse_basic_auth("Basic dXNlcjpwYXNz");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, "user");
  EXPECT_EQ(r->second, "pass");
  r = parse_basic_auth(basic_auth_header("a", "b:c"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, "a");
  EXPECT_EQ(r->second, "b:c");
  EXPECT_FALSE(parse_basic_auth(""));
  EXPECT_FALSE(parse_basic_auth("Bearer dXNlcjpwYXNz"));
  EXPECT_FALSE(parse_basic_auth("Basic dXNlcjpwYXN"));
  EXPECT_FALSE(parse_basic_auth("Basic !!!!"));
  EXPECT_FALSE(parse_basic_auth("Basic bm9jb2xvbg=="));  // "nocolon"
}

TEST(BasicAuthProperty, HeaderRoundTrips) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    auto random_text = [&](bool allow_colon) {
      std::string s(rng() % 12, '\0');
      for (auto& c : s) {
        do {
          c = static_cast<char>(32 + rng() % 95);
        } while (!allow_colon && c == ':');
      }
      return s;
    };
    const std::string user = random_text(false);
    const std::string pass = random_text(true);
    const auto r = parse_basic_auth(basic_auth_header(user, pass));
    ASSERT_TRUE(r) << user << ":" << pass;
    EXPECT_EQ(r->first, user);
    EXPECT_EQ(r->second, pass);
  }
}

TEST(CredentialStoreTest, AuthenticatesAndRoundTrips) {
  CredentialStore store;
  store.set_user("alice", "s3cret", {"p1"}, 1000);
  store.set_user("root", "toor", {"*"}, 1000);
  EXPECT_NE(store.authenticate("alice", "s3cret"), nullptr);
  EXPECT_EQ(store.authenticate("alice", "s3cret!"), nullptr);
  EXPECT_EQ(store.authenticate("mallory", "s3cret"), nullptr);
  EXPECT_TRUE(store.find("alice")->may_access("p1"));
  EXPECT_FALSE(store.find("alice")->may_access("p2"));
  EXPECT_TRUE(store.find("root")->may_access("anything"));

  const std::string text = store.to_json();
  EXPECT_EQ(text.find("s3cret"), std::string::npos);
  EXPECT_EQ(text.find("toor"), std::string::npos);
  const auto back = CredentialStore::parse(text);
  EXPECT_NE(back.authenticate("alice", "s3cret"), nullptr);
  EXPECT_EQ(back.to_json(), text);

  store.set_user("alice", "other", {"p1"}, 1000);
  EXPECT_EQ(store.users().size(), 2u);
  EXPECT_EQ(store.authenticate("alice", "s3cret"), nullptr);
  EXPECT_TRUE(store.remove_user("alice"));
  EXPECT_FALSE(store.remove_user("alice"));
}

TEST(CredentialStoreTest, SaltsDiffer) {
  CredentialStore store;
  store.set_user("a", "same", {}, 10);
  store.set_user("b", "same", {}, 10);
  EXPECT_NE(store.users()[0].salt, store.users()[1].salt);
  EXPECT_NE(store.users()[0].hash, store.users()[1].hash);
}

TEST(CredentialStoreTest, RejectsBadFiles) {
  EXPECT_THROW(CredentialStore::parse("{"), ParseError);
  EXPECT_THROW(CredentialStore::parse(R"({"version":2,"users":[]})"), ParseError);
  EXPECT_THROW(CredentialStore::parse(R"({"version":1,"users":[{"username":"a"}]})"), ParseError);
  const std::string user = R"({"username":"a","salt":"00","iterations":1,"hash":"0g","projects":[]})";
  EXPECT_THROW(CredentialStore::parse(R"({"version":1,"users":[)" + user + "]}"), ParseError);
  const std::string ok = R"({"username":"a","salt":"00","iterations":1,"hash":"ab","projects":[]})";
  EXPECT_NO_THROW(CredentialStore::parse(R"({"version":1,"users":[)" + ok + "]}"));
  EXPECT_THROW(CredentialStore::parse(R"({"version":1,"users":[)" + ok + "," + ok + "]}"), ParseError);
  EXPECT_THROW(CredentialStore().set_user("a:b", "x", {}, 1), ValidationError);
}

// Waits until `lock` reports `n` pending writers.
void await_writers(const ProjectLock& lock, std::size_t n) {
  while (lock.pending_writers() < n) std::this_thread::sleep_for(std::chrono::milliseconds(1));
}

TEST(ProjectLockTest, WritersEnterInArrivalOrder) {
  ProjectLock lock;
  lock.lock();
  std::mutex mu;
  std::vector<int> order;
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&, i] {
      lock.lock();
      {
        std::lock_guard g(mu);
        order.push_back(i);
      }
      lock.unlock();
    });
    await_writers(lock, static_cast<std::size_t>(i) + 2);
  }
  lock.unlock();
  for (auto& t : threads) t.join();
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(lock.pending_writers(), 0u);
}

TEST(ProjectLockTest, QueueDepthIsBounded) {
  ProjectLock lock;
  lock.lock();
  std::vector<std::thread> waiters;
  for (int i = 0; i < 2; ++i) {
    waiters.emplace_back([&] {
      ASSERT_TRUE(lock.try_lock_queued(2));
      lock.unlock();
    });
    await_writers(lock, static_cast<std::size_t>(i) + 2);
  }
  EXPECT_FALSE(lock.try_lock_queued(2));
  EXPECT_FALSE(lock.try_lock_exclusive());
  lock.unlock();
  for (auto& t : waiters) t.join();
  EXPECT_TRUE(lock.try_lock_exclusive());
  lock.unlock();
}

TEST(ProjectLockTest, WaitingWriterBlocksNewReaders) {
  ProjectLock lock;
  lock.lock_shared();
  std::mutex mu;
  std::vector<std::string> order;
  std::thread writer([&] {
    lock.lock();
    {
      std::lock_guard g(mu);
      order.push_back("writer");
    }
    lock.unlock();
  });
  await_writers(lock, 1);
  std::thread reader([&] {
    lock.lock_shared();
    {
      std::lock_guard g(mu);
      order.push_back("reader");
    }
    lock.unlock_shared();
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  {
    std::lock_guard g(mu);
    EXPECT_TRUE(order.empty());
  }
  lock.unlock_shared();
  writer.join();
  reader.join();
  EXPECT_EQ(order, (std::vector<std::string>{"writer", "reader"}));
}

TEST(ProjectLockTest, ReadersShare) {
  ProjectLock lock;
  lock.lock_shared();
  std::atomic<bool> entered{false};
  std::thread t([&] {
    lock.lock_shared();
    entered = true;
    lock.unlock_shared();
  });
  t.join();
  EXPECT_TRUE(entered);
  lock.unlock_shared();
}

TEST(BindAddressTest, Parses) {
  auto b = parse_bind_address("0.0.0.0:9000");
  EXPECT_EQ(b.host, "0.0.0.0");
  EXPECT_EQ(b.port, 9000);
  b = parse_bind_address(":81");
  EXPECT_EQ(b.host, "127.0.0.1");
  EXPECT_EQ(b.port, 81);
  EXPECT_EQ(parse_bind_address("0").port, 0);
  EXPECT_THROW(parse_bind_address("host:"), ValidationError);
  EXPECT_THROW(parse_bind_address("host:70000"), ValidationError);
  EXPECT_THROW(parse_bind_address("host:8x"), ValidationError);
}

class ApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write_copy_project(dir_.path(), "p1", 0.1);
    write_copy_project(dir_.path(), "p2", 0.1);
    write_copy_project(dir_.path(), "boom", 1e300);
    credentials_.set_user("alice", "pw", {"*"}, 100);
    credentials_.set_user("bob", "pw", {"p2"}, 100);
  }

  ApiResponse call(const std::string& method, const std::string& path, const json& body = nullptr,
                   const std::string& user = "alice", const std::string& password = "pw") {
    ApiRequest req{method, path, user.empty() ? "" : basic_auth_header(user, password),
                   body.is_null() ? "" : body.dump()};
    ApiResponse r = handler_.handle(req);
    EXPECT_FALSE(json::parse(r.body, nullptr, false).is_discarded()) << r.body;
    return r;
  }

  json call_ok(const std::string& method, const std::string& path, const json& body = nullptr) {
    ApiResponse r = call(method, path, body);
    EXPECT_EQ(r.status, 200) << r.body;
    return json::parse(r.body);
  }

  json translate(const std::string& project, const std::vector<std::string>& sources) {
    json segs = json::array();
    for (std::size_t i = 0; i < sources.size(); ++i) segs.push_back({{"id", i}, {"src", sources[i]}});
    return call_ok("POST", "/api/v1/translate", {{"project_id", project}, {"segments", segs}});
  }

  json update(const std::string& project, const std::string& src, const std::string& post_edit) {
    return call_ok("POST", "/api/v1/update",
                   {{"project_id", project}, {"segment_id", "s1"}, {"src", src}, {"post_edit", post_edit}});
  }

  TempDir dir_;
  CredentialStore credentials_;
  ModelRegistry registry_{dir_.path()};
  ApiHandler handler_{registry_, credentials_};
};

TEST_F(ApiTest, Health) {
  const auto r = call("GET", "/api/v1/health", nullptr, "");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body), (json{{"status", "ok"}}));
}

TEST_F(ApiTest, AuthenticationAndAuthorization) {
  const json body = {{"project_id", "p1"}, {"segments", json::array()}};
  auto r = call("POST", "/api/v1/translate", body, "");
  EXPECT_EQ(r.status, 401);
  ASSERT_EQ(r.headers.size(), 1u);
  EXPECT_EQ(r.headers[0].first, "WWW-Authenticate");
  EXPECT_EQ(call("POST", "/api/v1/translate", body, "alice", "wrong").status, 401);
  EXPECT_EQ(call("POST", "/api/v1/translate", body, "nobody", "pw").status, 401);
  EXPECT_EQ(call("GET", "/api/v1/status/p1", nullptr, "").status, 401);
  r = call("POST", "/api/v1/translate", body, "bob");
  EXPECT_EQ(r.status, 403);
  EXPECT_EQ(json::parse(r.body)["code"], "forbidden");
  EXPECT_EQ(call("POST", "/api/v1/translate", {{"project_id", "p2"}, {"segments", json::array()}}, "bob").status, 200);
}

TEST_F(ApiTest, RoutingErrors) {
  auto r = call("GET", "/api/v1/translate");
  EXPECT_EQ(r.status, 405);
  EXPECT_EQ(json::parse(r.body)["code"], "method_not_allowed");
  EXPECT_EQ(call("DELETE", "/api/v1/status/p1").status, 405);
  EXPECT_EQ(call("GET", "/api/v2/health").status, 404);
  EXPECT_EQ(call("GET", "/api/v1/nothing").status, 404);
  EXPECT_EQ(call("GET", "/").status, 404);
  EXPECT_EQ(call("GET", "/api/v1/health/").status, 200);
}

TEST_F(ApiTest, UnknownProject) {
  auto r = call("POST", "/api/v1/translate", {{"project_id", "nope"}, {"segments", json::array()}});
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(json::parse(r.body)["code"], "unknown_project");
  EXPECT_EQ(call("GET", "/api/v1/status/nope").status, 404);
  EXPECT_EQ(call("GET", "/api/v1/status/..%2Fp1").status, 404);
  EXPECT_EQ(call("POST", "/api/v1/update", {{"project_id", "../p1"}, {"segment_id", "a"}, {"src", "w4"},
                                            {"post_edit", "w4"}})
                .status,
            404);
}

TEST_F(ApiTest, MalformedBodies) {
  struct Case {
    std::string path;
    std::string body;
    std::string code;
    std::string field;
  };
  const std::vector<Case> cases = {
      {"/api/v1/translate", "{not json", "malformed_json", ""},
      {"/api/v1/translate", "[1,2]", "malformed_body", ""},
      {"/api/v1/translate", "", "malformed_json", ""},
      {"/api/v1/translate", R"({"segments":[]})", "missing_field", "project_id"},
      {"/api/v1/translate", R"({"project_id":7,"segments":[]})", "invalid_field", "project_id"},
      {"/api/v1/translate", R"({"project_id":"p1"})", "missing_field", "segments"},
      {"/api/v1/translate", R"({"project_id":"p1","segments":{}})", "invalid_field", "segments"},
      {"/api/v1/translate", R"({"project_id":"p1","segments":[{"id":1}]})", "missing_field", "segments[0].src"},
      {"/api/v1/translate", R"({"project_id":"p1","segments":[{"src":"w4"}]})", "missing_field", "segments[0].id"},
      {"/api/v1/translate", R"({"project_id":"p1","segments":[{"id":1,"src":"w4"},{"id":2,"src":3}]})",
       "invalid_field", "segments[1].src"},
      {"/api/v1/translate", R"({"project_id":"p1","segments":[{"id":1,"src":"   "}]})", "untranslatable", ""},
      {"/api/v1/update", R"({"project_id":"p1","segment_id":"a","src":"w4"})", "missing_field", "post_edit"},
      {"/api/v1/update", R"({"project_id":"p1","segment_id":"a","post_edit":"w4"})", "missing_field", "src"},
      {"/api/v1/update", R"({"project_id":"p1","src":"w4","post_edit":"w4"})", "missing_field", "segment_id"},
      {"/api/v1/update", R"({"project_id":"p1","segment_id":1.5,"src":"w4","post_edit":"w4"})", "invalid_field",
       "segment_id"},
      {"/api/v1/update", R"({"project_id":"p1","segment_id":"a","src":"w4","post_edit":null})", "missing_field",
       "post_edit"},
      {"/api/v1/update", R"({"project_id":"p1","segment_id":"a","src":"w4","post_edit":" "})", "invalid_pair", ""},
  };
  for (const auto& c : cases) {
    const ApiResponse r = handler_.handle(ApiRequest{"POST", c.path, basic_auth_header("alice", "pw"), c.body});
    EXPECT_EQ(r.status, 422) << c.body;
    const json err = json::parse(r.body);
    EXPECT_EQ(err["code"], c.code) << c.body;
    EXPECT_TRUE(err["message"].is_string());
    if (!c.field.empty()) {
      EXPECT_EQ(err["field"], c.field) << c.body;
      EXPECT_NE(err["message"].get<std::string>().find(c.field), std::string::npos);
    }
  }
  EXPECT_EQ(call_ok("GET", "/api/v1/status/p1")["updates_applied"], 0);
}

TEST_F(ApiTest, EmptySegmentList) {
  EXPECT_EQ(translate("p1", {}), (json{{"segments", json::array()}}));
}

TEST_F(ApiTest, TranslatePreservesOrderAndIds) {
  json segs = json::array();
  segs.push_back({{"id", "b"}, {"src", "w7 w8"}});
  segs.push_back({{"id", 1}, {"src", "w5"}});
  const json out = call_ok("POST", "/api/v1/translate", {{"project_id", "p1"}, {"segments", segs}});
  ASSERT_EQ(out["segments"].size(), 2u);
  EXPECT_EQ(out["segments"][0]["id"], "b");
  EXPECT_EQ(out["segments"][1]["id"], 1);
  const auto direct = testing::copy_session(dir_.path(), 0.1);
  EXPECT_EQ(out["segments"][0]["tgt"], direct.translate_segment("w7 w8").text);
  EXPECT_EQ(out["segments"][1]["tgt"], direct.translate_segment("w5").text);
  EXPECT_NE(out["segments"][0]["hypothesis_id"], out["segments"][1]["hypothesis_id"]);
  EXPECT_EQ(out["segments"][0]["model_updates_seen"], 0);
}

TEST_F(ApiTest, StatusTracksUpdates) {
  json s = call_ok("GET", "/api/v1/status/p1");
  EXPECT_EQ(s["project_id"], "p1");
  EXPECT_EQ(s["model_loaded"], true);
  EXPECT_EQ(s["updates_applied"], 0);
  EXPECT_TRUE(s["last_update_time"].is_null());
  EXPECT_EQ(s["src_lang"], "xx");
  EXPECT_EQ(s["tgt_lang"], "yy");
  const json ack = update("p1", "w5 w6", "w9");
  EXPECT_EQ(ack["accepted"], true);
  EXPECT_EQ(ack["updates_applied"], 1);
  EXPECT_LE(ack["post_loss"].get<double>(), ack["pre_loss"].get<double>());
  s = call_ok("GET", "/api/v1/status/p1");
  EXPECT_EQ(s["updates_applied"], 1);
  EXPECT_TRUE(s["last_update_time"].is_string());
}

TEST_F(ApiTest, RoundTripAndIsolation) {
  const std::vector<std::string> probe = {"w5 w6 w7", "w9 w4", "w12 w13 w14 w15"};
  json before_p2 = translate("p2", probe);
  const json before = translate("p1", {"w5 w6 w7"});
  for (int i = 0; i < 50; ++i) {
    const json ack = update("p1", "w5 w6 w7", "w9 w8");
    ASSERT_EQ(ack["updates_applied"], i + 1);
  }
  const json after = translate("p1", {"w5 w6 w7"});
  EXPECT_EQ(before["segments"][0]["tgt"], "w5 w6 w7");
  EXPECT_EQ(after["segments"][0]["tgt"], "w9 w8");
  EXPECT_EQ(after["segments"][0]["model_updates_seen"], 50);
  json after_p2 = translate("p2", probe);
  for (auto* doc : {&before_p2, &after_p2}) {
    for (auto& seg : (*doc)["segments"]) seg.erase("hypothesis_id");
  }
  EXPECT_EQ(after_p2, before_p2);
}

TEST_F(ApiTest, NumericFailureRollsBack) {
  const json before = translate("boom", {"w5 w6 w7"});
  const auto r = call("POST", "/api/v1/update",
                      {{"project_id", "boom"}, {"segment_id", "x"}, {"src", "w5 w6 w7"}, {"post_edit", "w9 w8"}});
  EXPECT_EQ(r.status, 500);
  const json err = json::parse(r.body);
  EXPECT_EQ(err["code"], "numeric_error");
  EXPECT_EQ(err["rolled_back"], true);
  EXPECT_EQ(call_ok("GET", "/api/v1/status/boom")["updates_applied"], 0);
  EXPECT_EQ(translate("boom", {"w5 w6 w7"})["segments"][0]["tgt"], before["segments"][0]["tgt"]);
}

TEST_F(ApiTest, ConflictingUpdates) {
  const json body = {{"project_id", "p1"}, {"segment_id", "x"}, {"src", "w5"}, {"post_edit", "w6"}};
  auto project = registry_.find("p1");
  registry_.ensure_loaded(*project);
  project->lock.lock();
  ApiHandler strict(registry_, credentials_, ApiOptions{64, false});
  const std::string auth = basic_auth_header("alice", "pw");
  auto r = strict.handle(ApiRequest{"POST", "/api/v1/update", auth, body.dump()});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(json::parse(r.body)["code"], "update_in_flight");
  ApiHandler no_room(registry_, credentials_, ApiOptions{0, true});
  r = no_room.handle(ApiRequest{"POST", "/api/v1/update", auth, body.dump()});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(json::parse(r.body)["code"], "update_queue_full");
  project->lock.unlock();
  EXPECT_EQ(strict.handle(ApiRequest{"POST", "/api/v1/update", auth, body.dump()}).status, 200);
}

TEST_F(ApiTest, CheckpointsWhenDue) {
  write_copy_project(dir_.path(), "p3", 0.1, 2);
  update("p3", "w5", "w6");
  EXPECT_EQ(adapt::AdaptiveSession::open(adapt::load_config(dir_.path() / "p3.conf")).updates_applied(), 0u);
  update("p3", "w5", "w6");
  EXPECT_EQ(adapt::AdaptiveSession::open(adapt::load_config(dir_.path() / "p3.conf")).updates_applied(), 2u);
}

TEST_F(ApiTest, BrokenProjectsReportLoadErrors) {
  auto c = adapt::load_config(dir_.path() / "p1.conf");
  c.project_id = "other";
  adapt::save_config(c, dir_.path() / "bad.conf");
  const json s = call_ok("GET", "/api/v1/status/bad");
  EXPECT_EQ(s["model_loaded"], false);
  EXPECT_TRUE(s["load_error"].is_string());
  auto r = call("POST", "/api/v1/translate", {{"project_id", "bad"}, {"segments", json::array()}});
  EXPECT_EQ(r.status, 500);
  EXPECT_EQ(json::parse(r.body)["code"], "model_unavailable");
}

TEST_F(ApiTest, ConcurrentRequestsSeeWholeUpdates) {
  const std::string probe = "w5 w6 w7";
  const std::string src = "w5 w6 w7";
  const std::string post_edit = "w9 w8";
  constexpr int kUpdates = 12;

  // The model after k identical updates, computed serially.
  std::vector<std::string> expected;
  {
    auto session = testing::copy_session(dir_.path(), 0.1);
    for (int k = 0; k <= kUpdates; ++k) {
      expected.push_back(session.translate_segment(probe).text);
      session.confirm_and_update(adapt::TrainingPair{src, post_edit, "s", {}});
    }
  }

  std::mutex mu;
  std::vector<int> acks;
  std::vector<std::pair<int, std::string>> seen;
  std::vector<std::thread> threads;
  for (int t = 0; t < 3; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < kUpdates / 3; ++i) {
        const json ack = update("p1", src, post_edit);
        std::lock_guard g(mu);
        acks.push_back(ack["updates_applied"].get<int>());
      }
    });
  }
  for (int t = 0; t < 3; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 8; ++i) {
        const json out = translate("p1", {probe, probe});
        const int k0 = out["segments"][0]["model_updates_seen"].get<int>();
        const int k1 = out["segments"][1]["model_updates_seen"].get<int>();
        EXPECT_EQ(k0, k1);
        std::lock_guard g(mu);
        seen.emplace_back(k0, out["segments"][0]["tgt"].get<std::string>());
        seen.emplace_back(k1, out["segments"][1]["tgt"].get<std::string>());
      }
    });
  }
  for (auto& t : threads) t.join();
  std::sort(acks.begin(), acks.end());
  std::vector<int> want(kUpdates);
  std::iota(want.begin(), want.end(), 1);
  EXPECT_EQ(acks, want);
  for (const auto& [k, text] : seen) {
    ASSERT_GE(k, 0);
    ASSERT_LE(k, kUpdates);
    EXPECT_EQ(text, expected[static_cast<std::size_t>(k)]) << "after " << k << " updates";
  }
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write_copy_project(dir_.path(), "p1", 0.1);
    credentials_.set_user("alice", "pw", {"*"}, 100);
  }

  httplib::Result post(httplib::Client& client, const std::string& path, const json& body) {
    return client.Post(path, httplib::Headers{{"Authorization", basic_auth_header("alice", "pw")}}, body.dump(),
                       "application/json");
  }

  TempDir dir_;
  CredentialStore credentials_;
};

TEST_F(ServiceTest, ServesOverHttpAndFlushesOnStop) {
  std::string before_stop;
  int port = 0;
  {
    ModelRegistry registry(dir_.path());
    ApiHandler handler(registry, credentials_);
    Service service(handler, registry, ServiceOptions{BindAddress{"127.0.0.1", 0}});
    service.start();
    port = service.port();
    ASSERT_GT(port, 0);
    EXPECT_TRUE(service.running());
    httplib::Client client("127.0.0.1", port);

    auto res = client.Get("/api/v1/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body), (json{{"status", "ok"}}));
    EXPECT_NE(res->get_header_value("Content-Type").find("application/json"), std::string::npos);

    res = client.Get("/api/v1/status/p1");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 401);
    EXPECT_FALSE(res->get_header_value("WWW-Authenticate").empty());

    res = client.Put("/api/v1/update", "{}", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 405);

    const json tr = {{"project_id", "p1"}, {"segments", {{{"id", 1}, {"src", "w5 w6"}}}}};
    res = post(client, "/api/v1/translate", tr);
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body)["segments"][0]["model_updates_seen"], 0);
    for (int i = 0; i < 3; ++i) {
      res = post(client, "/api/v1/update", {{"project_id", "p1"}, {"segment_id", "a"}, {"src", "w5 w6"},
                                            {"post_edit", "w7"}});
      ASSERT_TRUE(res);
      EXPECT_EQ(json::parse(res->body)["updates_applied"], i + 1);
    }
    res = post(client, "/api/v1/translate", tr);
    ASSERT_TRUE(res);
    const json out = json::parse(res->body);
    EXPECT_EQ(out["segments"][0]["model_updates_seen"], 3);
    before_stop = out["segments"][0]["tgt"];

    EXPECT_TRUE(service.stop().empty());
    EXPECT_FALSE(service.running());
    EXPECT_TRUE(service.stop().empty());
  }
  ModelRegistry registry(dir_.path());
  ApiHandler handler(registry, credentials_);
  Service service(handler, registry, ServiceOptions{BindAddress{"127.0.0.1", 0}});
  service.start();
  httplib::Client client("127.0.0.1", service.port());
  auto res = client.Get("/api/v1/status/p1", httplib::Headers{{"Authorization", basic_auth_header("alice", "pw")}});
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["updates_applied"], 3);
  res = post(client, "/api/v1/translate", {{"project_id", "p1"}, {"segments", {{{"id", 1}, {"src", "w5 w6"}}}}});
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["segments"][0]["tgt"], before_stop);
}

TEST_F(ServiceTest, BindFailureIsAnError) {
  ModelRegistry registry(dir_.path());
  ApiHandler handler(registry, credentials_);
  Service first(handler, registry, ServiceOptions{BindAddress{"127.0.0.1", 0}});
  first.start();
  Service second(handler, registry, ServiceOptions{BindAddress{"127.0.0.1", first.port()}});
  EXPECT_THROW(second.start(), Error);
  EXPECT_THROW(first.start(), Error);
}

TEST_F(ServiceTest, OversizedBodiesGetJsonErrors) {
  ModelRegistry registry(dir_.path());
  ApiHandler handler(registry, credentials_);
  ServiceOptions options{BindAddress{"127.0.0.1", 0}};
  options.max_body_bytes = 64;
  Service service(handler, registry, options);
  service.start();
  httplib::Client client("127.0.0.1", service.port());
  auto res = post(client, "/api/v1/translate", {{"project_id", std::string(200, 'x')}, {"segments", json::array()}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 413);
  EXPECT_FALSE(json::parse(res->body, nullptr, false).is_discarded()) << res->body;
}

}  // namespace
}  // namespace adaptmt::server
