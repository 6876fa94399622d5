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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace adaptmt::server {

inline constexpr std::uint32_t kDefaultPbkdf2Iterations = 100000;

// PBKDF2-HMAC-SHA256.
std::vector<unsigned char> pbkdf2_sha256(std::string_view password, const std::vector<unsigned char>& salt,
                                         std::uint32_t iterations, std::size_t length = 32);

// Decodes an "Authorization: Basic ..." header value into (user, password).
std::optional<std::pair<std::string, std::string>> parse_basic_auth(std::string_view header);
std::string basic_auth_header(std::string_view user, std::string_view password);

struct UserRecord {
  std::string username;
  std::vector<unsigned char> salt;
  std::uint32_t iterations = kDefaultPbkdf2Iterations;
  std::vector<unsigned char> hash;
  // Project ids this user may access; "*" grants every project.
  std::vector<std::string> projects;

  bool may_access(std::string_view project_id) const;
};

/// Salted password hashes with per-user project lists. Plaintext passwords
/// are never stored.
///
/// File format (JSON):
///   {"version": 1, "users": [{"username": "...", "salt": "<hex>",
///     "iterations": N, "hash": "<hex>", "projects": ["p1", "*"]}]}
class CredentialStore {
 public:
  static CredentialStore parse(std::string_view json_text);
  static CredentialStore load(const std::filesystem::path& path);

  std::string to_json() const;
  void save(const std::filesystem::path& path) const;

  // Adds or replaces a user with a fresh random salt.
  void set_user(std::string username, std::string_view password, std::vector<std::string> projects,
                std::uint32_t iterations = kDefaultPbkdf2Iterations);
  bool remove_user(std::string_view username);

  // nullptr when the user is unknown or the password is wrong.
  const UserRecord* authenticate(std::string_view username, std::string_view password) const;
  const UserRecord* find(std::string_view username) const;

  const std::vector<UserRecord>& users() const noexcept { return users_; }

 private:
  std::vector<UserRecord> users_;
};

}  // namespace adaptmt::server
