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

#include "adaptmt/server/credentials.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "adaptmt/common/error.hpp"

namespace adaptmt::server {
namespace {

using json = nlohmann::json;

std::string to_hex(const std::vector<unsigned char>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::vector<unsigned char> from_hex(const std::string& hex, const char* field) {
  if (hex.size() % 2 != 0) throw ParseError(std::string("credentials: odd-length hex in ") + field);
  std::vector<unsigned char> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ParseError(std::string("credentials: bad hex in ") + field);
    out[i] = static_cast<unsigned char>(hi * 16 + lo);
  }
  return out;
}

}  // namespace

std::vector<unsigned char> pbkdf2_sha256(std::string_view password, const std::vector<unsigned char>& salt,
                                         std::uint32_t iterations, std::size_t length) {
  if (iterations == 0) throw ValidationError("pbkdf2 needs at least one iteration");
  std::vector<unsigned char> out(length);
  const int ok = PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                                   static_cast<int>(salt.size()), static_cast<int>(iterations), EVP_sha256(),
                                   static_cast<int>(length), out.data());
  if (ok != 1) throw Error("PKCS5_PBKDF2_HMAC failed");
  return out;
}

std::optional<std::pair<std::string, std::string>> parse_basic_auth(std::string_view header) {
  constexpr std::string_view kScheme = "Basic ";
  if (header.size() <= kScheme.size()) return std::nullopt;
  for (std::size_t i = 0; i < kScheme.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(header[i])) != std::tolower(static_cast<unsigned char>(kScheme[i]))) {
      return std::nullopt;
    }
  }
  std::string_view encoded = header.substr(kScheme.size());
  while (!encoded.empty() && encoded.front() == ' ') encoded.remove_prefix(1);
  while (!encoded.empty() && encoded.back() == ' ') encoded.remove_suffix(1);
  if (encoded.empty() || encoded.size() % 4 != 0) return std::nullopt;
  for (char c : encoded) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '/' && c != '=') return std::nullopt;
  }
  std::string decoded(encoded.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(decoded.data()),
                                reinterpret_cast<const unsigned char*>(encoded.data()), static_cast<int>(encoded.size()));
  if (n < 0) return std::nullopt;
  std::size_t len = static_cast<std::size_t>(n);
  // EVP_DecodeBlock counts the bytes that padding stands for.
  if (encoded.back() == '=') --len;
  if (encoded.size() >= 2 && encoded[encoded.size() - 2] == '=') --len;
  decoded.resize(len);
  const auto colon = decoded.find(':');
  if (colon == std::string::npos) return std::nullopt;
  return std::make_pair(decoded.substr(0, colon), decoded.substr(colon + 1));
}

std::string basic_auth_header(std::string_view user, std::string_view password) {
  std::string plain;
  plain.append(user).push_back(':');
  plain.append(password);
  std::string out(4 * ((plain.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(plain.data()), static_cast<int>(plain.size()));
  out.resize(static_cast<std::size_t>(n));
  return "Basic " + out;
}

bool UserRecord::may_access(std::string_view project_id) const {
  return std::any_of(projects.begin(), projects.end(),
                     [&](const std::string& p) { return p == "*" || p == project_id; });
}

CredentialStore CredentialStore::parse(std::string_view json_text) {
  CredentialStore store;
  try {
    const json doc = json::parse(json_text);
    if (doc.value("version", 0) != 1) throw ParseError("credentials: unsupported version");
    for (const auto& u : doc.at("users")) {
      UserRecord r;
      r.username = u.at("username").get<std::string>();
      r.salt = from_hex(u.at("salt").get<std::string>(), "salt");
      r.iterations = u.at("iterations").get<std::uint32_t>();
      r.hash = from_hex(u.at("hash").get<std::string>(), "hash");
      r.projects = u.at("projects").get<std::vector<std::string>>();
      if (r.username.empty() || r.username.find(':') != std::string::npos) {
        throw ParseError("credentials: invalid username '" + r.username + "'");
      }
      if (r.iterations == 0 || r.hash.empty()) throw ParseError("credentials: user '" + r.username + "' is incomplete");
      if (store.find(r.username) != nullptr) throw ParseError("credentials: duplicate user '" + r.username + "'");
      store.users_.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("credentials: ") + e.what());
  }
  return store;
}

CredentialStore CredentialStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read credentials file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string CredentialStore::to_json() const {
  json users = json::array();
  for (const auto& r : users_) {
    users.push_back({{"username", r.username},
                     {"salt", to_hex(r.salt)},
                     {"iterations", r.iterations},
                     {"hash", to_hex(r.hash)},
                     {"projects", r.projects}});
  }
  return json{{"version", 1}, {"users", std::move(users)}}.dump(2) + "\n";
}

void CredentialStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write credentials file " + path.string());
  out << to_json();
  if (!out) throw Error("cannot write credentials file " + path.string());
}

void CredentialStore::set_user(std::string username, std::string_view password, std::vector<std::string> projects,
                               std::uint32_t iterations) {
  if (username.empty() || username.find(':') != std::string::npos) {
    throw ValidationError("username must be non-empty and free of ':'");
  }
  UserRecord r;
  r.username = std::move(username);
  r.salt.resize(16);
  if (RAND_bytes(r.salt.data(), static_cast<int>(r.salt.size())) != 1) throw Error("RAND_bytes failed");
  r.iterations = iterations;
  r.hash = pbkdf2_sha256(password, r.salt, iterations);
  r.projects = std::move(projects);
  remove_user(r.username);
  users_.push_back(std::move(r));
}

bool CredentialStore::remove_user(std::string_view username) {
  const auto it = std::find_if(users_.begin(), users_.end(), [&](const UserRecord& r) { return r.username == username; });
  if (it == users_.end()) return false;
  users_.erase(it);
  return true;
}

const UserRecord* CredentialStore::find(std::string_view username) const {
  for (const auto& r : users_) {
    if (r.username == username) return &r;
  }
  return nullptr;
}

const UserRecord* CredentialStore::authenticate(std::string_view username, std::string_view password) const {
  const UserRecord* r = find(username);
  if (r == nullptr) {
    // Same amount of work as a real check so unknown names are not cheaper.
    static const std::vector<unsigned char> kDummySalt(16, 0);
    pbkdf2_sha256(password, kDummySalt, users_.empty() ? 1 : users_.front().iterations);
    return nullptr;
  }
  const auto got = pbkdf2_sha256(password, r->salt, r->iterations, r->hash.size());
  return CRYPTO_memcmp(got.data(), r->hash.data(), got.size()) == 0 ? r : nullptr;
}

}  // namespace adaptmt::server
