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

#include <filesystem>
#include <iostream>
#include <string>
#include <termios.h>
#include <unistd.h>
#include <vector>

#include "adaptmt/server/credentials.hpp"

namespace {

std::string read_password() {
  const bool tty = ::isatty(STDIN_FILENO) != 0;
  termios saved{};
  if (tty) {
    std::cerr << "password: " << std::flush;
    ::tcgetattr(STDIN_FILENO, &saved);
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    ::tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
  }
  std::string password;
  std::getline(std::cin, password);
  if (tty) {
    ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    std::cerr << '\n';
  }
  if (!password.empty() && password.back() == '\r') password.pop_back();
  return password;
}

}  // namespace

// Adds, replaces or removes a user in a credentials file. The password is
// read from stdin.
int main(int argc, char** argv) {
  CLI::App app{"Manages server credentials."};
  std::string file;
  std::string user;
  std::vector<std::string> projects;
  std::uint32_t iterations = adaptmt::server::kDefaultPbkdf2Iterations;
  bool remove = false;
  app.add_option("file", file, "credentials JSON file, created when missing")->required();
  app.add_option("username", user)->required();
  app.add_option("--project", projects, "project the user may access; '*' for all")->take_all();
  app.add_option("--iterations", iterations, "PBKDF2 iterations")->check(CLI::PositiveNumber);
  app.add_flag("--delete", remove, "remove the user");
  CLI11_PARSE(app, argc, argv);

  try {
    using adaptmt::server::CredentialStore;
    CredentialStore store = std::filesystem::exists(file) ? CredentialStore::load(file) : CredentialStore();
    if (remove) {
      if (!store.remove_user(user)) {
        std::cerr << "error: no such user: " << user << '\n';
        return 1;
      }
    } else {
      if (projects.empty()) {
        std::cerr << "error: give at least one --project\n";
        return 2;
      }
      const std::string password = read_password();
      if (password.empty()) {
        std::cerr << "error: empty password\n";
        return 1;
      }
      store.set_user(user, password, projects, iterations);
    }
    store.save(file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
