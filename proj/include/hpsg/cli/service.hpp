//  Copyright 2026 The hpsgkit Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace hpsg {

struct ServiceConfig {
  int port = 8080;  // 0 picks a free port
  std::string host = "127.0.0.1";
  std::optional<std::filesystem::path> grammar_dir;
  std::filesystem::path profile_dir;
  bool read_only = false;
};

/// JSON over HTTP on one profile:
///   GET  /items                      items with status and decision state
///   GET  /items/{id}                 one item and its readings' derivations
///   GET  /items/{id}/readings/{k}    derivation, MRS and DMRS of one reading
///   POST /items/{id}/decision        {"verdict": "gold", "reading": 0} or {"verdict": "reject-all"}
///   GET  /compare?against=<profile>  this profile as gold against another
/// A writable service holds the profile lock for its lifetime.
class ProfileService {
 public:
  /// Loads the profile and takes the lock unless read-only. Throws
  /// ProfileError, LockTimeout or GrammarLoadFailure.
  explicit ProfileService(ServiceConfig config);
  ~ProfileService();

  /// Binds the socket; returns the port. Throws std::runtime_error when the
  /// port cannot be bound.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  /// Blocks until run() accepts connections.
  void wait_until_ready();
  void stop();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Entry point of the grammarctl tool.
int grammarctl_main(int argc, char** argv);

}  // namespace hpsg
