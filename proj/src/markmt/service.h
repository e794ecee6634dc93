/* Copyright 2026 The markmt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "markmt/backends.h"
#include "markmt/evalharness.h"
#include "markmt/pipeline.h"

namespace markmt {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  BackendSpec backend;
  std::filesystem::path policy_path;
  std::filesystem::path forward_lexicon_path;
  std::filesystem::path reverse_lexicon_path;
  /// Glossary file per domain label; all of them are merged.
  std::map<std::string, std::filesystem::path> glossaries;
  std::filesystem::path tasks_path;
  std::filesystem::path key_path;
  std::filesystem::path scores_path;
  std::filesystem::path errors_path;
  std::size_t max_request_bytes = 1 << 20;
  std::chrono::seconds session_ttl{1800};
  std::size_t session_capacity = 1000;

  /// JSON object; relative paths resolve against `base_dir`. Throws
  /// SchemaError, and Error(kIo) for a configured file that does not exist
  /// (the scores and errors stores may be created).
  static ServiceConfig from_json(const std::string &json, const std::filesystem::path &base_dir);
  static ServiceConfig load(const std::filesystem::path &path);
};

using SteadyClock = std::function<std::chrono::steady_clock::time_point()>;

/// Tooltip data of one translate call.
struct Session {
  std::map<std::string, SegmentResult> segments;
};

/// Capacity-bounded LRU map with a sliding time-to-live.
class SessionStore {
 public:
  SessionStore(std::size_t capacity, std::chrono::seconds ttl, SteadyClock clock = {});

  std::string put(std::shared_ptr<const Session> session);
  /// nullptr for unknown or expired ids; a hit refreshes the entry.
  std::shared_ptr<const Session> get(const std::string &id);
  std::size_t size() const;

 private:
  struct Entry {
    std::shared_ptr<const Session> session;
    std::chrono::steady_clock::time_point last_used;
    std::list<std::string>::iterator lru;
  };

  void evict_expired(std::chrono::steady_clock::time_point now);

  std::size_t capacity_;
  std::chrono::seconds ttl_;
  SteadyClock clock_;
  mutable std::mutex mutex_;
  std::list<std::string> lru_;  // most recent first
  std::unordered_map<std::string, Entry> entries_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_;
};

/// Append-only JSONL file with a single writer thread. append() returns once
/// the line is flushed; `apply` then runs on the writer thread, so state
/// updates happen in file order.
class JsonlLog {
 public:
  explicit JsonlLog(std::filesystem::path path);
  ~JsonlLog();

  JsonlLog(const JsonlLog &) = delete;
  JsonlLog &operator=(const JsonlLog &) = delete;

  void append(std::string line, std::function<void()> apply = {});

  /// Complete lines of the file. A trailing line without newline (torn by a
  /// crash) is dropped and cut from the file.
  static std::vector<std::string> recover(const std::filesystem::path &path);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Human scores, persisted through a JsonlLog and replayed on construction.
class ScoreStore {
 public:
  explicit ScoreStore(std::filesystem::path path);

  void submit(const HumanScore &score);

  /// Deduplicated state, last write wins.
  std::vector<HumanScore> latest() const;
  bool scored(const std::string &task_id, const std::string &label,
              const std::string &annotator_id) const;
  std::size_t records() const;

 private:
  void apply(const HumanScore &score);

  mutable std::mutex mutex_;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> slot_;
  std::vector<HumanScore> latest_;
  std::size_t records_ = 0;
  std::unique_ptr<JsonlLog> log_;
};

struct ServiceOptions {
  /// Replaces the configured backend.
  std::shared_ptr<Backend> backend;
  SteadyClock clock;
};

/// HTTP API:
///   GET  /health
///   POST /api/v1/translate
///   GET  /api/v1/tooltip?session=&segment=&token=
///   GET  /api/v1/annotation/next?annotator=
///   POST /api/v1/annotation/score
///   POST /api/v1/annotation/error
///   GET  /api/v1/annotation/summary
class Service {
 public:
  explicit Service(ServiceConfig config, ServiceOptions options = {});
  ~Service();

  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the port.
  int bind();
  /// Serves on the bound socket until stop().
  void run();
  /// bind() + run() on a background thread.
  int start();
  void stop();
  int port() const { return port_; }

  const ScoreStore *scores() const { return scores_.get(); }
  SessionStore &sessions() { return sessions_; }

 private:
  struct Http;

  void install_routes();

  ServiceConfig config_;
  std::shared_ptr<Backend> backend_;
  std::unique_ptr<Pipeline> pipeline_;
  SessionStore sessions_;
  std::vector<AnnotationTask> tasks_;
  std::map<std::string, std::size_t> task_index_;
  std::map<std::string, std::vector<std::size_t>> by_annotator_;
  std::optional<AnnotationKey> key_;
  std::unique_ptr<ScoreStore> scores_;
  std::unique_ptr<JsonlLog> errors_;
  std::mutex errors_mutex_;
  std::vector<ErrorAnnotation> error_annotations_;
  std::unique_ptr<Http> http_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace markmt
