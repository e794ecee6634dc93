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

#include "markmt/service.h"

#include <unistd.h>

#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <deque>
#include <future>
#include <random>

#include "httplib.h"
#include "json.hpp"
#include "markmt/error.h"
#include "markmt/io.h"
#include "markmt/tagproject.h"

namespace markmt {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(const std::filesystem::path &p, const char *what) {
  if (!p.empty() && !std::filesystem::exists(p)) {
    throw Error(ErrorCode::kIo, std::string(what) + " not found: " + p.string());
  }
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void send_json(httplib::Response &res, int status, const std::string &body) {
  res.status = status;
  res.set_content(body, "application/json");
}

void send_error(httplib::Response &res, int status, const std::string &code,
                const std::string &message) {
  ojson j = {{"error", code}, {"message", message}};
  send_json(res, status, j.dump());
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedPair:
      return 422;
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kTimeout:
    case ErrorCode::kAuth:
    case ErrorCode::kProtocol:
      return 502;
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

// Runs a handler, turning exceptions into JSON error responses.
template <typename Fn>
void guarded(httplib::Response &res, Fn &&fn) {
  try {
    fn();
  } catch (const MalformedMarkup &e) {
    ojson j = {{"error", "malformed_markup"}, {"message", e.detail()},
               {"line", e.line()},           {"column", e.column()}};
    send_json(res, 400, j.dump());
  } catch (const SchemaError &e) {
    ojson j = {{"error", "schema"}, {"message", e.what()}, {"field", e.field()}};
    send_json(res, 400, j.dump());
  } catch (const Error &e) {
    send_error(res, status_for(e.code()), error_code_name(e.code()), e.what());
  } catch (const std::exception &e) {
    send_error(res, 500, "internal", e.what());
  }
}

json parse_body(const httplib::Request &req) {
  json j;
  try {
    j = json::parse(req.body);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed JSON body: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "body must be a JSON object");
  return j;
}

std::string body_string(const json &j, const char *field, bool required = true) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    if (required) throw Error(ErrorCode::kInvalidArgument, std::string("missing field ") + field);
    return {};
  }
  if (!it->is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " must be a string");
  }
  return it->get<std::string>();
}

bool body_bool(const json &j, const char *field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return false;
  if (!it->is_boolean()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " must be a boolean");
  }
  return it->get<bool>();
}

}  // namespace

// ---------------------------------------------------------------------------

ServiceConfig ServiceConfig::from_json(const std::string &text,
                                       const std::filesystem::path &base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw SchemaError(0, "config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError(0, "config", "expected a JSON object");
  ServiceConfig c;
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    if (j.contains("backend")) {
      const auto &b = j.at("backend");
      if (b.is_string()) {
        c.backend.kind = b.get<std::string>();
      } else {
        c.backend.kind = b.value("kind", c.backend.kind);
        c.backend.dictionary_path = resolve(base_dir, b.value("dictionary", std::string()));
        c.backend.remote_config_path = resolve(base_dir, b.value("remote_config", std::string()));
        if (b.contains("pairs")) {
          for (const auto &p : b.at("pairs")) {
            auto parsed = parse_pair_list(p.get<std::string>());
            c.backend.pairs.insert(c.backend.pairs.end(), parsed.begin(), parsed.end());
          }
        }
      }
    }
    c.policy_path = resolve(base_dir, j.value("policy", std::string()));
    c.forward_lexicon_path = resolve(base_dir, j.value("forward_lexicon", std::string()));
    c.reverse_lexicon_path = resolve(base_dir, j.value("reverse_lexicon", std::string()));
    if (j.contains("glossaries")) {
      for (const auto &[domain, path] : j.at("glossaries").items()) {
        c.glossaries[domain] = resolve(base_dir, path.get<std::string>());
      }
    }
    c.tasks_path = resolve(base_dir, j.value("tasks", std::string()));
    c.key_path = resolve(base_dir, j.value("key", std::string()));
    c.scores_path = resolve(base_dir, j.value("scores", std::string()));
    c.errors_path = resolve(base_dir, j.value("errors", std::string()));
    c.max_request_bytes = j.value("max_request_bytes", c.max_request_bytes);
    c.session_ttl = std::chrono::seconds(j.value("session_ttl_s", 1800));
    c.session_capacity = j.value("session_capacity", c.session_capacity);
  } catch (const json::exception &e) {
    throw SchemaError(0, "config", e.what());
  }
  if (c.port < 0 || c.port > 65535) throw SchemaError(0, "port", "out of range");
  if (c.max_request_bytes == 0 || c.session_capacity == 0) {
    throw SchemaError(0, "config", "limits must be positive");
  }
  require_file(c.backend.dictionary_path, "dictionary");
  require_file(c.backend.remote_config_path, "remote config");
  require_file(c.policy_path, "policy");
  require_file(c.forward_lexicon_path, "lexicon");
  require_file(c.reverse_lexicon_path, "lexicon");
  for (const auto &[domain, path] : c.glossaries) require_file(path, "glossary");
  require_file(c.tasks_path, "annotation tasks");
  require_file(c.key_path, "annotation key");
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path &path) {
  return from_json(read_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------

SessionStore::SessionStore(std::size_t capacity, std::chrono::seconds ttl, SteadyClock clock)
    : capacity_(capacity), ttl_(ttl), clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
  salt_ = std::random_device{}();
  salt_ = (salt_ << 32) ^ std::random_device{}();
}

void SessionStore::evict_expired(std::chrono::steady_clock::time_point now) {
  while (!lru_.empty()) {
    auto it = entries_.find(lru_.back());
    if (now - it->second.last_used < ttl_) break;
    entries_.erase(it);
    lru_.pop_back();
  }
}

std::string SessionStore::put(std::shared_ptr<const Session> session) {
  std::lock_guard lock(mutex_);
  auto now = clock_();
  evict_expired(now);
  while (entries_.size() >= capacity_) {
    entries_.erase(lru_.back());
    lru_.pop_back();
  }
  std::mt19937_64 mix(salt_ ^ ++counter_);
  char id[40];
  std::snprintf(id, sizeof id, "s%016llx%08llx", static_cast<unsigned long long>(mix()),
                static_cast<unsigned long long>(counter_ & 0xffffffffULL));
  lru_.push_front(id);
  entries_[id] = Entry{std::move(session), now, lru_.begin()};
  return id;
}

std::shared_ptr<const Session> SessionStore::get(const std::string &id) {
  std::lock_guard lock(mutex_);
  auto now = clock_();
  evict_expired(now);
  auto it = entries_.find(id);
  if (it == entries_.end()) return nullptr;
  it->second.last_used = now;
  lru_.splice(lru_.begin(), lru_, it->second.lru);
  return it->second.session;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------------------

struct JsonlLog::Impl {
  struct Pending {
    std::string line;
    std::function<void()> apply;
    std::promise<void> done;
  };

  std::FILE *file = nullptr;
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<Pending> queue;
  bool stopping = false;
  std::thread writer;

  void loop() {
    for (;;) {
      std::deque<Pending> batch;
      {
        std::unique_lock lock(mutex);
        cv.wait(lock, [&] { return stopping || !queue.empty(); });
        if (queue.empty() && stopping) return;
        batch.swap(queue);
      }
      bool ok = true;
      for (auto &p : batch) {
        ok = ok && std::fwrite(p.line.data(), 1, p.line.size(), file) == p.line.size() &&
             std::fputc('\n', file) != EOF;
      }
      ok = ok && std::fflush(file) == 0 && ::fsync(fileno(file)) == 0;
      for (auto &p : batch) {
        if (!ok) {
          p.done.set_exception(
              std::make_exception_ptr(Error(ErrorCode::kIo, "cannot append to store")));
          continue;
        }
        try {
          if (p.apply) p.apply();
          p.done.set_value();
        } catch (...) {
          p.done.set_exception(std::current_exception());
        }
      }
    }
  }
};

JsonlLog::JsonlLog(std::filesystem::path path) : impl_(std::make_unique<Impl>()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  impl_->file = std::fopen(path.c_str(), "ab");
  if (impl_->file == nullptr) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  impl_->writer = std::thread([impl = impl_.get()] { impl->loop(); });
}

JsonlLog::~JsonlLog() {
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopping = true;
  }
  impl_->cv.notify_all();
  impl_->writer.join();
  std::fclose(impl_->file);
}

void JsonlLog::append(std::string line, std::function<void()> apply) {
  if (line.find('\n') != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "JSONL records cannot contain newlines");
  }
  std::future<void> done;
  {
    std::lock_guard lock(impl_->mutex);
    if (impl_->stopping) throw Error(ErrorCode::kIo, "store is closing");
    impl_->queue.push_back({std::move(line), std::move(apply), {}});
    done = impl_->queue.back().done.get_future();
  }
  impl_->cv.notify_one();
  done.get();
}

std::vector<std::string> JsonlLog::recover(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path)) return {};
  std::string content = read_file(path);
  if (!content.empty() && content.back() != '\n') {
    auto keep = content.rfind('\n');
    keep = keep == std::string::npos ? 0 : keep + 1;
    content.resize(keep);
    std::filesystem::resize_file(path, keep);
  }
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    lines.push_back(content.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

// ---------------------------------------------------------------------------

ScoreStore::ScoreStore(std::filesystem::path path) {
  int line_no = 0;
  for (const auto &line : JsonlLog::recover(path)) {
    ++line_no;
    if (line.empty()) continue;
    apply(parse_score(line, line_no));
  }
  log_ = std::make_unique<JsonlLog>(std::move(path));
}

void ScoreStore::apply(const HumanScore &score) {
  std::lock_guard lock(mutex_);
  ++records_;
  auto [it, inserted] = slot_.emplace(
      std::make_tuple(score.task_id, score.blind_label, score.annotator_id), latest_.size());
  if (inserted) {
    latest_.push_back(score);
  } else {
    latest_[it->second] = score;
  }
}

void ScoreStore::submit(const HumanScore &score) {
  log_->append(score_to_json(score), [this, score] { apply(score); });
}

std::vector<HumanScore> ScoreStore::latest() const {
  std::lock_guard lock(mutex_);
  return latest_;
}

bool ScoreStore::scored(const std::string &task_id, const std::string &label,
                        const std::string &annotator_id) const {
  std::lock_guard lock(mutex_);
  return slot_.count(std::make_tuple(task_id, label, annotator_id)) > 0;
}

std::size_t ScoreStore::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

// ---------------------------------------------------------------------------

struct Service::Http {
  httplib::Server server;
};

Service::Service(ServiceConfig config, ServiceOptions options)
    : config_(std::move(config)),
      sessions_(config_.session_capacity, config_.session_ttl, std::move(options.clock)),
      http_(std::make_unique<Http>()) {
  backend_ = options.backend ? options.backend : std::shared_ptr<Backend>(make_backend(config_.backend));

  PipelineConfig pc;
  if (!config_.policy_path.empty()) pc.policy = ExtractionPolicy::load(config_.policy_path);
  if (!config_.forward_lexicon_path.empty()) {
    pc.forward_lexicon =
        std::make_shared<LexiconTable>(LexiconTable::load(config_.forward_lexicon_path));
  }
  if (!config_.reverse_lexicon_path.empty()) {
    pc.reverse_lexicon =
        std::make_shared<LexiconTable>(LexiconTable::load(config_.reverse_lexicon_path));
  }
  for (const auto &[domain, path] : config_.glossaries) pc.glossary.merge(Glossary::load(path));
  pipeline_ = std::make_unique<Pipeline>(backend_, std::move(pc));

  if (!config_.tasks_path.empty()) {
    tasks_ = load_tasks(config_.tasks_path);
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
      task_index_[tasks_[i].task_id] = i;
      by_annotator_[tasks_[i].annotator_id].push_back(i);
    }
  }
  if (!config_.key_path.empty()) key_ = load_key(config_.key_path);
  if (!config_.scores_path.empty()) scores_ = std::make_unique<ScoreStore>(config_.scores_path);
  if (!config_.errors_path.empty()) {
    int line_no = 0;
    for (const auto &line : JsonlLog::recover(config_.errors_path)) {
      ++line_no;
      if (!line.empty()) error_annotations_.push_back(parse_error_annotation(line, line_no));
    }
    errors_ = std::make_unique<JsonlLog>(config_.errors_path);
  }
  install_routes();
}

Service::~Service() { stop(); }

void Service::install_routes() {
  auto &srv = http_->server;
  srv.set_payload_max_length(config_.max_request_bytes);
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(".*", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });

  srv.Get("/health", [this](const httplib::Request &, httplib::Response &res) {
    ojson j = {{"status", backend_->healthy() ? "ok" : "degraded"}, {"backend", backend_->id()}};
    send_json(res, 200, j.dump());
  });

  srv.Post("/api/v1/translate", [this](const httplib::Request &req, httplib::Response &res) {
    guarded(res, [&] {
      if (req.body.size() > config_.max_request_bytes) {
        send_error(res, 413, "payload_too_large", "request body exceeds the limit");
        return;
      }
      auto body = parse_body(req);
      DocumentRequest request;
      request.format = parse_document_format(body_string(body, "format"));
      request.content = body_string(body, "content");
      request.source_lang = body_string(body, "source_lang");
      request.target_lang = body_string(body, "target_lang");
      request.domain = body_string(body, "domain", false);
      request.check_glossary = body_bool(body, "glossary");
      bool keep = body_bool(body, "keep_session");
      auto result = pipeline_->translate(request);
      std::string session_id;
      if (keep) {
        auto session = std::make_shared<Session>();
        for (const auto &s : result.segments) session->segments.emplace(s.segment_id, s);
        session_id = sessions_.put(std::move(session));
      }
      send_json(res, 200, result.to_json(session_id));
    });
  });

  srv.Get("/api/v1/tooltip", [this](const httplib::Request &req, httplib::Response &res) {
    guarded(res, [&] {
      for (const char *p : {"session", "segment", "token"}) {
        if (!req.has_param(p)) {
          send_error(res, 400, "invalid_argument", std::string("missing parameter ") + p);
          return;
        }
      }
      auto session = sessions_.get(req.get_param_value("session"));
      if (!session) {
        send_error(res, 404, "unknown_session", "session not found or expired");
        return;
      }
      auto seg = session->segments.find(req.get_param_value("segment"));
      if (seg == session->segments.end()) {
        send_error(res, 404, "unknown_segment", "segment not found in session");
        return;
      }
      const std::string token = req.get_param_value("token");
      int index = -1;
      bool numeric = !token.empty() && token.size() < 10 &&
                     token.find_first_not_of("0123456789") == std::string::npos;
      if (numeric) index = std::stoi(token);
      const auto &s = seg->second;
      auto translations =
          word_translation(index, s.source_tokens.size(), s.links, s.target_tokens);
      ojson j = {{"source_token", s.source_tokens[static_cast<std::size_t>(index)].text},
                 {"translations", translations}};
      send_json(res, 200, j.dump());
    });
  });

  srv.Get("/api/v1/annotation/next", [this](const httplib::Request &req, httplib::Response &res) {
    guarded(res, [&] {
      if (!req.has_param("annotator")) {
        send_error(res, 400, "invalid_argument", "missing parameter annotator");
        return;
      }
      auto it = by_annotator_.find(req.get_param_value("annotator"));
      if (it == by_annotator_.end()) {
        send_error(res, 404, "unknown_annotator", "annotator has no tasks");
        return;
      }
      std::size_t done = 0;
      const AnnotationTask *next = nullptr;
      for (auto index : it->second) {
        const auto &task = tasks_[index];
        bool complete = scores_ != nullptr;
        for (const auto &c : task.candidates) {
          complete = complete && scores_->scored(task.task_id, c.blind_label, task.annotator_id);
        }
        if (complete) {
          ++done;
        } else if (next == nullptr) {
          next = &task;
        }
      }
      if (next == nullptr) {
        res.status = 204;
        return;
      }
      auto j = ojson::parse(task_to_json(*next));
      j["progress"] = {{"done", done}, {"total", it->second.size()}};
      send_json(res, 200, j.dump());
    });
  });

  srv.Post("/api/v1/annotation/score", [this](const httplib::Request &req, httplib::Response &res) {
    guarded(res, [&] {
      if (!scores_) {
        send_error(res, 503, "not_configured", "no score store configured");
        return;
      }
      auto score = parse_score(req.body);
      if (!by_annotator_.count(score.annotator_id)) {
        send_error(res, 404, "unknown_annotator", "annotator has no tasks");
        return;
      }
      auto t = task_index_.find(score.task_id);
      if (t == task_index_.end()) {
        send_error(res, 404, "unknown_task", "task not found");
        return;
      }
      const auto &task = tasks_[t->second];
      if (task.annotator_id != score.annotator_id) {
        send_error(res, 400, "invalid_argument", "task is assigned to another annotator");
        return;
      }
      bool label_ok = false;
      for (const auto &c : task.candidates) label_ok = label_ok || c.blind_label == score.blind_label;
      if (!label_ok) {
        send_error(res, 400, "unknown_label", "task has no label " + score.blind_label);
        return;
      }
      if (score.timestamp.empty()) score.timestamp = utc_now();
      scores_->submit(score);
      send_json(res, 200, R"({"status":"ok"})");
    });
  });

  srv.Post("/api/v1/annotation/error", [this](const httplib::Request &req, httplib::Response &res) {
    guarded(res, [&] {
      if (!errors_) {
        send_error(res, 503, "not_configured", "no error annotation store configured");
        return;
      }
      auto annotation = parse_error_annotation(req.body);
      if (!task_index_.count(annotation.task_id)) {
        send_error(res, 404, "unknown_task", "task not found");
        return;
      }
      errors_->append(error_annotation_to_json(annotation), [this, annotation] {
        std::lock_guard lock(errors_mutex_);
        error_annotations_.push_back(annotation);
      });
      send_json(res, 200, R"({"status":"ok"})");
    });
  });

  srv.Get("/api/v1/annotation/summary", [this](const httplib::Request &, httplib::Response &res) {
    guarded(res, [&] {
      if (!key_) {
        send_error(res, 503, "not_configured", "the annotation key is not loaded");
        return;
      }
      std::vector<HumanScore> scores;
      if (scores_) scores = scores_->latest();
      auto report = ojson::parse(aggregate_annotations(scores, *key_).to_json());
      {
        std::lock_guard lock(errors_mutex_);
        report["errors"] = ojson::parse(error_summary(error_annotations_).to_json());
      }
      send_json(res, 200, report.dump());
    });
  });
}

int Service::bind() {
  auto &srv = http_->server;
  if (config_.port == 0) {
    port_ = srv.bind_to_any_port(config_.host);
  } else if (srv.bind_to_port(config_.host, config_.port)) {
    port_ = config_.port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) {
    throw Error(ErrorCode::kIo, "cannot listen on " + config_.host + ":" +
                                    std::to_string(config_.port));
  }
  return port_;
}

void Service::run() { http_->server.listen_after_bind(); }

int Service::start() {
  int port = bind();
  thread_ = std::thread([this] { run(); });
  http_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  if (http_) http_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace markmt
