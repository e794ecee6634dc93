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
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "markmt/types.h"

namespace markmt {

struct TranslationRequest {
  std::vector<std::string> segments;
  std::string source_lang;
  std::string target_lang;
  bool want_alignment = true;
};

struct TranslationResult {
  std::vector<std::string> translations;
  /// Links over tokenize() of the source segment and its translation.
  std::optional<std::vector<AlignmentLinks>> alignments;
  std::string backend_id;
  std::int64_t latency_ms = 0;
};

/// Checks request invariants: nonempty segment list, two distinct
/// two-letter lowercase language codes. Throws Error(kInvalidArgument).
void validate_request(const TranslationRequest &request);

/// Translates directly from source to target language: one call per
/// language pair, never through an intermediate language. Implementations
/// are safe for concurrent translate_batch calls.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string id() const = 0;
  virtual bool supports(const std::string &source_lang, const std::string &target_lang) const = 0;

  /// Order- and length-preserving. Throws Error(kUnsupportedPair),
  /// BackendUnavailable or Error(kTimeout).
  virtual TranslationResult translate_batch(const TranslationRequest &request) = 0;

  /// Cheap reachability probe used by health checks.
  virtual bool healthy() const { return true; }
};

/// Language pairs such as "cs-uk"; empty means every pair.
using PairList = std::vector<std::pair<std::string, std::string>>;

PairList parse_pair_list(const std::string &spec);

/// Returns every segment unchanged with diagonal alignments.
class IdentityBackend : public Backend {
 public:
  explicit IdentityBackend(PairList pairs = {}) : pairs_(std::move(pairs)) {}

  std::string id() const override { return "identity"; }
  bool supports(const std::string &source_lang, const std::string &target_lang) const override;
  TranslationResult translate_batch(const TranslationRequest &request) override;

 private:
  PairList pairs_;
};

/// Word-by-word lookup in a case-folded table. Out-of-vocabulary tokens are
/// copied verbatim and linked to NULL; a capitalized source word gets a
/// capitalized translation.
class DictionaryBackend : public Backend {
 public:
  DictionaryBackend(std::unordered_map<std::string, std::string> entries, PairList pairs = {});

  /// TSV `source<TAB>target` per line.
  static std::unique_ptr<DictionaryBackend> load(const std::filesystem::path &path,
                                                 PairList pairs = {});

  std::string id() const override { return "dictionary"; }
  bool supports(const std::string &source_lang, const std::string &target_lang) const override;
  TranslationResult translate_batch(const TranslationRequest &request) override;

  std::pair<std::string, AlignmentLinks> translate_one(const std::string &segment) const;

 private:
  std::unordered_map<std::string, std::string> entries_;
  PairList pairs_;
};

struct RemoteConfig {
  std::string endpoint_url;
  /// Name of the environment variable holding the API key; the key itself is
  /// never part of the configuration.
  std::string api_key_env_name;
  int timeout_ms = 10000;
  int max_retries = 3;
  int backoff_base_ms = 250;
  std::size_t max_batch_chars = 8000;
  int max_in_flight = 4;
  PairList pairs;

  /// JSON object with the field names above; `pairs` is a list of "cs-uk".
  static RemoteConfig from_json(const std::string &json);
  static RemoteConfig load(const std::filesystem::path &path);
};

/// Client for the v1 wire protocol:
///   POST {endpoint} {"src_lang", "tgt_lang", "segments", "want_alignment"}
///   -> {"translations": [...], "alignments": [[[i, j], ...], ...]}
/// Requests over max_batch_chars are split at segment boundaries. Retryable
/// failures (connection errors, timeouts, 429, 5xx) are retried with a delay
/// of backoff_base_ms * 2^attempt, at most max_retries times per chunk.
class RemoteBackend : public Backend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit RemoteBackend(RemoteConfig config, Sleeper sleeper = {});
  ~RemoteBackend() override;

  std::string id() const override { return "remote"; }
  bool supports(const std::string &source_lang, const std::string &target_lang) const override;
  TranslationResult translate_batch(const TranslationRequest &request) override;
  bool healthy() const override;

  /// Chunk boundaries for `segments`: half-open index ranges.
  std::vector<std::pair<std::size_t, std::size_t>> plan_chunks(
      const std::vector<std::string> &segments) const;

  const RemoteConfig &config() const { return config_; }

 private:
  struct Endpoint;

  TranslationResult send_chunk(const TranslationRequest &request, std::size_t begin,
                               std::size_t end);

  RemoteConfig config_;
  Sleeper sleeper_;
  std::unique_ptr<Endpoint> endpoint_;
  std::counting_semaphore<1024> in_flight_;
};

struct BackendSpec {
  std::string kind = "identity";  // identity | dictionary | remote
  std::filesystem::path dictionary_path;
  std::filesystem::path remote_config_path;
  PairList pairs;
};

std::unique_ptr<Backend> make_backend(const BackendSpec &spec);

}  // namespace markmt
