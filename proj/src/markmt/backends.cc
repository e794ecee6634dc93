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

#include "markmt/backends.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "markmt/error.h"
#include "markmt/segmenter.h"
#include "markmt/text.h"

namespace markmt {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

bool pair_allowed(const PairList &pairs, const std::string &src, const std::string &tgt) {
  if (pairs.empty()) return true;
  for (const auto &[s, t] : pairs) {
    if (s == src && t == tgt) return true;
  }
  return false;
}

void require_pair(const Backend &backend, const TranslationRequest &request) {
  validate_request(request);
  if (!backend.supports(request.source_lang, request.target_lang)) {
    throw Error(ErrorCode::kUnsupportedPair, backend.id() + " backend does not translate " +
                                                 request.source_lang + "->" + request.target_lang);
  }
}

AlignmentLinks diagonal(const std::string &segment) {
  AlignmentLinks links;
  auto n = static_cast<int>(tokenize(segment).size());
  for (int i = 0; i < n; ++i) links.add(i, i);
  return links;
}

bool starts_upper(std::string_view s) {
  std::size_t pos = 0;
  int c = s.empty() ? -1 : text::next_code_point(s, pos);
  return c >= 0 && text::is_upper(static_cast<char32_t>(c));
}

}  // namespace

void validate_request(const TranslationRequest &request) {
  if (request.segments.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "translation request has no segments");
  }
  auto valid = [](const std::string &code) {
    return code.size() == 2 && std::islower(static_cast<unsigned char>(code[0])) &&
           std::islower(static_cast<unsigned char>(code[1]));
  };
  if (!valid(request.source_lang) || !valid(request.target_lang)) {
    throw Error(ErrorCode::kInvalidArgument,
                "language codes must be ISO 639-1, got '" + request.source_lang + "' and '" +
                    request.target_lang + "'");
  }
  if (request.source_lang == request.target_lang) {
    throw Error(ErrorCode::kInvalidArgument, "source and target language are identical");
  }
}

PairList parse_pair_list(const std::string &spec) {
  PairList pairs;
  for (const auto &item : text::split(spec, ',')) {
    auto trimmed = text::trim_ascii(item);
    if (trimmed.empty()) continue;
    auto dash = trimmed.find('-');
    if (dash == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "language pair '" + trimmed + "' is not src-tgt");
    }
    pairs.emplace_back(trimmed.substr(0, dash), trimmed.substr(dash + 1));
  }
  return pairs;
}

// ---------------------------------------------------------------------------

bool IdentityBackend::supports(const std::string &source_lang,
                               const std::string &target_lang) const {
  return pair_allowed(pairs_, source_lang, target_lang);
}

TranslationResult IdentityBackend::translate_batch(const TranslationRequest &request) {
  auto start = Clock::now();
  require_pair(*this, request);
  TranslationResult result;
  result.backend_id = id();
  result.translations = request.segments;
  if (request.want_alignment) {
    result.alignments.emplace();
    for (const auto &s : request.segments) result.alignments->push_back(diagonal(s));
  }
  result.latency_ms = elapsed_ms(start);
  return result;
}

// ---------------------------------------------------------------------------

DictionaryBackend::DictionaryBackend(std::unordered_map<std::string, std::string> entries,
                                     PairList pairs)
    : pairs_(std::move(pairs)) {
  for (auto &[k, v] : entries) entries_[text::fold_case(k)] = std::move(v);
}

std::unique_ptr<DictionaryBackend> DictionaryBackend::load(const std::filesystem::path &path,
                                                           PairList pairs) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read dictionary " + path.string());
  std::unordered_map<std::string, std::string> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::is_blank(line) || line[0] == '#') continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw SchemaError(line_no, "dictionary", "expected source<TAB>target");
    }
    entries[fields[0]] = fields[1];
  }
  return std::make_unique<DictionaryBackend>(std::move(entries), std::move(pairs));
}

bool DictionaryBackend::supports(const std::string &source_lang,
                                 const std::string &target_lang) const {
  return pair_allowed(pairs_, source_lang, target_lang);
}

std::pair<std::string, AlignmentLinks> DictionaryBackend::translate_one(
    const std::string &segment) const {
  struct Piece {
    std::size_t begin;
    std::size_t end;
    int src;
  };
  auto tokens = tokenize(segment);
  std::string out;
  std::vector<Piece> pieces;
  std::size_t prev = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto &tok = tokens[i];
    out.append(segment, prev, tok.char_start - prev);
    prev = tok.char_end;
    std::size_t begin = out.size();
    auto it = entries_.find(text::fold_case(tok.text));
    if (it == entries_.end()) {
      out += tok.text;
      pieces.push_back({begin, out.size(), -1});
      continue;
    }
    out += starts_upper(tok.text) ? text::upper_first(it->second) : it->second;
    pieces.push_back({begin, out.size(), static_cast<int>(i)});
  }
  out.append(segment, prev);

  AlignmentLinks links;
  auto out_tokens = tokenize(out);
  for (std::size_t j = 0; j < out_tokens.size(); ++j) {
    int src = -1;
    for (const auto &p : pieces) {
      if (out_tokens[j].char_start >= p.begin && out_tokens[j].char_start < p.end) src = p.src;
    }
    links.add(src, static_cast<int>(j));
  }
  return {std::move(out), std::move(links)};
}

TranslationResult DictionaryBackend::translate_batch(const TranslationRequest &request) {
  auto start = Clock::now();
  require_pair(*this, request);
  TranslationResult result;
  result.backend_id = id();
  if (request.want_alignment) result.alignments.emplace();
  for (const auto &s : request.segments) {
    auto [text, links] = translate_one(s);
    result.translations.push_back(std::move(text));
    if (request.want_alignment) result.alignments->push_back(std::move(links));
  }
  result.latency_ms = elapsed_ms(start);
  return result;
}

// ---------------------------------------------------------------------------

RemoteConfig RemoteConfig::from_json(const std::string &json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception &e) {
    throw SchemaError(0, "remote", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError(0, "remote", "expected a JSON object");
  RemoteConfig c;
  try {
    c.endpoint_url = j.at("endpoint_url").get<std::string>();
    c.api_key_env_name = j.value("api_key_env_name", c.api_key_env_name);
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.backoff_base_ms = j.value("backoff_base_ms", c.backoff_base_ms);
    c.max_batch_chars = j.value("max_batch_chars", c.max_batch_chars);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    if (j.contains("pairs")) {
      for (const auto &p : j.at("pairs")) {
        auto parsed = parse_pair_list(p.get<std::string>());
        c.pairs.insert(c.pairs.end(), parsed.begin(), parsed.end());
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw SchemaError(0, "remote", e.what());
  }
  if (c.timeout_ms <= 0 || c.max_retries < 0 || c.backoff_base_ms < 0 || c.max_batch_chars == 0 ||
      c.max_in_flight < 1 || c.max_in_flight > 1024) {
    throw SchemaError(0, "remote", "numeric settings out of range");
  }
  return c;
}

RemoteConfig RemoteConfig::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read remote config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

struct RemoteBackend::Endpoint {
  std::string origin;  // scheme://host:port
  std::string path;
};

RemoteBackend::RemoteBackend(RemoteConfig config, Sleeper sleeper)
    : config_(std::move(config)),
      sleeper_(std::move(sleeper)),
      endpoint_(std::make_unique<Endpoint>()),
      in_flight_(config_.max_in_flight) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  const std::string &url = config_.endpoint_url;
  if (url.rfind("http://", 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "remote endpoint must be an http:// URL (TLS is terminated elsewhere): " + url);
  }
  auto slash = url.find('/', 7);
  endpoint_->origin = slash == std::string::npos ? url : url.substr(0, slash);
  endpoint_->path = slash == std::string::npos ? "/" : url.substr(slash);
}

RemoteBackend::~RemoteBackend() = default;

bool RemoteBackend::supports(const std::string &source_lang,
                             const std::string &target_lang) const {
  return pair_allowed(config_.pairs, source_lang, target_lang);
}

std::vector<std::pair<std::size_t, std::size_t>> RemoteBackend::plan_chunks(
    const std::vector<std::string> &segments) const {
  std::vector<std::pair<std::size_t, std::size_t>> chunks;
  std::size_t begin = 0;
  std::size_t chars = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    std::size_t n = text::code_point_count(segments[i]);
    if (i > begin && chars + n > config_.max_batch_chars) {
      chunks.emplace_back(begin, i);
      begin = i;
      chars = 0;
    }
    chars += n;
  }
  if (begin < segments.size()) chunks.emplace_back(begin, segments.size());
  return chunks;
}

TranslationResult RemoteBackend::send_chunk(const TranslationRequest &request, std::size_t begin,
                                            std::size_t end) {
  nlohmann::json body = {
      {"src_lang", request.source_lang},
      {"tgt_lang", request.target_lang},
      {"segments", std::vector<std::string>(request.segments.begin() + static_cast<long>(begin),
                                            request.segments.begin() + static_cast<long>(end))},
      {"want_alignment", request.want_alignment}};
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key_env_name.empty()) {
    const char *key = std::getenv(config_.api_key_env_name.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorCode::kAuth,
                  "API key variable " + config_.api_key_env_name + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  for (int attempt = 0;; ++attempt) {
    bool timed_out = false;
    std::string failure;
    {
      in_flight_.acquire();
      httplib::Client client(endpoint_->origin);
      auto timeout = std::chrono::milliseconds(config_.timeout_ms);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      auto res = client.Post(endpoint_->path, headers, payload, "application/json");
      in_flight_.release();

      if (!res) {
        auto err = res.error();
        timed_out = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
        failure = "request failed: " + httplib::to_string(err);
      } else if (res->status == 200) {
        TranslationResult out;
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception &e) {
          throw Error(ErrorCode::kProtocol, std::string("malformed response: ") + e.what());
        }
        const std::size_t expected = end - begin;
        if (!j.is_object() || !j.contains("translations") || !j["translations"].is_array() ||
            j["translations"].size() != expected) {
          throw Error(ErrorCode::kProtocol, "response does not carry " + std::to_string(expected) +
                                                " translations");
        }
        for (const auto &t : j["translations"]) {
          if (!t.is_string()) throw Error(ErrorCode::kProtocol, "translation is not a string");
          out.translations.push_back(t.get<std::string>());
        }
        if (j.contains("alignments") && !j["alignments"].is_null()) {
          const auto &a = j["alignments"];
          if (!a.is_array() || a.size() != expected) {
            throw Error(ErrorCode::kProtocol, "alignment list length mismatch");
          }
          out.alignments.emplace();
          for (const auto &sentence : a) {
            AlignmentLinks links;
            if (!sentence.is_array()) throw Error(ErrorCode::kProtocol, "bad alignment entry");
            for (const auto &pair : sentence) {
              if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
                  !pair[1].is_number_integer()) {
                throw Error(ErrorCode::kProtocol, "alignment link is not [i, j]");
              }
              links.add(pair[0].get<int>(), pair[1].get<int>());
            }
            out.alignments->push_back(std::move(links));
          }
        }
        return out;
      } else if (res->status == 401 || res->status == 403) {
        throw Error(ErrorCode::kAuth, "remote backend rejected credentials (HTTP " +
                                          std::to_string(res->status) + ")");
      } else if (res->status == 429 || res->status >= 500) {
        failure = "HTTP " + std::to_string(res->status);
      } else {
        throw BackendUnavailable(false, "remote backend answered HTTP " +
                                            std::to_string(res->status) + ": " + res->body);
      }
    }
    if (attempt >= config_.max_retries) {
      if (timed_out) {
        throw Error(ErrorCode::kTimeout, "remote backend timed out after " +
                                             std::to_string(attempt + 1) + " attempts");
      }
      throw BackendUnavailable(true, "remote backend unavailable after " +
                                         std::to_string(attempt + 1) + " attempts: " + failure);
    }
    sleeper_(std::chrono::milliseconds(static_cast<std::int64_t>(config_.backoff_base_ms) << attempt));
  }
}

TranslationResult RemoteBackend::translate_batch(const TranslationRequest &request) {
  auto start = Clock::now();
  require_pair(*this, request);
  TranslationResult result;
  result.backend_id = id();

  // Empty segments never go over the wire.
  std::vector<std::size_t> sent;
  TranslationRequest wire = request;
  wire.segments.clear();
  for (std::size_t i = 0; i < request.segments.size(); ++i) {
    if (!request.segments[i].empty()) {
      sent.push_back(i);
      wire.segments.push_back(request.segments[i]);
    }
  }
  result.translations.assign(request.segments.size(), std::string());
  std::vector<AlignmentLinks> alignments(request.segments.size());
  bool have_alignments = !wire.segments.empty();

  for (auto [begin, end] : plan_chunks(wire.segments)) {
    auto chunk = send_chunk(wire, begin, end);
    for (std::size_t k = begin; k < end; ++k) {
      result.translations[sent[k]] = std::move(chunk.translations[k - begin]);
      if (chunk.alignments) alignments[sent[k]] = std::move((*chunk.alignments)[k - begin]);
    }
    have_alignments &= chunk.alignments.has_value();
  }
  if (request.want_alignment && have_alignments) result.alignments = std::move(alignments);
  result.latency_ms = elapsed_ms(start);
  return result;
}

bool RemoteBackend::healthy() const {
  httplib::Client client(endpoint_->origin);
  client.set_connection_timeout(std::chrono::milliseconds(std::min(config_.timeout_ms, 2000)));
  client.set_read_timeout(std::chrono::milliseconds(std::min(config_.timeout_ms, 2000)));
  return static_cast<bool>(client.Get(endpoint_->path));
}

std::unique_ptr<Backend> make_backend(const BackendSpec &spec) {
  if (spec.kind == "identity") return std::make_unique<IdentityBackend>(spec.pairs);
  if (spec.kind == "dictionary") {
    if (spec.dictionary_path.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "dictionary backend needs a dictionary file");
    }
    return DictionaryBackend::load(spec.dictionary_path, spec.pairs);
  }
  if (spec.kind == "remote") {
    if (spec.remote_config_path.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "remote backend needs a config file");
    }
    auto config = RemoteConfig::load(spec.remote_config_path);
    if (!spec.pairs.empty()) config.pairs = spec.pairs;
    return std::make_unique<RemoteBackend>(std::move(config));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + spec.kind + "'");
}

}  // namespace markmt
