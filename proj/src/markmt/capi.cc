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

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "json.hpp"
#include "markmt/aligner.h"
#include "markmt/error.h"
#include "markmt/evalharness.h"
#include "markmt/io.h"
#include "markmt/markmt.h"
#include "markmt/metrics.h"
#include "markmt/pipeline.h"
#include "markmt/service.h"

struct markmt_pipeline {
  std::unique_ptr<markmt::Pipeline> impl;
};

struct markmt_lexicon {
  markmt::LexiconTable table;
};

struct markmt_service {
  std::unique_ptr<markmt::Service> impl;
};

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using markmt::Error;
using markmt::ErrorCode;

thread_local std::string g_last_error;

markmt_status fail(markmt_status status, const std::string &message) {
  g_last_error = message;
  return status;
}

// Runs fn, mapping exceptions onto status codes.
template <typename Fn>
markmt_status wrap(Fn &&fn) {
  g_last_error.clear();
  try {
    fn();
    return MARKMT_OK;
  } catch (const Error &e) {
    return fail(static_cast<markmt_status>(static_cast<int>(e.code()) + 1), e.what());
  } catch (const json::exception &e) {
    return fail(MARKMT_E_INVALID_ARGUMENT, std::string("invalid JSON argument: ") + e.what());
  } catch (const std::bad_alloc &) {
    return fail(MARKMT_E_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(MARKMT_E_INTERNAL, e.what());
  }
}

char *dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void require(const void *p, const char *what) {
  if (p == nullptr) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

json parse_arg(const char *text) {
  require(text, "JSON argument");
  auto j = json::parse(text);
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "JSON argument must be an object");
  return j;
}

std::vector<std::string> string_list(const json &j, const char *field) {
  std::vector<std::string> out;
  if (!j.contains(field)) return out;
  for (const auto &v : j.at(field)) out.push_back(v.get<std::string>());
  return out;
}

markmt::BackendSpec backend_spec(const json &b) {
  markmt::BackendSpec spec;
  if (b.is_string()) {
    spec.kind = b.get<std::string>();
    return spec;
  }
  spec.kind = b.value("kind", spec.kind);
  spec.dictionary_path = b.value("dictionary", std::string());
  spec.remote_config_path = b.value("remote_config", std::string());
  for (const auto &p : string_list(b, "pairs")) {
    auto parsed = markmt::parse_pair_list(p);
    spec.pairs.insert(spec.pairs.end(), parsed.begin(), parsed.end());
  }
  return spec;
}

std::vector<markmt::EvalItem> select_split(std::vector<markmt::EvalItem> items,
                                           const json &request) {
  if (!request.contains("split")) return items;
  auto split = markmt::parse_split(request.at("split").get<std::string>());
  std::erase_if(items, [&](const markmt::EvalItem &i) { return i.split != split; });
  return items;
}

}  // namespace

extern "C" {

const char *markmt_version(void) { return "0.1.0"; }

const char *markmt_status_name(markmt_status status) {
  if (status == MARKMT_OK) return "ok";
  if (status == MARKMT_E_INTERNAL) return "internal";
  int code = static_cast<int>(status) - 1;
  if (code < 0 || code > static_cast<int>(ErrorCode::kIo)) return "unknown";
  return markmt::error_code_name(static_cast<ErrorCode>(code));
}

const char *markmt_last_error(void) { return g_last_error.c_str(); }

void markmt_string_free(char *s) { std::free(s); }

markmt_status markmt_pipeline_create(const char *config_json, markmt_pipeline **out) {
  return wrap([&] {
    require(out, "out");
    *out = nullptr;
    json config = config_json ? parse_arg(config_json) : json::object();
    markmt::BackendSpec spec;
    if (config.contains("backend")) spec = backend_spec(config.at("backend"));
    markmt::PipelineConfig pc;
    if (config.contains("policy")) {
      pc.policy = markmt::ExtractionPolicy::load(config.at("policy").get<std::string>());
    }
    if (config.contains("forward_lexicon")) {
      pc.forward_lexicon = std::make_shared<markmt::LexiconTable>(
          markmt::LexiconTable::load(config.at("forward_lexicon").get<std::string>()));
    }
    if (config.contains("reverse_lexicon")) {
      pc.reverse_lexicon = std::make_shared<markmt::LexiconTable>(
          markmt::LexiconTable::load(config.at("reverse_lexicon").get<std::string>()));
    }
    for (const auto &path : string_list(config, "glossaries")) {
      pc.glossary.merge(markmt::Glossary::load(path));
    }
    auto handle = std::make_unique<markmt_pipeline>();
    handle->impl = std::make_unique<markmt::Pipeline>(
        std::shared_ptr<markmt::Backend>(markmt::make_backend(spec)), std::move(pc));
    *out = handle.release();
  });
}

void markmt_pipeline_free(markmt_pipeline *pipeline) { delete pipeline; }

markmt_status markmt_pipeline_translate(markmt_pipeline *pipeline, const char *request_json,
                                        char **response_json, char **warnings_jsonl) {
  return wrap([&] {
    require(pipeline, "pipeline");
    require(response_json, "response_json");
    auto body = parse_arg(request_json);
    markmt::DocumentRequest request;
    request.format = markmt::parse_document_format(body.at("format").get<std::string>());
    request.content = body.at("content").get<std::string>();
    request.source_lang = body.at("source_lang").get<std::string>();
    request.target_lang = body.at("target_lang").get<std::string>();
    request.domain = body.value("domain", std::string());
    request.check_glossary = body.value("glossary", false);
    auto result = pipeline->impl->translate(request);
    *response_json = dup(result.to_json());
    if (warnings_jsonl != nullptr) *warnings_jsonl = dup(result.warnings_jsonl());
  });
}

markmt_status markmt_chrf(const char *const *hypotheses, const char *const *references,
                          size_t n, int resamples, uint64_t seed, char **report_json) {
  return wrap([&] {
    require(report_json, "report_json");
    if (n > 0) {
      require(hypotheses, "hypotheses");
      require(references, "references");
    }
    if (resamples < 0) throw Error(ErrorCode::kInvalidArgument, "resamples must be >= 0");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (size_t i = 0; i < n; ++i) {
      require(hypotheses[i], "hypothesis");
      require(references[i], "reference");
      pairs.emplace_back(hypotheses[i], references[i]);
    }
    auto report = markmt::chrf_corpus(pairs);
    auto j = ojson::parse(report.to_json());
    markmt::ScoreSummary summary;
    summary.mean = summary.ci_low = summary.ci_high = report.score;
    if (resamples > 0) {
      markmt::BootstrapOptions options;
      options.resamples = resamples;
      options.seed = seed;
      summary = markmt::bootstrap_ci(pairs, options);
    }
    j["ci_low"] = summary.ci_low;
    j["ci_high"] = summary.ci_high;
    j["rendered"] = markmt::render_interval(summary);
    *report_json = dup(j.dump());
  });
}

markmt_status markmt_train_model1(const char *corpus_path, int iterations, int reverse,
                                  const char *out_path, char **log_json) {
  return wrap([&] {
    require(corpus_path, "corpus_path");
    require(out_path, "out_path");
    auto corpus = markmt::ParallelCorpus::load(corpus_path);
    if (reverse != 0) corpus = corpus.reversed();
    markmt::Model1Options options;
    options.iterations = iterations;
    auto result = markmt::train_model1(corpus, options);
    result.lexicon.save(out_path);
    if (log_json != nullptr) {
      ojson j = {{"pairs", corpus.pairs.size()}, {"log_likelihood", result.log_likelihood}};
      *log_json = dup(j.dump());
    }
  });
}

markmt_status markmt_lexicon_load(const char *path, markmt_lexicon **out) {
  return wrap([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<markmt_lexicon>();
    handle->table = markmt::LexiconTable::load(path);
    *out = handle.release();
  });
}

void markmt_lexicon_free(markmt_lexicon *lexicon) { delete lexicon; }

markmt_status markmt_align(const markmt_lexicon *lexicon, const char *src, const char *tgt,
                           char **pharaoh) {
  return wrap([&] {
    require(lexicon, "lexicon");
    require(src, "src");
    require(tgt, "tgt");
    require(pharaoh, "pharaoh");
    auto s = markmt::token_texts(markmt::tokenize(src));
    auto t = markmt::token_texts(markmt::tokenize(tgt));
    *pharaoh = dup(markmt::to_pharaoh(markmt::viterbi_align(s, t, lexicon->table)));
  });
}

markmt_status markmt_evaluate(const char *request_json, char **report_json, char **table_text) {
  return wrap([&] {
    require(report_json, "report_json");
    auto request = parse_arg(request_json);
    auto items = markmt::load_evalset(request.at("evalset").get<std::string>());
    auto split = markmt::parse_split(request.value("split", std::string("dev")));
    markmt::EvalOptions options;
    options.seed = request.value("seed", std::uint64_t{1});
    options.resamples = request.value("resamples", 1000);

    auto counts = markmt::split_counts(items);
    ojson out = {{"split_counts", {{"dev", counts.dev}, {"test", counts.test}}}};
    ojson systems = ojson::array();
    std::vector<markmt::TableRow> rows;
    for (const auto &path : string_list(request, "runs")) {
      auto run = markmt::load_run(path);
      auto report = markmt::evaluate_run(run, items, split, options);
      systems.push_back(ojson::parse(report.to_json()));
      rows.push_back({run.system_id, report.bootstrap, std::nullopt});
    }
    out["systems"] = systems;
    if (request.contains("scores") && request.contains("key")) {
      auto human = markmt::aggregate_annotations(
          markmt::load_scores(request.at("scores").get<std::string>()),
          markmt::load_key(request.at("key").get<std::string>()));
      out["human"] = ojson::parse(human.to_json());
      for (const auto &[system, summary] : human.systems) {
        auto row = std::find_if(rows.begin(), rows.end(),
                                [&](const markmt::TableRow &r) { return r.system == system; });
        if (row == rows.end()) {
          rows.push_back({system, std::nullopt, summary});
        } else {
          row->human = summary;
        }
      }
    }
    *report_json = dup(out.dump());
    if (table_text != nullptr) *table_text = dup(markmt::render_table(rows));
  });
}

markmt_status markmt_annotation_make_batch(const char *request_json, char **summary_json) {
  return wrap([&] {
    require(summary_json, "summary_json");
    auto request = parse_arg(request_json);
    auto items = select_split(markmt::load_evalset(request.at("evalset").get<std::string>()),
                              request);
    std::vector<markmt::SystemRun> runs;
    for (const auto &path : string_list(request, "runs")) runs.push_back(markmt::load_run(path));
    markmt::BatchOptions options;
    options.seed = request.value("seed", std::uint64_t{1});
    if (request.contains("limit")) options.limit = request.at("limit").get<std::size_t>();
    options.redundancy = request.value("redundancy", std::size_t{1});
    auto batch =
        markmt::make_annotation_batch(runs, items, string_list(request, "annotators"), options);
    markmt::write_file(request.at("tasks_out").get<std::string>(),
                       markmt::serialize_tasks(batch.tasks));
    markmt::write_file(request.at("key_out").get<std::string>(), markmt::serialize_key(batch.key));
    ojson loads = ojson::object();
    for (const auto &a : string_list(request, "annotators")) loads[a] = 0;
    for (const auto &t : batch.tasks) loads[t.annotator_id] = loads[t.annotator_id].get<int>() + 1;
    ojson j = {{"tasks", batch.tasks.size()}, {"loads", loads}};
    *summary_json = dup(j.dump());
  });
}

markmt_status markmt_annotation_aggregate(const char *request_json, char **report_json,
                                          char **table_text) {
  return wrap([&] {
    require(report_json, "report_json");
    auto request = parse_arg(request_json);
    auto report = markmt::aggregate_annotations(
        markmt::load_scores(request.at("scores").get<std::string>()),
        markmt::load_key(request.at("key").get<std::string>()));
    auto j = ojson::parse(report.to_json());
    if (request.contains("errors")) {
      auto errors =
          markmt::load_error_annotations(request.at("errors").get<std::string>());
      j["errors"] = ojson::parse(markmt::error_summary(errors).to_json());
    }
    *report_json = dup(j.dump());
    if (table_text != nullptr) {
      std::vector<markmt::TableRow> rows;
      for (const auto &[system, summary] : report.systems) {
        rows.push_back({system, std::nullopt, summary});
      }
      *table_text = dup(markmt::render_table(rows));
    }
  });
}

markmt_status markmt_service_create(const char *config_path, const char *overrides_json,
                                    markmt_service **out) {
  return wrap([&] {
    require(out, "out");
    *out = nullptr;
    markmt::ServiceConfig config;
    if (config_path != nullptr) config = markmt::ServiceConfig::load(config_path);
    if (overrides_json != nullptr) {
      auto o = parse_arg(overrides_json);
      if (o.contains("port")) config.port = o.at("port").get<int>();
      if (o.contains("host")) config.host = o.at("host").get<std::string>();
      if (o.contains("backend")) {
        auto spec = backend_spec(o.at("backend"));
        config.backend.kind = spec.kind;
        if (!spec.dictionary_path.empty()) config.backend.dictionary_path = spec.dictionary_path;
        if (!spec.remote_config_path.empty()) {
          config.backend.remote_config_path = spec.remote_config_path;
        }
      }
    }
    auto handle = std::make_unique<markmt_service>();
    handle->impl = std::make_unique<markmt::Service>(std::move(config));
    *out = handle.release();
  });
}

markmt_status markmt_service_bind(markmt_service *service, int *port) {
  return wrap([&] {
    require(service, "service");
    int p = service->impl->bind();
    if (port != nullptr) *port = p;
  });
}

markmt_status markmt_service_run(markmt_service *service) {
  return wrap([&] {
    require(service, "service");
    service->impl->run();
  });
}

void markmt_service_stop(markmt_service *service) {
  if (service != nullptr) service->impl->stop();
}

void markmt_service_free(markmt_service *service) { delete service; }

}  // extern "C"
