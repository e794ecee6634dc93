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

// markmt command-line interface. Talks to the library only through the C API.

#include <pthread.h>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "markmt/markmt.h"

namespace {

using json = nlohmann::json;

// Exit codes.
constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct RuntimeError {
  std::string message;
};

std::string take(char *s) {
  std::string out = s ? s : "";
  markmt_string_free(s);
  return out;
}

void check(markmt_status status) {
  if (status != MARKMT_OK) {
    throw RuntimeError{std::string(markmt_status_name(status)) + ": " + markmt_last_error()};
  }
}

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError{"cannot read " + path};
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string &path, const std::string &content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError{"cannot write " + path};
  out << content;
  if (!out) throw RuntimeError{"cannot write " + path};
}

std::vector<std::string> read_lines(const std::string &path) {
  std::string text = read_text(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

struct TranslateArgs {
  std::string in;
  std::string out = "-";
  std::string format = "html";
  std::string src;
  std::string tgt;
  std::string backend = "identity";
  std::string dictionary;
  std::string remote_config;
  std::vector<std::string> glossaries;
  std::string domain;
  std::string policy;
  std::string lexicon;
  std::string reverse_lexicon;
};

int run_translate(const TranslateArgs &a) {
  json config = {{"backend", {{"kind", a.backend}}}};
  if (!a.dictionary.empty()) config["backend"]["dictionary"] = a.dictionary;
  if (!a.remote_config.empty()) config["backend"]["remote_config"] = a.remote_config;
  if (!a.glossaries.empty()) config["glossaries"] = a.glossaries;
  if (!a.policy.empty()) config["policy"] = a.policy;
  if (!a.lexicon.empty()) config["forward_lexicon"] = a.lexicon;
  if (!a.reverse_lexicon.empty()) config["reverse_lexicon"] = a.reverse_lexicon;

  json request = {{"format", a.format},
                  {"content", read_text(a.in)},
                  {"source_lang", a.src},
                  {"target_lang", a.tgt},
                  {"domain", a.domain},
                  {"glossary", !a.glossaries.empty()}};

  markmt_pipeline *pipeline = nullptr;
  check(markmt_pipeline_create(config.dump().c_str(), &pipeline));
  std::unique_ptr<markmt_pipeline, void (*)(markmt_pipeline *)> guard(pipeline,
                                                                      markmt_pipeline_free);
  char *response = nullptr;
  char *warnings = nullptr;
  check(markmt_pipeline_translate(pipeline, request.dump().c_str(), &response, &warnings));
  auto body = json::parse(take(response));
  write_text(a.out, body["content"].get<std::string>());
  std::cerr << take(warnings);
  for (const auto &f : body["term_findings"]) std::cerr << f.dump() << "\n";
  return kOk;
}

int run_chrf(const std::string &hyp, const std::string &ref, int resamples,
             std::uint64_t seed) {
  auto hyps = read_lines(hyp);
  auto refs = read_lines(ref);
  if (hyps.size() != refs.size()) {
    throw RuntimeError{"line counts differ: " + std::to_string(hyps.size()) + " hypotheses, " +
                       std::to_string(refs.size()) + " references"};
  }
  std::vector<const char *> h;
  std::vector<const char *> r;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    h.push_back(hyps[i].c_str());
    r.push_back(refs[i].c_str());
  }
  char *report = nullptr;
  check(markmt_chrf(h.data(), r.data(), h.size(), resamples, seed, &report));
  auto j = json::parse(take(report));
  std::cout << j["rendered"].get<std::string>() << "\n" << j.dump() << "\n";
  return kOk;
}

int run_train_align(const std::string &corpus, int iters, bool reverse, const std::string &out) {
  char *log = nullptr;
  check(markmt_train_model1(corpus.c_str(), iters, reverse ? 1 : 0, out.c_str(), &log));
  std::cerr << take(log) << "\n";
  return kOk;
}

int run_align(const std::string &lexicon_path, const std::string &src, const std::string &tgt) {
  auto src_lines = read_lines(src);
  auto tgt_lines = read_lines(tgt);
  if (src_lines.size() != tgt_lines.size()) {
    throw RuntimeError{"source and target line counts differ"};
  }
  markmt_lexicon *lexicon = nullptr;
  check(markmt_lexicon_load(lexicon_path.c_str(), &lexicon));
  std::unique_ptr<markmt_lexicon, void (*)(markmt_lexicon *)> guard(lexicon,
                                                                    markmt_lexicon_free);
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    char *pharaoh = nullptr;
    check(markmt_align(lexicon, src_lines[i].c_str(), tgt_lines[i].c_str(), &pharaoh));
    std::cout << take(pharaoh) << "\n";
  }
  return kOk;
}

int run_serve(const std::string &config, int port, const std::string &backend) {
  json overrides = json::object();
  if (port >= 0) overrides["port"] = port;
  if (!backend.empty()) overrides["backend"] = backend;

  // Signals are taken synchronously by this thread; block them before any
  // worker thread starts so they inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  markmt_service *service = nullptr;
  check(markmt_service_create(config.empty() ? nullptr : config.c_str(),
                              overrides.dump().c_str(), &service));
  std::unique_ptr<markmt_service, void (*)(markmt_service *)> guard(service,
                                                                    markmt_service_free);
  int bound = 0;
  check(markmt_service_bind(service, &bound));
  std::cout << "listening on port " << bound << std::endl;
  markmt_status status = MARKMT_OK;
  std::string error;
  std::thread server([&] {
    status = markmt_service_run(service);
    if (status != MARKMT_OK) error = markmt_last_error();
  });
  int sig = 0;
  sigwait(&signals, &sig);
  markmt_service_stop(service);
  server.join();
  if (status != MARKMT_OK) throw RuntimeError{error};
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Markup-preserving machine translation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", markmt_version());

  TranslateArgs ta;
  auto *translate = app.add_subcommand("translate", "Translate an HTML, XML or text document");
  translate->add_option("--in", ta.in, "Input document")->required();
  translate->add_option("--out", ta.out, "Output document ('-' for stdout)");
  translate->add_option("--format", ta.format, "html, xml or text")
      ->check(CLI::IsMember({"html", "xml", "text"}));
  translate->add_option("--src", ta.src, "Source language (ISO 639-1)")->required();
  translate->add_option("--tgt", ta.tgt, "Target language (ISO 639-1)")->required();
  translate->add_option("--backend", ta.backend, "identity, dictionary or remote")
      ->check(CLI::IsMember({"identity", "dictionary", "remote"}));
  translate->add_option("--dictionary", ta.dictionary, "Dictionary TSV for --backend dictionary");
  translate->add_option("--remote-config", ta.remote_config, "JSON config for --backend remote");
  translate->add_option("--glossary", ta.glossaries, "Glossary TSV (repeatable)");
  translate->add_option("--domain", ta.domain, "Glossary domain");
  translate->add_option("--policy", ta.policy, "Extraction policy file");
  translate->add_option("--lexicon", ta.lexicon, "Lexicon t(tgt|src) for alignment");
  translate->add_option("--reverse-lexicon", ta.reverse_lexicon, "Lexicon t(src|tgt)");

  std::string hyp, ref;
  int resamples = 1000;
  std::uint64_t seed = 1;
  auto *chrf = app.add_subcommand("chrf", "Corpus chrF with a bootstrap interval");
  chrf->add_option("--hyp", hyp, "Hypotheses, one per line")->required();
  chrf->add_option("--ref", ref, "References, one per line")->required();
  chrf->add_option("--resamples", resamples, "Bootstrap resamples")
      ->check(CLI::NonNegativeNumber);
  chrf->add_option("--seed", seed, "Bootstrap seed");

  std::string corpus, lexicon_out;
  int iters = 5;
  bool reverse = false;
  auto *train = app.add_subcommand("train-align", "Train an IBM Model 1 lexicon");
  train->add_option("--corpus", corpus, "Parallel corpus, src<TAB>tgt per line")->required();
  train->add_option("--iters", iters, "EM iterations")->check(CLI::NonNegativeNumber);
  train->add_option("--out", lexicon_out, "Output lexicon TSV")->required();
  train->add_flag("--reverse", reverse, "Train t(src|tgt) instead");

  std::string lexicon_in, src_file, tgt_file;
  auto *align = app.add_subcommand("align", "Viterbi word alignment as Pharaoh lines");
  align->add_option("--lexicon", lexicon_in, "Lexicon TSV")->required();
  align->add_option("--src", src_file, "Source sentences, one per line")->required();
  align->add_option("--tgt", tgt_file, "Target sentences, one per line")->required();

  std::string evalset, split = "dev", scores, key;
  std::vector<std::string> runs;
  int eval_resamples = 1000;
  std::uint64_t eval_seed = 1;
  auto *evaluate = app.add_subcommand("evaluate", "Score system runs against an evaluation set");
  evaluate->add_option("--evalset", evalset, "Evaluation set JSONL")->required();
  evaluate->add_option("--run", runs, "System run JSONL (repeatable)")->required();
  evaluate->add_option("--split", split, "dev or test")->check(CLI::IsMember({"dev", "test"}));
  evaluate->add_option("--seed", eval_seed, "Bootstrap seed");
  evaluate->add_option("--resamples", eval_resamples, "Bootstrap resamples")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--scores", scores, "Human scores JSONL");
  evaluate->add_option("--key", key, "Annotation key JSONL");

  bool make_batch = false, aggregate = false;
  std::string a_evalset, a_split, tasks_out, key_out, a_scores, a_key, a_errors;
  std::vector<std::string> a_runs, annotators;
  std::uint64_t a_seed = 1;
  std::size_t limit = 0, redundancy = 1;
  auto *annotate = app.add_subcommand("annotate", "Build annotation batches or aggregate scores");
  auto *mb = annotate->add_flag("--make-batch", make_batch, "Build an anonymized batch");
  auto *ag = annotate->add_flag("--aggregate", aggregate, "Aggregate human scores");
  mb->excludes(ag);
  annotate->add_option("--evalset", a_evalset, "Evaluation set JSONL");
  annotate->add_option("--run", a_runs, "System run JSONL (repeatable)");
  annotate->add_option("--annotators", annotators, "Annotator ids")->delimiter(',');
  annotate->add_option("--split", a_split, "Restrict to dev or test")
      ->check(CLI::IsMember({"dev", "test"}));
  annotate->add_option("--seed", a_seed, "Permutation seed");
  annotate->add_option("--limit", limit, "Sample this many segments");
  annotate->add_option("--redundancy", redundancy, "Annotators per segment");
  annotate->add_option("--tasks-out", tasks_out, "Output tasks JSONL");
  annotate->add_option("--key-out", key_out, "Output key JSONL");
  annotate->add_option("--scores", a_scores, "Human scores JSONL");
  annotate->add_option("--key", a_key, "Annotation key JSONL");
  annotate->add_option("--errors", a_errors, "Error annotations JSONL");

  std::string serve_config, serve_backend;
  int serve_port = -1;
  auto *serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", serve_config, "Service config JSON");
  serve->add_option("--port", serve_port, "Listen port (0 picks one)")->check(CLI::Range(0, 65535));
  serve->add_option("--backend", serve_backend, "identity, dictionary or remote")
      ->check(CLI::IsMember({"identity", "dictionary", "remote"}));

  try {
    app.parse(argc, argv);
    if (*annotate) {
      if (make_batch == aggregate) {
        throw CLI::ValidationError("annotate", "choose one of --make-batch or --aggregate");
      }
      auto need = [](bool ok, const char *what) {
        if (!ok) throw CLI::RequiredError(what);
      };
      if (make_batch) {
        need(!a_evalset.empty(), "--evalset");
        need(!a_runs.empty(), "--run");
        need(!annotators.empty(), "--annotators");
        need(!tasks_out.empty(), "--tasks-out");
        need(!key_out.empty(), "--key-out");
      } else {
        need(!a_scores.empty(), "--scores");
        need(!a_key.empty(), "--key");
      }
    }
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*translate) return run_translate(ta);
    if (*chrf) return run_chrf(hyp, ref, resamples, seed);
    if (*train) return run_train_align(corpus, iters, reverse, lexicon_out);
    if (*align) return run_align(lexicon_in, src_file, tgt_file);
    if (*evaluate) {
      json request = {{"evalset", evalset}, {"runs", runs},  {"split", split},
                      {"seed", eval_seed},  {"resamples", eval_resamples}};
      if (!scores.empty()) request["scores"] = scores;
      if (!key.empty()) request["key"] = key;
      char *report = nullptr;
      char *table = nullptr;
      check(markmt_evaluate(request.dump().c_str(), &report, &table));
      std::cout << take(table) << take(report) << "\n";
      return kOk;
    }
    if (*annotate) {
      char *report = nullptr;
      if (make_batch) {
        json request = {{"evalset", a_evalset}, {"runs", a_runs},         {"annotators", annotators},
                        {"seed", a_seed},       {"redundancy", redundancy}, {"tasks_out", tasks_out},
                        {"key_out", key_out}};
        if (!a_split.empty()) request["split"] = a_split;
        if (limit > 0) request["limit"] = limit;
        check(markmt_annotation_make_batch(request.dump().c_str(), &report));
        std::cout << take(report) << "\n";
      } else {
        json request = {{"scores", a_scores}, {"key", a_key}};
        if (!a_errors.empty()) request["errors"] = a_errors;
        char *table = nullptr;
        check(markmt_annotation_aggregate(request.dump().c_str(), &report, &table));
        std::cout << take(table) << take(report) << "\n";
      }
      return kOk;
    }
    if (*serve) return run_serve(serve_config, serve_port, serve_backend);
  } catch (const RuntimeError &e) {
    std::cerr << "markmt: error: " << e.message << "\n";
    return kRuntimeError;
  } catch (const std::exception &e) {
    std::cerr << "markmt: error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
