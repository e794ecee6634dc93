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

#include "markmt/evalharness.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "json.hpp"
#include "markmt/error.h"
#include "markmt/io.h"
#include "markmt/text.h"

namespace markmt {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// Calls fn(line_number, line) for every non-blank line.
template <typename Fn>
void for_each_line(std::string_view jsonl, Fn &&fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    auto nl = jsonl.find('\n', pos);
    auto end = nl == std::string_view::npos ? jsonl.size() : nl;
    ++line_no;
    auto line = jsonl.substr(pos, end - pos);
    if (!text::is_blank(line)) fn(line_no, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

json parse_object(std::string_view line, int line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception &e) {
    throw SchemaError(line_no, "record", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError(line_no, "record", "expected a JSON object");
  return j;
}

std::string get_string(const json &j, const char *field, int line_no, bool allow_empty = false) {
  auto it = j.find(field);
  if (it == j.end()) throw SchemaError(line_no, field, "missing");
  if (!it->is_string()) throw SchemaError(line_no, field, "expected a string");
  auto s = it->get<std::string>();
  if (!allow_empty && s.empty()) throw SchemaError(line_no, field, "empty");
  return s;
}

std::vector<std::string> get_strings(const json &j, const char *field, int line_no) {
  auto it = j.find(field);
  if (it == j.end()) throw SchemaError(line_no, field, "missing");
  if (!it->is_array()) throw SchemaError(line_no, field, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto &v : *it) {
    if (!v.is_string()) throw SchemaError(line_no, field, "expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Subject parse_subject(const std::string &s, int line_no) {
  if (s == "biology") return Subject::kBiology;
  if (s == "chemistry") return Subject::kChemistry;
  if (s == "geography") return Subject::kGeography;
  if (s == "other") return Subject::kOther;
  throw SchemaError(line_no, "subject", "unknown subject '" + s + "'");
}

std::string label_for(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string pad(const std::string &s, std::size_t width) {
  std::size_t n = text::code_point_count(s);
  return n >= width ? s : s + std::string(width - n, ' ');
}

ojson summary_json(const ScoreSummary &s) {
  return ojson{{"mean", s.mean}, {"sd", s.sd},           {"ci_low", s.ci_low},
               {"ci_high", s.ci_high}, {"n", s.n}, {"rendered", render_moments(s)}};
}

}  // namespace

const char *subject_name(Subject subject) {
  switch (subject) {
    case Subject::kBiology:
      return "biology";
    case Subject::kChemistry:
      return "chemistry";
    case Subject::kGeography:
      return "geography";
    case Subject::kOther:
      return "other";
  }
  return "other";
}

const char *split_name(Split split) { return split == Split::kDev ? "dev" : "test"; }

Split parse_split(std::string_view name) {
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw Error(ErrorCode::kInvalidArgument, "split must be dev or test, got '" +
                                               std::string(name) + "'");
}

// ---------------------------------------------------------------------------

std::vector<EvalItem> parse_evalset(std::string_view jsonl) {
  std::vector<EvalItem> items;
  std::set<std::string> ids;
  for_each_line(jsonl, [&](int line_no, std::string_view line) {
    auto j = parse_object(line, line_no);
    EvalItem item;
    item.item_id = get_string(j, "item_id", line_no);
    item.subject = parse_subject(get_string(j, "subject", line_no), line_no);
    item.exercise_type = get_string(j, "exercise_type", line_no, true);
    item.source_segments = get_strings(j, "source_segments", line_no);
    item.reference_segments = get_strings(j, "reference_segments", line_no);
    auto split = get_string(j, "split", line_no);
    if (split == "dev") {
      item.split = Split::kDev;
    } else if (split == "test") {
      item.split = Split::kTest;
    } else {
      throw SchemaError(line_no, "split", "expected dev or test, got '" + split + "'");
    }
    if (item.source_segments.empty()) {
      throw SchemaError(line_no, "source_segments", "at least one segment is required");
    }
    if (item.source_segments.size() != item.reference_segments.size()) {
      throw SchemaError(line_no, "reference_segments",
                        std::to_string(item.reference_segments.size()) + " references for " +
                            std::to_string(item.source_segments.size()) + " sources");
    }
    if (!ids.insert(item.item_id).second) {
      throw SchemaError(line_no, "item_id", "duplicate id '" + item.item_id + "'");
    }
    items.push_back(std::move(item));
  });
  if (items.empty()) throw SchemaError(0, "record", "evaluation set is empty");
  return items;
}

std::vector<EvalItem> load_evalset(const std::filesystem::path &path) {
  return parse_evalset(read_file(path));
}

std::string serialize_evalset(const std::vector<EvalItem> &items) {
  std::string out;
  for (const auto &item : items) {
    ojson j = {{"item_id", item.item_id},
               {"subject", subject_name(item.subject)},
               {"exercise_type", item.exercise_type},
               {"source_segments", item.source_segments},
               {"reference_segments", item.reference_segments},
               {"split", split_name(item.split)}};
    out += j.dump() + "\n";
  }
  return out;
}

void save_evalset(const std::filesystem::path &path, const std::vector<EvalItem> &items) {
  write_file(path, serialize_evalset(items));
}

SplitCounts split_counts(const std::vector<EvalItem> &items) {
  SplitCounts c;
  for (const auto &item : items) ++(item.split == Split::kDev ? c.dev : c.test);
  return c;
}

SystemRun parse_run(std::string_view jsonl, const std::string &default_system_id) {
  SystemRun run;
  std::optional<std::string> declared;
  for_each_line(jsonl, [&](int line_no, std::string_view line) {
    auto j = parse_object(line, line_no);
    if (j.contains("system_id")) {
      auto id = get_string(j, "system_id", line_no);
      if (declared && *declared != id) {
        throw SchemaError(line_no, "system_id", "run mixes systems '" + *declared + "' and '" +
                                                    id + "'");
      }
      declared = id;
    }
    auto item_id = get_string(j, "item_id", line_no);
    auto hyps = get_strings(j, "hypotheses", line_no);
    if (!run.hypotheses.emplace(item_id, std::move(hyps)).second) {
      throw SchemaError(line_no, "item_id", "duplicate id '" + item_id + "'");
    }
  });
  run.system_id = declared.value_or(default_system_id);
  return run;
}

SystemRun load_run(const std::filesystem::path &path) {
  return parse_run(read_file(path), path.stem().string());
}

std::string EvalReport::to_json() const {
  ojson subjects = ojson::array();
  for (const auto &s : per_subject) {
    subjects.push_back({{"subject", subject_name(s.subject)}, {"chrf", s.chrf},
                        {"segments", s.segments}});
  }
  ojson j = {{"system_id", system_id},
             {"split", split_name(split)},
             {"chrf", corpus.score},
             {"chrP", corpus.chrP},
             {"chrR", corpus.chrR},
             {"ci_low", bootstrap.ci_low},
             {"ci_high", bootstrap.ci_high},
             {"bootstrap_sd", bootstrap.sd},
             {"resamples", bootstrap.n},
             {"rendered", render_interval(bootstrap)},
             {"items", items},
             {"segments", segments},
             {"per_subject", subjects}};
  return j.dump();
}

EvalReport evaluate_run(const SystemRun &run, const std::vector<EvalItem> &items, Split split,
                        const EvalOptions &options) {
  std::vector<const EvalItem *> selected;
  std::vector<std::string> missing;
  for (const auto &item : items) {
    if (item.split != split) continue;
    selected.push_back(&item);
    if (!run.hypotheses.count(item.item_id)) missing.push_back(item.item_id);
  }
  if (!missing.empty()) throw MissingHypotheses(std::move(missing));
  if (selected.empty()) {
    throw Error(ErrorCode::kEmptyInput, std::string("no items in split ") + split_name(split));
  }

  EvalReport report;
  report.system_id = run.system_id;
  report.split = split;
  report.items = selected.size();
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<Subject, std::vector<std::pair<std::string, std::string>>> by_subject;
  for (const auto *item : selected) {
    const auto &hyps = run.hypotheses.at(item->item_id);
    if (hyps.size() != item->reference_segments.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "item " + item->item_id + ": " + std::to_string(hyps.size()) +
                      " hypotheses for " + std::to_string(item->reference_segments.size()) +
                      " segments");
    }
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      pairs.emplace_back(hyps[i], item->reference_segments[i]);
      by_subject[item->subject].emplace_back(hyps[i], item->reference_segments[i]);
    }
  }
  report.segments = pairs.size();
  report.corpus = chrf_corpus(pairs, options.params);
  if (pairs.size() >= 2) {
    BootstrapOptions b;
    b.resamples = options.resamples;
    b.seed = options.seed;
    b.params = options.params;
    report.bootstrap = bootstrap_ci(pairs, b);
  } else {
    report.bootstrap.mean = report.bootstrap.ci_low = report.bootstrap.ci_high =
        report.corpus.score;
    report.bootstrap.n = 0;
    report.bootstrap.method = SummaryMethod::kBootstrap;
  }
  for (const auto &[subject, subject_pairs] : by_subject) {
    report.per_subject.push_back(
        {subject, chrf_corpus(subject_pairs, options.params).score, subject_pairs.size()});
  }
  return report;
}

// ---------------------------------------------------------------------------

AnnotationBatch make_annotation_batch(const std::vector<SystemRun> &runs,
                                      const std::vector<EvalItem> &items,
                                      const std::vector<std::string> &annotators,
                                      const BatchOptions &options) {
  if (runs.size() < 2) {
    throw Error(ErrorCode::kInsufficientSystems,
                "an annotation batch compares at least two systems, got " +
                    std::to_string(runs.size()));
  }
  if (runs.size() > 26) throw Error(ErrorCode::kInvalidArgument, "at most 26 systems");
  std::set<std::string> system_ids;
  for (const auto &r : runs) {
    if (!system_ids.insert(r.system_id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate system id '" + r.system_id + "'");
    }
  }
  if (annotators.empty()) throw Error(ErrorCode::kInvalidArgument, "no annotators");
  if (std::set<std::string>(annotators.begin(), annotators.end()).size() != annotators.size()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate annotator id");
  }
  if (options.redundancy < 1 || options.redundancy > annotators.size()) {
    throw Error(ErrorCode::kInvalidArgument, "redundancy must be between 1 and the number of "
                                             "annotators");
  }

  std::vector<std::string> missing;
  for (const auto &item : items) {
    for (const auto &r : runs) {
      auto it = r.hypotheses.find(item.item_id);
      if (it == r.hypotheses.end()) {
        missing.push_back(item.item_id);
        break;
      }
      if (it->second.size() != item.source_segments.size()) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "system " + r.system_id + ", item " + item.item_id +
                        ": hypothesis count differs from segment count");
      }
    }
  }
  if (!missing.empty()) throw MissingHypotheses(std::move(missing));

  std::vector<std::pair<std::size_t, std::size_t>> units;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t s = 0; s < items[i].source_segments.size(); ++s) units.emplace_back(i, s);
  }
  if (options.limit && *options.limit < units.size()) {
    std::vector<std::size_t> order(units.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 engine(options.seed);
    for (std::size_t i = 0; i < *options.limit; ++i) {
      auto j = i + uniform_index(order.size() - i, engine);
      std::swap(order[i], order[j]);
    }
    order.resize(*options.limit);
    std::sort(order.begin(), order.end());
    std::vector<std::pair<std::size_t, std::size_t>> sampled;
    for (auto k : order) sampled.push_back(units[k]);
    units = std::move(sampled);
  }

  AnnotationBatch batch;
  const std::size_t r = options.redundancy;
  std::size_t counter = 0;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto &item = items[units[u].first];
    const std::size_t seg = units[u].second;
    for (std::size_t c = 0; c < r; ++c) {
      AnnotationTask task;
      char id[32];
      std::snprintf(id, sizeof id, "t%06zu", ++counter);
      task.task_id = id;
      task.annotator_id = annotators[(u * r + c) % annotators.size()];
      task.item_id = item.item_id;
      task.segment_index = seg;
      task.source_text = item.source_segments[seg];
      task.reference_text = item.reference_segments[seg];
      task.permutation_seed = fnv1a(std::to_string(options.seed) + '\x1f' + task.annotator_id +
                                    '\x1f' + item.item_id + '\x1f' + std::to_string(seg));

      std::vector<std::size_t> perm(runs.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::mt19937_64 engine(task.permutation_seed);
      for (std::size_t i = perm.size() - 1; i > 0; --i) {
        std::swap(perm[i], perm[uniform_index(i + 1, engine)]);
      }
      auto &labels = batch.key[task.task_id];
      for (std::size_t i = 0; i < perm.size(); ++i) {
        const auto &run = runs[perm[i]];
        task.candidates.push_back({label_for(i), run.hypotheses.at(item.item_id)[seg]});
        labels[label_for(i)] = run.system_id;
      }
      batch.tasks.push_back(std::move(task));
    }
  }
  return batch;
}

std::string task_to_json(const AnnotationTask &task) {
  ojson candidates = ojson::array();
  for (const auto &c : task.candidates) {
    candidates.push_back({{"blind_label", c.blind_label}, {"text", c.text}});
  }
  ojson j = {{"task_id", task.task_id},
             {"annotator_id", task.annotator_id},
             {"item_id", task.item_id},
             {"segment_index", task.segment_index},
             {"source_text", task.source_text},
             {"reference_text", task.reference_text},
             {"candidates", candidates},
             {"permutation_seed", task.permutation_seed}};
  return j.dump();
}

std::string serialize_tasks(const std::vector<AnnotationTask> &tasks) {
  std::string out;
  for (const auto &t : tasks) out += task_to_json(t) + "\n";
  return out;
}

std::vector<AnnotationTask> parse_tasks(std::string_view jsonl) {
  std::vector<AnnotationTask> tasks;
  std::set<std::string> ids;
  for_each_line(jsonl, [&](int line_no, std::string_view line) {
    auto j = parse_object(line, line_no);
    AnnotationTask t;
    t.task_id = get_string(j, "task_id", line_no);
    t.annotator_id = get_string(j, "annotator_id", line_no);
    t.item_id = get_string(j, "item_id", line_no);
    t.source_text = get_string(j, "source_text", line_no, true);
    t.reference_text = get_string(j, "reference_text", line_no, true);
    if (!j.contains("segment_index") || !j["segment_index"].is_number_unsigned()) {
      throw SchemaError(line_no, "segment_index", "expected a non-negative integer");
    }
    t.segment_index = j["segment_index"].get<std::size_t>();
    if (!j.contains("permutation_seed") || !j["permutation_seed"].is_number_unsigned()) {
      throw SchemaError(line_no, "permutation_seed", "expected a non-negative integer");
    }
    t.permutation_seed = j["permutation_seed"].get<std::uint64_t>();
    if (!j.contains("candidates") || !j["candidates"].is_array()) {
      throw SchemaError(line_no, "candidates", "expected an array");
    }
    for (const auto &c : j["candidates"]) {
      if (!c.is_object()) throw SchemaError(line_no, "candidates", "expected objects");
      t.candidates.push_back(
          {get_string(c, "blind_label", line_no), get_string(c, "text", line_no, true)});
    }
    if (!ids.insert(t.task_id).second) {
      throw SchemaError(line_no, "task_id", "duplicate id '" + t.task_id + "'");
    }
    tasks.push_back(std::move(t));
  });
  return tasks;
}

std::vector<AnnotationTask> load_tasks(const std::filesystem::path &path) {
  return parse_tasks(read_file(path));
}

std::string serialize_key(const AnnotationKey &key) {
  std::string out;
  for (const auto &[task_id, labels] : key) {
    ojson j = {{"task_id", task_id}};
    for (const auto &[label, system] : labels) j[label] = system;
    out += j.dump() + "\n";
  }
  return out;
}

AnnotationKey parse_key(std::string_view jsonl) {
  AnnotationKey key;
  for_each_line(jsonl, [&](int line_no, std::string_view line) {
    auto j = parse_object(line, line_no);
    auto task_id = get_string(j, "task_id", line_no);
    std::map<std::string, std::string> labels;
    for (const auto &[field, value] : j.items()) {
      if (field == "task_id") continue;
      if (!value.is_string()) throw SchemaError(line_no, field, "expected a system id");
      labels[field] = value.get<std::string>();
    }
    if (!key.emplace(task_id, std::move(labels)).second) {
      throw SchemaError(line_no, "task_id", "duplicate id '" + task_id + "'");
    }
  });
  return key;
}

AnnotationKey load_key(const std::filesystem::path &path) { return parse_key(read_file(path)); }

// ---------------------------------------------------------------------------

HumanScore parse_score(std::string_view line, int line_no) {
  auto j = parse_object(line, line_no);
  HumanScore s;
  s.task_id = get_string(j, "task_id", line_no);
  s.blind_label = get_string(j, "blind_label", line_no);
  s.annotator_id = get_string(j, "annotator_id", line_no);
  auto it = j.find("score");
  if (it == j.end()) throw SchemaError(line_no, "score", "missing");
  if (!it->is_number_integer()) throw SchemaError(line_no, "score", "expected an integer");
  auto value = it->get<std::int64_t>();
  if (value < 0 || value > 10) {
    throw SchemaError(line_no, "score", "out of range 0..10: " + std::to_string(value));
  }
  s.score = static_cast<int>(value);
  if (j.contains("timestamp")) s.timestamp = get_string(j, "timestamp", line_no, true);
  return s;
}

std::string score_to_json(const HumanScore &score) {
  ojson j = {{"task_id", score.task_id},
             {"blind_label", score.blind_label},
             {"score", score.score},
             {"annotator_id", score.annotator_id},
             {"timestamp", score.timestamp}};
  return j.dump();
}

std::vector<HumanScore> parse_scores(std::string_view jsonl) {
  std::vector<HumanScore> scores;
  for_each_line(jsonl, [&](int line_no, std::string_view line) {
    scores.push_back(parse_score(line, line_no));
  });
  return scores;
}

std::vector<HumanScore> load_scores(const std::filesystem::path &path) {
  return parse_scores(read_file(path));
}

std::vector<HumanScore> latest_scores(const std::vector<HumanScore> &scores) {
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> slot;
  std::vector<HumanScore> out;
  for (const auto &s : scores) {
    auto [it, inserted] = slot.emplace(std::make_tuple(s.task_id, s.blind_label, s.annotator_id),
                                       out.size());
    if (inserted) {
      out.push_back(s);
    } else {
      out[it->second] = s;
    }
  }
  return out;
}

std::string HumanReport::to_json() const {
  ojson sys = ojson::object();
  for (const auto &[id, summary] : systems) sys[id] = summary_json(summary);
  ojson ann = ojson::array();
  for (const auto &a : annotators) {
    ann.push_back({{"annotator_id", a.annotator_id}, {"mean", a.mean}, {"n", a.n}});
  }
  ojson j = {{"systems", sys}, {"annotators", ann}, {"scores", scores}};
  return j.dump();
}

HumanReport aggregate_annotations(const std::vector<HumanScore> &scores,
                                  const AnnotationKey &key) {
  std::map<std::string, std::vector<double>> by_system;
  std::map<std::string, std::vector<double>> by_annotator;
  auto latest = latest_scores(scores);
  for (const auto &s : latest) {
    auto task = key.find(s.task_id);
    if (task == key.end()) throw Error(ErrorCode::kUnknownTask, "unknown task '" + s.task_id + "'");
    auto label = task->second.find(s.blind_label);
    if (label == task->second.end()) {
      throw Error(ErrorCode::kUnknownLabel,
                  "task '" + s.task_id + "' has no label '" + s.blind_label + "'");
    }
    by_system[label->second].push_back(s.score);
    by_annotator[s.annotator_id].push_back(s.score);
  }
  HumanReport report;
  report.scores = latest.size();
  for (const auto &[system, values] : by_system) report.systems[system] = summarize_scores(values);
  for (const auto &[annotator, values] : by_annotator) {
    double sum = std::accumulate(values.begin(), values.end(), 0.0);
    report.annotators.push_back({annotator, sum / static_cast<double>(values.size()),
                                 values.size()});
  }
  return report;
}

// ---------------------------------------------------------------------------

const char *error_level_name(ErrorLevel level) {
  switch (level) {
    case ErrorLevel::kLexical:
      return "lexical";
    case ErrorLevel::kMorphological:
      return "morphological";
    case ErrorLevel::kSyntactic:
      return "syntactic";
  }
  return "lexical";
}

const char *term_cause_name(TermCause cause) {
  switch (cause) {
    case TermCause::kContextMistranslation:
      return "context_mistranslation";
    case TermCause::kUnseenTerm:
      return "unseen_term";
    case TermCause::kNoEquivalent:
      return "no_equivalent";
  }
  return "context_mistranslation";
}

ErrorAnnotation parse_error_annotation(std::string_view line, int line_no) {
  auto j = parse_object(line, line_no);
  ErrorAnnotation a;
  a.task_id = get_string(j, "task_id", line_no);
  auto level = get_string(j, "level", line_no);
  if (level == "lexical") {
    a.level = ErrorLevel::kLexical;
  } else if (level == "morphological") {
    a.level = ErrorLevel::kMorphological;
  } else if (level == "syntactic") {
    a.level = ErrorLevel::kSyntactic;
  } else {
    throw SchemaError(line_no, "level", "unknown level '" + level + "'");
  }
  if (j.contains("terminology_cause") && !j["terminology_cause"].is_null()) {
    auto cause = get_string(j, "terminology_cause", line_no);
    if (cause == "context_mistranslation") {
      a.terminology_cause = TermCause::kContextMistranslation;
    } else if (cause == "unseen_term") {
      a.terminology_cause = TermCause::kUnseenTerm;
    } else if (cause == "no_equivalent") {
      a.terminology_cause = TermCause::kNoEquivalent;
    } else {
      throw SchemaError(line_no, "terminology_cause", "unknown cause '" + cause + "'");
    }
    if (a.level != ErrorLevel::kLexical) {
      throw SchemaError(line_no, "terminology_cause", "only lexical errors carry a cause");
    }
  }
  if (j.contains("note")) a.note = get_string(j, "note", line_no, true);
  return a;
}

std::string error_annotation_to_json(const ErrorAnnotation &a) {
  ojson j = {{"task_id", a.task_id}, {"level", error_level_name(a.level)}};
  j["terminology_cause"] =
      a.terminology_cause ? ojson(term_cause_name(*a.terminology_cause)) : ojson(nullptr);
  j["note"] = a.note;
  return j.dump();
}

std::vector<ErrorAnnotation> load_error_annotations(const std::filesystem::path &path) {
  std::vector<ErrorAnnotation> out;
  for_each_line(read_file(path), [&](int line_no, std::string_view line) {
    out.push_back(parse_error_annotation(line, line_no));
  });
  return out;
}

std::string ErrorSummary::to_json() const {
  ojson j = {{"levels", levels}, {"causes", causes}, {"total", total}};
  return j.dump();
}

ErrorSummary error_summary(const std::vector<ErrorAnnotation> &annotations) {
  ErrorSummary s;
  for (auto l : {ErrorLevel::kLexical, ErrorLevel::kMorphological, ErrorLevel::kSyntactic}) {
    s.levels[error_level_name(l)] = 0;
  }
  for (auto c : {TermCause::kContextMistranslation, TermCause::kUnseenTerm,
                 TermCause::kNoEquivalent}) {
    s.causes[term_cause_name(c)] = 0;
  }
  for (const auto &a : annotations) {
    ++s.levels[error_level_name(a.level)];
    if (a.terminology_cause) ++s.causes[term_cause_name(*a.terminology_cause)];
  }
  s.total = annotations.size();
  return s;
}

std::string render_table(const std::vector<TableRow> &rows) {
  std::vector<std::array<std::string, 3>> cells = {{"system", "chrF", "human"}};
  for (const auto &r : rows) {
    cells.push_back({r.system, r.chrf ? render_interval(*r.chrf) : "-",
                     r.human ? render_moments(*r.human) : "-"});
  }
  std::array<std::size_t, 3> width{};
  for (const auto &row : cells) {
    for (std::size_t c = 0; c < 3; ++c) {
      width[c] = std::max(width[c], text::code_point_count(row[c]));
    }
  }
  std::string out;
  for (const auto &row : cells) {
    out += pad(row[0], width[0]) + "  " + pad(row[1], width[1]) + "  " + row[2] + "\n";
  }
  return out;
}

}  // namespace markmt
