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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "markmt/metrics.h"

namespace markmt {

enum class Subject { kBiology, kChemistry, kGeography, kOther };
enum class Split { kDev, kTest };

const char *subject_name(Subject subject);
const char *split_name(Split split);
/// Throws Error(kInvalidArgument) for an unknown name.
Split parse_split(std::string_view name);

struct EvalItem {
  std::string item_id;
  Subject subject = Subject::kOther;
  std::string exercise_type;
  std::vector<std::string> source_segments;
  std::vector<std::string> reference_segments;
  Split split = Split::kDev;

  friend bool operator==(const EvalItem &, const EvalItem &) = default;
};

/// JSONL, one item per line. Throws SchemaError{line, field} for invalid
/// records, duplicate item ids and empty input.
std::vector<EvalItem> parse_evalset(std::string_view jsonl);
std::vector<EvalItem> load_evalset(const std::filesystem::path &path);
std::string serialize_evalset(const std::vector<EvalItem> &items);
void save_evalset(const std::filesystem::path &path, const std::vector<EvalItem> &items);

struct SplitCounts {
  std::size_t dev = 0;
  std::size_t test = 0;

  friend bool operator==(const SplitCounts &, const SplitCounts &) = default;
};

SplitCounts split_counts(const std::vector<EvalItem> &items);

struct SystemRun {
  std::string system_id;
  std::map<std::string, std::vector<std::string>> hypotheses;
};

/// JSONL `{"system_id"?, "item_id", "hypotheses": [...]}`; records without a
/// system_id take `default_system_id`. All records must agree on it.
SystemRun parse_run(std::string_view jsonl, const std::string &default_system_id);
/// The default system id is the file stem.
SystemRun load_run(const std::filesystem::path &path);

struct SubjectScore {
  Subject subject = Subject::kOther;
  double chrf = 0.0;
  std::size_t segments = 0;
};

struct EvalReport {
  std::string system_id;
  Split split = Split::kDev;
  ChrFReport corpus;
  ScoreSummary bootstrap;
  std::vector<SubjectScore> per_subject;
  std::size_t items = 0;
  std::size_t segments = 0;

  std::string to_json() const;
};

struct EvalOptions {
  int resamples = 1000;
  std::uint64_t seed = 1;
  ChrFParams params;
};

/// Scores `run` on the items of `split`. Throws MissingHypotheses, and
/// Error(kDimensionMismatch) when a hypothesis list has the wrong length.
EvalReport evaluate_run(const SystemRun &run, const std::vector<EvalItem> &items, Split split,
                        const EvalOptions &options = {});

struct Candidate {
  std::string blind_label;
  std::string text;

  friend bool operator==(const Candidate &, const Candidate &) = default;
};

struct AnnotationTask {
  std::string task_id;
  std::string annotator_id;
  std::string item_id;
  std::size_t segment_index = 0;
  std::string source_text;
  std::string reference_text;
  std::vector<Candidate> candidates;
  std::uint64_t permutation_seed = 0;

  friend bool operator==(const AnnotationTask &, const AnnotationTask &) = default;
};

/// task_id -> blind label -> system_id.
using AnnotationKey = std::map<std::string, std::map<std::string, std::string>>;

struct AnnotationBatch {
  std::vector<AnnotationTask> tasks;
  AnnotationKey key;
};

struct BatchOptions {
  std::uint64_t seed = 1;
  /// Annotate a seeded sample of this many segments instead of all.
  std::optional<std::size_t> limit;
  /// Distinct annotators per segment.
  std::size_t redundancy = 1;
};

/// Segments (in item order) go round-robin to annotators, so loads differ
/// by at most one. Candidate order within a task is a permutation seeded by
/// (seed, annotator, item, segment); labels A, B, C... follow that order.
/// Throws Error(kInsufficientSystems) for fewer than two runs,
/// MissingHypotheses when a run does not cover the items, and
/// Error(kInvalidArgument) for no annotators or redundancy out of range.
AnnotationBatch make_annotation_batch(const std::vector<SystemRun> &runs,
                                      const std::vector<EvalItem> &items,
                                      const std::vector<std::string> &annotators,
                                      const BatchOptions &options = {});

std::string task_to_json(const AnnotationTask &task);
std::string serialize_tasks(const std::vector<AnnotationTask> &tasks);
std::vector<AnnotationTask> parse_tasks(std::string_view jsonl);
std::vector<AnnotationTask> load_tasks(const std::filesystem::path &path);

/// JSONL `{"task_id": "...", "A": "system1", ...}`.
std::string serialize_key(const AnnotationKey &key);
AnnotationKey parse_key(std::string_view jsonl);
AnnotationKey load_key(const std::filesystem::path &path);

struct HumanScore {
  std::string task_id;
  std::string blind_label;
  int score = 0;
  std::string annotator_id;
  std::string timestamp;

  friend bool operator==(const HumanScore &, const HumanScore &) = default;
};

/// One JSON object. Throws SchemaError{line, field}; scores must be integers
/// in 0..10.
HumanScore parse_score(std::string_view json, int line = 1);
std::string score_to_json(const HumanScore &score);
std::vector<HumanScore> parse_scores(std::string_view jsonl);
std::vector<HumanScore> load_scores(const std::filesystem::path &path);

/// Later scores replace earlier ones for the same (task, label, annotator).
std::vector<HumanScore> latest_scores(const std::vector<HumanScore> &scores);

struct AnnotatorMean {
  std::string annotator_id;
  double mean = 0.0;
  std::size_t n = 0;
};

struct HumanReport {
  std::map<std::string, ScoreSummary> systems;
  std::vector<AnnotatorMean> annotators;
  std::size_t scores = 0;

  std::string to_json() const;
};

/// De-anonymizes through `key` and summarizes each system with
/// summarize_scores. Throws Error(kUnknownTask) or Error(kUnknownLabel).
HumanReport aggregate_annotations(const std::vector<HumanScore> &scores,
                                  const AnnotationKey &key);

enum class ErrorLevel { kLexical, kMorphological, kSyntactic };
enum class TermCause { kContextMistranslation, kUnseenTerm, kNoEquivalent };

const char *error_level_name(ErrorLevel level);
const char *term_cause_name(TermCause cause);

struct ErrorAnnotation {
  std::string task_id;
  ErrorLevel level = ErrorLevel::kLexical;
  std::optional<TermCause> terminology_cause;
  std::string note;

  friend bool operator==(const ErrorAnnotation &, const ErrorAnnotation &) = default;
};

/// Throws SchemaError; a terminology_cause is only allowed on lexical errors.
ErrorAnnotation parse_error_annotation(std::string_view json, int line = 1);
std::string error_annotation_to_json(const ErrorAnnotation &annotation);
std::vector<ErrorAnnotation> load_error_annotations(const std::filesystem::path &path);

struct ErrorSummary {
  std::map<std::string, std::size_t> levels;
  std::map<std::string, std::size_t> causes;
  std::size_t total = 0;

  std::string to_json() const;
};

/// Every level and cause is present in the result, zero when unseen.
ErrorSummary error_summary(const std::vector<ErrorAnnotation> &annotations);

struct TableRow {
  std::string system;
  std::optional<ScoreSummary> chrf;
  std::optional<ScoreSummary> human;
};

/// Plain-text table with columns system, chrF (mean ± CI half-width) and
/// human (mean ± sd); missing cells print as "-".
std::string render_table(const std::vector<TableRow> &rows);

}  // namespace markmt
