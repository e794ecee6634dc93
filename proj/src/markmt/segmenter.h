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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "markmt/docmodel.h"
#include "markmt/types.h"

namespace markmt {

/// Splits on Unicode whitespace; punctuation at either edge of a word becomes
/// one token per character. Offsets are bytes into `text`.
std::vector<Token> tokenize(std::string_view text);

/// Case-folded abbreviations (each ending in '.') that never end a sentence.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(const std::vector<std::string> &entries);

  /// One abbreviation per line; blank lines and '#' comments ignored.
  static AbbreviationList load(const std::filesystem::path &path);

  bool contains(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::string> entries_;
};

/// Sentence boundaries fall after a run of `.`, `!`, `?` or `…` (optionally
/// followed by closing quotes or brackets) when whitespace and then an
/// uppercase letter or digit follows. A '.'-terminated word found in
/// `abbreviations` suppresses the boundary.
///
/// The returned ranges partition `text`: whitespace between two sentences is
/// attached to the end of the earlier one.
std::vector<CharRange> split_sentences(std::string_view text,
                                       const AbbreviationList &abbreviations = {});

struct ExtractionPolicy {
  std::vector<std::string> inline_tags = {"b",   "i",   "u",   "em",
                                          "strong", "sub", "sup", "span"};
  std::vector<std::string> skip_tags = {"script", "style"};
  std::vector<std::string> translatable_attributes = {"alt", "title"};
  AbbreviationList abbreviations;

  bool is_inline(std::string_view name) const;
  bool is_skipped(std::string_view name) const;
  bool is_translatable_attribute(std::string_view name) const;

  /// Key-value config: `key = a, b, c` lines with '#' comments. Keys are
  /// inline_tags, skip_tags, translatable_attributes and abbreviations_path
  /// (resolved against `base_dir` when relative).
  static ExtractionPolicy parse(std::string_view config,
                                const std::filesystem::path &base_dir);
  static ExtractionPolicy load(const std::filesystem::path &path);
};

/// Segments in document order. Throws Error(kNestingUnsupported) when an
/// inline element contains a block-level element or an opaque node.
std::vector<Segment> extract_segments(const MarkupDocument &doc,
                                      const ExtractionPolicy &policy = {});

/// Writes translations back into a copy of `doc`. Segments not listed keep
/// their source text. Translated spans are rebuilt as elements from their tag
/// snapshots; a span keeps its exact source byte range when neither the text
/// nor its token range changed. The result is canonicalized.
///
/// Throws Error(kLocationStale) for an unknown segment id and
/// Error(kSpanConflict) when spans of one segment partially overlap.
MarkupDocument reinsert_segments(const MarkupDocument &doc,
                                 const std::vector<TranslatedSegment> &translated,
                                 const ExtractionPolicy &policy = {});

enum class ExclusionReason { kImageBased, kSyllableBased, kCrossword, kGrammarPractice, kOther };

const char *exclusion_reason_name(ExclusionReason reason);

struct ExerciseMeta {
  std::string exercise_type;
  std::string subject;
  bool has_images_only = false;
  bool is_crossword = false;
  bool is_syllable_based = false;
  bool is_grammar_drill = false;
  /// Set by an editor to exclude an exercise for any other reason.
  bool manually_excluded = false;
};

struct ExerciseClass {
  bool translatable = true;
  ExclusionReason reason = ExclusionReason::kOther;

  static ExerciseClass Translatable() { return {}; }
  static ExerciseClass Excluded(ExclusionReason r) { return {false, r}; }
  friend bool operator==(const ExerciseClass &, const ExerciseClass &) = default;
};

/// Exercises whose purpose does not survive translation are excluded:
/// image-only and syllable exercises, crosswords and grammar drills.
ExerciseClass classify_exercise(const ExerciseMeta &meta);

}  // namespace markmt
