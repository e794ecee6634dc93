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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "markmt/types.h"

namespace markmt {

enum class MatchMode { kExact, kLemmaPrefix };

struct GlossaryEntry {
  std::string source_term;
  std::string target_term;
  /// Empty or "*" applies in every domain.
  std::string domain;
  MatchMode match = MatchMode::kExact;
  /// Known wrong renderings of the term.
  std::vector<std::string> wrong_variants;

  friend bool operator==(const GlossaryEntry &, const GlossaryEntry &) = default;
};

class Glossary {
 public:
  Glossary() = default;

  /// Throws SchemaError when (source_term, domain) repeats, compared
  /// case-folded.
  explicit Glossary(std::vector<GlossaryEntry> entries);

  /// TSV `source<TAB>target<TAB>domain<TAB>exact|lemma_prefix` with an
  /// optional fifth column of wrong variants separated by '|'.
  static Glossary parse(std::string_view tsv);
  static Glossary load(const std::filesystem::path &path);

  /// Appends the entries of `other`; same duplicate rule as the constructor.
  void merge(const Glossary &other);

  const std::vector<GlossaryEntry> &entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<GlossaryEntry> entries_;
};

/// Characters compared by MatchMode::kLemmaPrefix.
inline constexpr std::size_t kLemmaPrefixLength = 5;

enum class TermStatus { kOk, kMissing, kMismatched };

const char *term_status_name(TermStatus status);

struct TermFinding {
  std::string segment_id;
  std::string source_term;
  std::string expected_target;
  TermStatus status = TermStatus::kMissing;
  std::optional<std::string> found_text;

  friend bool operator==(const TermFinding &, const TermFinding &) = default;
};

/// One finding per glossary term occurring in the source, in order of first
/// occurrence. Source terms are matched on case-folded tokens, longest term
/// first; a source token belongs to at most one term. A term is ok when its
/// target occurs in `hypothesis`, mismatched when only a wrong variant does,
/// and missing otherwise. Entries of another domain are ignored; a
/// domain-specific entry shadows a catch-all entry for the same term.
std::vector<TermFinding> check_terminology(const Segment &src_segment,
                                           std::string_view hypothesis,
                                           const Glossary &glossary,
                                           std::string_view domain);

std::vector<TermFinding> check_terminology(std::string_view segment_id,
                                           std::string_view source_text,
                                           std::string_view hypothesis,
                                           const Glossary &glossary,
                                           std::string_view domain);

}  // namespace markmt
