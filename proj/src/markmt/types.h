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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "markmt/docmodel.h"

namespace markmt {

/// Half-open byte range.
struct CharRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const CharRange &, const CharRange &) = default;
};

/// Half-open token index range.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  friend bool operator==(const TokenRange &, const TokenRange &) = default;
};

/// A token with byte offsets into the text it was cut from.
struct Token {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  friend bool operator==(const Token &, const Token &) = default;
};

/// Element shell of an inline tag: name and attributes, no children.
struct TagSnapshot {
  std::string name;
  std::vector<Attribute> attributes;

  friend bool operator==(const TagSnapshot &, const TagSnapshot &) = default;
};

/// Inline formatting over a token range of one segment.
///
/// One inline element produces one span per segment it touches; all of them
/// share its marker_id. `char_range` is the exact byte range the element
/// covered, measured in the segment's owned text (leading whitespace + text +
/// trailing whitespace); it is only known for spans taken from a source
/// document. `parent_marker` names the enclosing inline element, which places
/// empty elements on the right side of a tag boundary.
struct InlineSpan {
  std::string marker_id;
  TagSnapshot tag;
  TokenRange token_range;
  std::optional<CharRange> char_range;
  std::string parent_marker;
  std::size_t order = 0;
  /// The span covers no token: an empty element or whitespace only.
  bool zero_token = false;

  friend bool operator==(const InlineSpan &, const InlineSpan &) = default;
};

struct Segment {
  std::string segment_id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<InlineSpan> spans;
  /// Block element holding the text, or the element owning the attribute.
  NodePath location;
  std::optional<std::string> attribute;
  /// Index of the first child of `location` in this segment's text run.
  std::size_t run_child = 0;
  std::size_t sentence_index = 0;
  std::string leading_space;
  std::string trailing_space;
};

/// A word-alignment link; src == -1 is the NULL source word.
struct Link {
  int src = 0;
  int tgt = 0;

  friend auto operator<=>(const Link &, const Link &) = default;
};

/// Set of alignment links, kept sorted and duplicate free.
struct AlignmentLinks {
  std::vector<Link> links;

  AlignmentLinks() = default;
  explicit AlignmentLinks(std::vector<Link> l);

  void add(int src, int tgt);
  bool contains(int src, int tgt) const;
  std::size_t size() const { return links.size(); }
  friend bool operator==(const AlignmentLinks &, const AlignmentLinks &) = default;
};

enum class WarningKind { kUnalignedFallback, kSpanFragmented, kSpanDropped };

const char *warning_kind_name(WarningKind kind);

struct ProjectionWarning {
  std::string marker_id;
  WarningKind kind = WarningKind::kUnalignedFallback;

  friend bool operator==(const ProjectionWarning &, const ProjectionWarning &) = default;
};

struct TranslatedSegment {
  std::string segment_id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<InlineSpan> spans;
  AlignmentLinks links;
  std::vector<ProjectionWarning> warnings;
};

}  // namespace markmt
