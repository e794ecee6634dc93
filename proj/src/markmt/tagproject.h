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

#include <string>
#include <vector>

#include "markmt/types.h"

namespace markmt {

struct ProjectionResult {
  std::vector<InlineSpan> spans;
  std::vector<ProjectionWarning> warnings;
};

/// Projects the spans of `src` onto target tokens.
///
/// A span over source tokens I maps to the minimal contiguous cover of the
/// target tokens linked to I (NULL links ignored), with a span_fragmented
/// warning when those targets are not contiguous. With no linked target the
/// span becomes zero-width at round(|tgt| * start / |src|) and an
/// unaligned_fallback warning is recorded; against an empty target the span
/// is kept zero-width at 0 with span_dropped. Spans of empty elements are
/// anchored next to the projection of their neighbouring tokens. Nesting is
/// repaired afterwards.
ProjectionResult project_spans(const Segment &src, const std::vector<Token> &tgt_tokens,
                               const AlignmentLinks &links);

/// Splits the smaller (later, on ties) of every partially overlapping pair at
/// the other span's boundary until no partial overlap is left. Fragments keep
/// their marker_id and stay next to each other in the output order.
std::vector<InlineSpan> repair_nesting(std::vector<InlineSpan> spans);

bool spans_partially_overlap(const TokenRange &a, const TokenRange &b);

/// Target tokens linked to source token `src_index`, in target order.
/// Throws Error(kIndexOutOfBounds) unless 0 <= src_index < src_len.
std::vector<std::string> word_translation(int src_index, std::size_t src_len,
                                          const AlignmentLinks &links,
                                          const std::vector<Token> &tgt_tokens);

}  // namespace markmt
