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

#include "markmt/tagproject.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "markmt/error.h"

namespace markmt {

namespace {

std::set<int> targets_of(const AlignmentLinks &links, std::size_t begin, std::size_t end) {
  std::set<int> targets;
  for (const auto &l : links.links) {
    if (l.src >= 0 && static_cast<std::size_t>(l.src) >= begin &&
        static_cast<std::size_t>(l.src) < end) {
      targets.insert(l.tgt);
    }
  }
  return targets;
}

std::size_t proportional(std::size_t start, std::size_t src_len, std::size_t tgt_len) {
  if (src_len == 0) return 0;
  auto p = std::lround(static_cast<double>(tgt_len) * static_cast<double>(start) /
                       static_cast<double>(src_len));
  return std::min(static_cast<std::size_t>(std::max(0L, p)), tgt_len);
}

}  // namespace

bool spans_partially_overlap(const TokenRange &a, const TokenRange &b) {
  if (a.empty() || b.empty()) return false;
  return (a.begin < b.begin && b.begin < a.end && a.end < b.end) ||
         (b.begin < a.begin && a.begin < b.end && b.end < a.end);
}

ProjectionResult project_spans(const Segment &src, const std::vector<Token> &tgt_tokens,
                               const AlignmentLinks &links) {
  ProjectionResult result;
  const std::size_t src_len = src.tokens.size();
  const std::size_t tgt_len = tgt_tokens.size();
  for (const auto &span : src.spans) {
    InlineSpan out = span;
    out.char_range.reset();
    const auto &r = span.token_range;
    if (r.empty()) {
      std::size_t k = r.begin;
      auto after = k < src_len ? targets_of(links, k, k + 1) : std::set<int>{};
      auto before = k > 0 ? targets_of(links, k - 1, k) : std::set<int>{};
      std::size_t pos;
      if (!after.empty()) {
        pos = static_cast<std::size_t>(*after.begin());
      } else if (!before.empty()) {
        pos = static_cast<std::size_t>(*before.rbegin()) + 1;
      } else {
        pos = proportional(k, src_len, tgt_len);
      }
      pos = std::min(pos, tgt_len);
      out.token_range = {pos, pos};
      out.zero_token = true;
    } else if (tgt_len == 0) {
      out.token_range = {0, 0};
      out.zero_token = true;
      result.warnings.push_back({span.marker_id, WarningKind::kSpanDropped});
    } else {
      auto targets = targets_of(links, r.begin, r.end);
      if (targets.empty()) {
        std::size_t pos = proportional(r.begin, src_len, tgt_len);
        out.token_range = {pos, pos};
        out.zero_token = true;
        result.warnings.push_back({span.marker_id, WarningKind::kUnalignedFallback});
      } else {
        auto lo = static_cast<std::size_t>(*targets.begin());
        auto hi = static_cast<std::size_t>(*targets.rbegin()) + 1;
        out.token_range = {lo, hi};
        out.zero_token = false;
        if (targets.size() != hi - lo) {
          result.warnings.push_back({span.marker_id, WarningKind::kSpanFragmented});
        }
      }
    }
    result.spans.push_back(std::move(out));
  }
  result.spans = repair_nesting(std::move(result.spans));
  return result;
}

std::vector<InlineSpan> repair_nesting(std::vector<InlineSpan> spans) {
  while (true) {
    bool changed = false;
    for (std::size_t a = 0; a < spans.size() && !changed; ++a) {
      for (std::size_t b = a + 1; b < spans.size() && !changed; ++b) {
        const auto &ra = spans[a].token_range;
        const auto &rb = spans[b].token_range;
        if (!spans_partially_overlap(ra, rb)) continue;
        // Ties go to the later span.
        std::size_t victim = ra.size() < rb.size() ? a : b;
        std::size_t other = victim == a ? b : a;
        TokenRange v = spans[victim].token_range;
        TokenRange o = spans[other].token_range;
        std::size_t cut = (o.begin > v.begin && o.begin < v.end) ? o.begin : o.end;
        InlineSpan first = spans[victim];
        InlineSpan second = spans[victim];
        first.token_range = {v.begin, cut};
        second.token_range = {cut, v.end};
        spans[victim] = std::move(first);
        spans.insert(spans.begin() + static_cast<long>(victim) + 1, std::move(second));
        changed = true;
      }
    }
    if (!changed) return spans;
  }
}

std::vector<std::string> word_translation(int src_index, std::size_t src_len,
                                          const AlignmentLinks &links,
                                          const std::vector<Token> &tgt_tokens) {
  if (src_index < 0 || static_cast<std::size_t>(src_index) >= src_len) {
    throw Error(ErrorCode::kIndexOutOfBounds,
                "source token " + std::to_string(src_index) + " outside a sentence of " +
                    std::to_string(src_len) + " tokens");
  }
  std::vector<std::string> out;
  for (const auto &l : links.links) {
    if (l.src == src_index && l.tgt >= 0 && static_cast<std::size_t>(l.tgt) < tgt_tokens.size()) {
      out.push_back(tgt_tokens[static_cast<std::size_t>(l.tgt)].text);
    }
  }
  return out;
}

}  // namespace markmt
