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

#include "markmt/types.h"

#include <algorithm>

namespace markmt {

AlignmentLinks::AlignmentLinks(std::vector<Link> l) : links(std::move(l)) {
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
}

void AlignmentLinks::add(int src, int tgt) {
  Link link{src, tgt};
  auto it = std::lower_bound(links.begin(), links.end(), link);
  if (it == links.end() || *it != link) links.insert(it, link);
}

bool AlignmentLinks::contains(int src, int tgt) const {
  return std::binary_search(links.begin(), links.end(), Link{src, tgt});
}

const char *warning_kind_name(WarningKind kind) {
  switch (kind) {
    case WarningKind::kUnalignedFallback: return "unaligned_fallback";
    case WarningKind::kSpanFragmented: return "span_fragmented";
    case WarningKind::kSpanDropped: return "span_dropped";
  }
  return "unknown";
}

}  // namespace markmt
