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

#include <sstream>
#include <string>
#include <vector>

#include "markmt/glossary.h"
#include "markmt/text.h"
#include "testutil.h"

namespace markmt::testing {

struct TermCase {
  std::string id;
  std::string domain;
  std::string source;
  std::string hypothesis;
};

inline std::vector<std::vector<std::string>> tsv_rows(const std::string &relative) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(fixture(relative)));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(text::split(line, '\t'));
  }
  return rows;
}

inline std::vector<TermCase> term_cases() {
  std::vector<TermCase> out;
  for (auto &r : tsv_rows("terminology/segments.tsv")) out.push_back({r[0], r[1], r[2], r[3]});
  return out;
}

/// Hand-written expectations, one finding per row.
inline std::vector<TermFinding> expected_findings() {
  std::vector<TermFinding> out;
  for (auto &r : tsv_rows("terminology/expected.tsv")) {
    TermFinding f;
    f.segment_id = r[0];
    f.source_term = r[1];
    f.expected_target = r[2];
    f.status = r[3] == "ok" ? TermStatus::kOk
               : r[3] == "mismatched" ? TermStatus::kMismatched
                                      : TermStatus::kMissing;
    if (r.size() > 4 && !r[4].empty()) f.found_text = r[4];
    out.push_back(f);
  }
  return out;
}

inline std::vector<TermFinding> actual_findings(const Glossary &glossary) {
  std::vector<TermFinding> out;
  for (const auto &c : term_cases()) {
    auto f = check_terminology(c.id, c.source, c.hypothesis, glossary, c.domain);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

}  // namespace markmt::testing
