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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "markmt/aligner.h"
#include "markmt/backends.h"
#include "markmt/glossary.h"
#include "markmt/segmenter.h"
#include "markmt/types.h"

namespace markmt {

enum class DocumentFormat { kHtml, kXml, kText };

const char *document_format_name(DocumentFormat format);
/// Throws Error(kInvalidArgument).
DocumentFormat parse_document_format(std::string_view name);

struct DocumentRequest {
  DocumentFormat format = DocumentFormat::kHtml;
  std::string content;
  std::string source_lang;
  std::string target_lang;
  std::string domain;
  bool check_glossary = false;
};

struct SegmentResult {
  std::string segment_id;
  std::string source_text;
  std::string target_text;
  std::vector<Token> source_tokens;
  std::vector<Token> target_tokens;
  AlignmentLinks links;
  std::vector<ProjectionWarning> warnings;
};

struct DocumentResult {
  std::string content;
  std::vector<SegmentResult> segments;
  std::vector<TermFinding> term_findings;
  std::string backend_id;

  /// Response body; identical requests give identical bytes. A non-empty
  /// `session_id` is included as a field.
  std::string to_json(const std::string &session_id = {}) const;
  /// One `{"segment_id", "marker_id", "kind"}` object per line.
  std::string warnings_jsonl() const;
};

struct PipelineConfig {
  ExtractionPolicy policy;
  /// t(target | source) and t(source | target). Used only when the backend
  /// returns no alignments; with neither, spans fall back to proportional
  /// placement.
  std::shared_ptr<const LexiconTable> forward_lexicon;
  std::shared_ptr<const LexiconTable> reverse_lexicon;
  Glossary glossary;
};

/// parse -> canonicalize -> extract -> translate -> align -> project ->
/// reinsert -> terminology check. Stateless after construction; translate()
/// may run concurrently.
class Pipeline {
 public:
  Pipeline(std::shared_ptr<Backend> backend, PipelineConfig config);

  DocumentResult translate(const DocumentRequest &request) const;

  const Backend &backend() const { return *backend_; }
  const PipelineConfig &config() const { return config_; }

 private:
  AlignmentLinks align(const std::vector<Token> &src, const std::vector<Token> &tgt) const;

  std::shared_ptr<Backend> backend_;
  PipelineConfig config_;
};

}  // namespace markmt
