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

#include "markmt/pipeline.h"

#include "json.hpp"
#include "markmt/error.h"
#include "markmt/tagproject.h"
#include "markmt/text.h"

namespace markmt {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char *kTextRoot = "text";

MarkupDocument load_document(const DocumentRequest &request) {
  if (request.format == DocumentFormat::kText) {
    if (!text::is_valid_utf8(request.content)) {
      throw Error(ErrorCode::kDecode, "content is not valid UTF-8");
    }
    MarkupDocument doc;
    doc.format = MarkupFormat::kXml;
    doc.root.name = kTextRoot;
    if (!request.content.empty()) doc.root.children.emplace_back(Text{request.content});
    return doc;
  }
  auto format = request.format == DocumentFormat::kHtml ? MarkupFormat::kHtml : MarkupFormat::kXml;
  return canonicalize(parse_document(request.content, format));
}

std::string render_document(const MarkupDocument &doc, DocumentFormat format) {
  if (format == DocumentFormat::kText) return text_content(doc.root);
  return serialize_document(doc);
}

void check_links(const AlignmentLinks &links, std::size_t src_len, std::size_t tgt_len,
                 const std::string &segment_id) {
  for (const auto &l : links.links) {
    if (l.src < -1 || l.src >= static_cast<int>(src_len) || l.tgt < 0 ||
        l.tgt >= static_cast<int>(tgt_len)) {
      throw Error(ErrorCode::kProtocol, "backend alignment for " + segment_id +
                                            " links outside the sentence");
    }
  }
}

}  // namespace

const char *document_format_name(DocumentFormat format) {
  switch (format) {
    case DocumentFormat::kHtml:
      return "html";
    case DocumentFormat::kXml:
      return "xml";
    case DocumentFormat::kText:
      return "text";
  }
  return "html";
}

DocumentFormat parse_document_format(std::string_view name) {
  if (name == "html") return DocumentFormat::kHtml;
  if (name == "xml") return DocumentFormat::kXml;
  if (name == "text") return DocumentFormat::kText;
  throw Error(ErrorCode::kInvalidArgument,
              "format must be html, xml or text, got '" + std::string(name) + "'");
}

std::string DocumentResult::to_json(const std::string &session_id) const {
  ojson segs = ojson::array();
  for (const auto &s : segments) {
    ojson links = ojson::array();
    for (const auto &l : s.links.links) {
      if (l.src >= 0) links.push_back({l.src, l.tgt});
    }
    ojson warnings = ojson::array();
    for (const auto &w : s.warnings) {
      warnings.push_back({{"segment_id", s.segment_id},
                          {"marker_id", w.marker_id},
                          {"kind", warning_kind_name(w.kind)}});
    }
    segs.push_back({{"segment_id", s.segment_id},
                    {"source_text", s.source_text},
                    {"target_text", s.target_text},
                    {"alignment", links},
                    {"warnings", warnings}});
  }
  ojson findings = ojson::array();
  for (const auto &f : term_findings) {
    findings.push_back({{"segment_id", f.segment_id},
                        {"source_term", f.source_term},
                        {"expected_target", f.expected_target},
                        {"status", term_status_name(f.status)},
                        {"found_text", f.found_text ? ojson(*f.found_text) : ojson(nullptr)}});
  }
  ojson j = {{"content", content},
             {"segments", segs},
             {"term_findings", findings},
             {"backend", backend_id}};
  if (!session_id.empty()) j["session_id"] = session_id;
  return j.dump();
}

std::string DocumentResult::warnings_jsonl() const {
  std::string out;
  for (const auto &s : segments) {
    for (const auto &w : s.warnings) {
      ojson j = {{"segment_id", s.segment_id},
                 {"marker_id", w.marker_id},
                 {"kind", warning_kind_name(w.kind)}};
      out += j.dump() + "\n";
    }
  }
  return out;
}

Pipeline::Pipeline(std::shared_ptr<Backend> backend, PipelineConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
  if (!backend_) throw Error(ErrorCode::kInvalidArgument, "pipeline needs a backend");
}

AlignmentLinks Pipeline::align(const std::vector<Token> &src,
                               const std::vector<Token> &tgt) const {
  if (!config_.forward_lexicon) return {};
  auto s = token_texts(src);
  auto t = token_texts(tgt);
  auto forward = viterbi_align(s, t, *config_.forward_lexicon);
  if (!config_.reverse_lexicon) return forward;
  auto reverse = viterbi_align(t, s, *config_.reverse_lexicon);
  return symmetrize(forward, reverse, s.size(), t.size(), SymmetrizeMethod::kIntersection);
}

DocumentResult Pipeline::translate(const DocumentRequest &request) const {
  validate_request({{std::string()}, request.source_lang, request.target_lang, true});
  if (!backend_->supports(request.source_lang, request.target_lang)) {
    throw Error(ErrorCode::kUnsupportedPair, backend_->id() + " backend does not translate " +
                                                 request.source_lang + "->" +
                                                 request.target_lang);
  }
  auto doc = load_document(request);
  auto segments = extract_segments(doc, config_.policy);

  DocumentResult result;
  result.backend_id = backend_->id();
  if (segments.empty()) {
    result.content = render_document(doc, request.format);
    return result;
  }

  TranslationRequest batch;
  batch.source_lang = request.source_lang;
  batch.target_lang = request.target_lang;
  batch.want_alignment = true;
  for (const auto &s : segments) batch.segments.push_back(s.text);
  auto translated = backend_->translate_batch(batch);
  if (translated.translations.size() != segments.size() ||
      (translated.alignments && translated.alignments->size() != segments.size())) {
    throw Error(ErrorCode::kProtocol, "backend returned a result of the wrong length");
  }

  std::vector<TranslatedSegment> reinsert;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto &src = segments[i];
    SegmentResult seg;
    seg.segment_id = src.segment_id;
    seg.source_text = src.text;
    seg.target_text = translated.translations[i];
    seg.source_tokens = src.tokens;
    seg.target_tokens = tokenize(seg.target_text);
    if (translated.alignments) {
      seg.links = (*translated.alignments)[i];
      check_links(seg.links, src.tokens.size(), seg.target_tokens.size(), src.segment_id);
    } else {
      seg.links = align(src.tokens, seg.target_tokens);
    }
    auto projected = project_spans(src, seg.target_tokens, seg.links);
    seg.warnings = projected.warnings;

    TranslatedSegment t;
    t.segment_id = src.segment_id;
    t.text = seg.target_text;
    t.tokens = seg.target_tokens;
    t.spans = std::move(projected.spans);
    t.links = seg.links;
    t.warnings = seg.warnings;
    reinsert.push_back(std::move(t));

    if (request.check_glossary && !config_.glossary.empty()) {
      auto findings =
          check_terminology(src, seg.target_text, config_.glossary, request.domain);
      result.term_findings.insert(result.term_findings.end(), findings.begin(), findings.end());
    }
    result.segments.push_back(std::move(seg));
  }
  result.content = render_document(reinsert_segments(doc, reinsert, config_.policy),
                                   request.format);
  return result;
}

}  // namespace markmt
