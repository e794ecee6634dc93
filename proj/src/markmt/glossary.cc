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

#include "markmt/glossary.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "markmt/error.h"
#include "markmt/segmenter.h"
#include "markmt/text.h"

namespace markmt {

namespace {

bool is_catch_all(std::string_view domain) { return domain.empty() || domain == "*"; }

std::string fold_key(const GlossaryEntry &e) {
  return text::fold_case(e.source_term) + '\t' + (is_catch_all(e.domain) ? "*" : e.domain);
}

struct Word {
  std::string folded;
  std::u32string prefix;
  std::size_t begin;
  std::size_t end;
};

std::vector<Word> words_of(std::string_view s) {
  std::vector<Word> out;
  for (const auto &tok : tokenize(s)) {
    Word w;
    w.folded = text::fold_case(tok.text);
    w.prefix = text::to_u32(w.folded);
    if (w.prefix.size() > kLemmaPrefixLength) w.prefix.resize(kLemmaPrefixLength);
    w.begin = tok.char_start;
    w.end = tok.char_end;
    out.push_back(std::move(w));
  }
  return out;
}

bool word_matches(const Word &term, const Word &word, MatchMode mode) {
  if (term.folded == word.folded) return true;
  if (mode != MatchMode::kLemmaPrefix) return false;
  return term.prefix.size() == kLemmaPrefixLength && term.prefix == word.prefix;
}

bool matches_at(const std::vector<Word> &term, const std::vector<Word> &text, std::size_t pos,
                MatchMode mode, const std::vector<bool> *taken) {
  if (term.empty() || pos + term.size() > text.size()) return false;
  for (std::size_t k = 0; k < term.size(); ++k) {
    if (taken != nullptr && (*taken)[pos + k]) return false;
    if (!word_matches(term[k], text[pos + k], mode)) return false;
  }
  return true;
}

std::optional<std::string> find_in(std::string_view hypothesis, const std::vector<Word> &hyp_words,
                                   const std::string &phrase, MatchMode mode) {
  auto term = words_of(phrase);
  for (std::size_t pos = 0; pos < hyp_words.size(); ++pos) {
    if (matches_at(term, hyp_words, pos, mode, nullptr)) {
      std::size_t b = hyp_words[pos].begin;
      std::size_t e = hyp_words[pos + term.size() - 1].end;
      return std::string(hypothesis.substr(b, e - b));
    }
  }
  return std::nullopt;
}

MatchMode parse_mode(const std::string &s, int line) {
  if (s == "exact") return MatchMode::kExact;
  if (s == "lemma_prefix") return MatchMode::kLemmaPrefix;
  throw SchemaError(line, "match_mode", "expected exact or lemma_prefix, got '" + s + "'");
}

}  // namespace

const char *term_status_name(TermStatus status) {
  switch (status) {
    case TermStatus::kOk:
      return "ok";
    case TermStatus::kMissing:
      return "missing";
    case TermStatus::kMismatched:
      return "mismatched";
  }
  return "missing";
}

Glossary::Glossary(std::vector<GlossaryEntry> entries) {
  std::set<std::string> seen;
  for (auto &e : entries) {
    if (!seen.insert(fold_key(e)).second) {
      throw SchemaError(0, "source", "duplicate term '" + e.source_term + "' in domain '" +
                                         e.domain + "'");
    }
    entries_.push_back(std::move(e));
  }
}

void Glossary::merge(const Glossary &other) {
  std::set<std::string> seen;
  for (const auto &e : entries_) seen.insert(fold_key(e));
  for (const auto &e : other.entries_) {
    if (!seen.insert(fold_key(e)).second) {
      throw SchemaError(0, "source", "duplicate term '" + e.source_term + "' in domain '" +
                                         e.domain + "'");
    }
    entries_.push_back(e);
  }
}

Glossary Glossary::parse(std::string_view tsv) {
  std::vector<GlossaryEntry> entries;
  std::set<std::string> seen;
  int line_no = 0;
  for (const auto &raw : text::split(tsv, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::is_blank(line) || line[0] == '#') continue;
    auto fields = text::split(line, '\t');
    if (fields.size() < 4 || fields.size() > 5) {
      throw SchemaError(line_no, "line", "expected 4 or 5 tab-separated fields");
    }
    GlossaryEntry e;
    e.source_term = text::trim_ascii(fields[0]);
    e.target_term = text::trim_ascii(fields[1]);
    e.domain = text::trim_ascii(fields[2]);
    e.match = parse_mode(text::trim_ascii(fields[3]), line_no);
    if (e.source_term.empty()) throw SchemaError(line_no, "source", "empty term");
    if (e.target_term.empty()) throw SchemaError(line_no, "target", "empty term");
    if (fields.size() == 5) {
      for (const auto &v : text::split(fields[4], '|')) {
        auto t = text::trim_ascii(v);
        if (!t.empty()) e.wrong_variants.push_back(t);
      }
    }
    if (!seen.insert(fold_key(e)).second) {
      throw SchemaError(line_no, "source", "duplicate term '" + e.source_term + "' in domain '" +
                                               e.domain + "'");
    }
    entries.push_back(std::move(e));
  }
  Glossary g;
  g.entries_ = std::move(entries);
  return g;
}

Glossary Glossary::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read glossary " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::vector<TermFinding> check_terminology(const Segment &src_segment,
                                           std::string_view hypothesis,
                                           const Glossary &glossary,
                                           std::string_view domain) {
  return check_terminology(src_segment.segment_id, src_segment.text, hypothesis, glossary,
                           domain);
}

std::vector<TermFinding> check_terminology(std::string_view segment_id,
                                           std::string_view source_text,
                                           std::string_view hypothesis,
                                           const Glossary &glossary,
                                           std::string_view domain) {
  struct Candidate {
    const GlossaryEntry *entry;
    std::vector<Word> words;
    std::size_t cps;
  };

  // Domain-specific entries shadow catch-all ones for the same term.
  std::set<std::string> specific;
  for (const auto &e : glossary.entries()) {
    if (!is_catch_all(e.domain) && e.domain == domain) {
      specific.insert(text::fold_case(e.source_term));
    }
  }
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < glossary.entries().size(); ++i) {
    const auto &e = glossary.entries()[i];
    if (is_catch_all(e.domain)) {
      if (specific.count(text::fold_case(e.source_term))) continue;
    } else if (e.domain != domain) {
      continue;
    }
    auto words = words_of(e.source_term);
    if (words.empty()) continue;
    candidates.push_back({&e, std::move(words), text::code_point_count(e.source_term)});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto &a, const auto &b) {
    if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
    return a.cps > b.cps;
  });

  auto src_words = words_of(source_text);
  auto hyp_words = words_of(hypothesis);
  std::vector<bool> taken(src_words.size(), false);
  std::vector<std::pair<std::size_t, TermFinding>> found;
  for (const auto &c : candidates) {
    std::optional<std::size_t> first;
    for (std::size_t pos = 0; pos < src_words.size(); ++pos) {
      if (!matches_at(c.words, src_words, pos, c.entry->match, &taken)) continue;
      for (std::size_t k = 0; k < c.words.size(); ++k) taken[pos + k] = true;
      if (!first) first = pos;
      pos += c.words.size() - 1;
    }
    if (first) {
      TermFinding f;
      f.segment_id = std::string(segment_id);
      f.source_term = c.entry->source_term;
      f.expected_target = c.entry->target_term;
      if (auto hit = find_in(hypothesis, hyp_words, c.entry->target_term, c.entry->match)) {
        f.status = TermStatus::kOk;
        f.found_text = std::move(hit);
      } else {
        f.status = TermStatus::kMissing;
        for (const auto &wrong : c.entry->wrong_variants) {
          if (auto bad = find_in(hypothesis, hyp_words, wrong, c.entry->match)) {
            f.status = TermStatus::kMismatched;
            f.found_text = std::move(bad);
            break;
          }
        }
      }
      found.emplace_back(*first, std::move(f));
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });
  std::vector<TermFinding> out;
  for (auto &[pos, f] : found) out.push_back(std::move(f));
  return out;
}

}  // namespace markmt
