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

#include "doctest.h"

#include <string>
#include <vector>

#include "generators.h"
#include "markmt/error.h"
#include "markmt/segmenter.h"
#include "markmt/tagproject.h"
#include "testutil.h"

using namespace markmt;

namespace {

std::vector<std::string> texts(const std::vector<Token> &tokens) {
  std::vector<std::string> out;
  for (const auto &t : tokens) out.push_back(t.text);
  return out;
}

TranslatedSegment as_is(const Segment &s) {
  AlignmentLinks links;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) links.add(static_cast<int>(i), static_cast<int>(i));
  return {s.segment_id, s.text, s.tokens, s.spans, links, {}};
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("").empty());
  CHECK(texts(tokenize("Ahoj, světe!")) == std::vector<std::string>{"Ahoj", ",", "světe", "!"});
  auto t = tokenize("a b");
  REQUIRE(t.size() == 2);
  CHECK(t[0].char_start == 0);
  CHECK(t[0].char_end == 1);
  CHECK(t[1].char_start == 2);
  CHECK(t[1].char_end == 3);
  CHECK(texts(tokenize("„Správně!“ řekl")) ==
        std::vector<std::string>{"„", "Správně", "!", "“", "řekl"});
  CHECK(texts(tokenize("H2O 3.14 e-mail")) ==
        std::vector<std::string>{"H2O", "3.14", "e-mail"});
}

TEST_CASE("sentence splitting") {
  auto r = split_sentences("A. B.");
  REQUIRE(r.size() == 2);
  CHECK(r[0] == CharRange{0, 3});
  CHECK(r[1] == CharRange{3, 5});

  CHECK(split_sentences("no terminal punctuation").size() == 1);

  AbbreviationList abbr({"tzv."});
  CHECK(split_sentences("Tzv. Pokus.", abbr).size() == 1);
  CHECK(split_sentences("Tzv. Pokus.").size() == 2);
  CHECK(split_sentences("Tzv. pokus.").size() == 1);

  CHECK(split_sentences("Kolik je 2 + 3? 5 je správně.").size() == 2);
  CHECK(split_sentences("Řekl: „Ano.“ Pak odešel.").size() == 2);
  CHECK(split_sentences("hodnota 3.5 a dál. ok").size() == 1);
  CHECK(split_sentences("").empty());
}

TEST_CASE("property: sentence ranges partition the text") {
  gen::Gen g(5);
  const std::vector<std::string> pieces = {"Ahoj", " ", ". ", "! ", "? ", "tzv. ", "Pes",
                                           "3", "… ", "„A.“ ", "x", "\n"};
  AbbreviationList abbr({"tzv."});
  for (int trial = 0; trial < 500; ++trial) {
    std::string s = g.text(pieces, 12);
    auto ranges = split_sentences(s, abbr);
    std::size_t at = 0;
    for (const auto &r : ranges) {
      CHECK(r.begin == at);
      CHECK(r.end > r.begin);
      at = r.end;
    }
    CHECK(at == s.size());
    for (const auto &tok : tokenize(s)) {
      CHECK(s.substr(tok.char_start, tok.char_end - tok.char_start) == tok.text);
    }
  }
}

TEST_CASE("abbreviation file") {
  auto list = AbbreviationList::load(testing::fixture("config/abbreviations.cs.txt"));
  CHECK(list.contains("tzv."));
  CHECK(list.contains("Např."));
  CHECK_FALSE(list.contains("pes."));
  CHECK_THROWS_AS(AbbreviationList::load("/nonexistent/abbr.txt"), Error);
}

TEST_CASE("extraction policy config") {
  auto policy = ExtractionPolicy::load(testing::fixture("config/policy.conf"));
  CHECK(policy.is_inline("label"));
  CHECK(policy.is_skipped("code"));
  CHECK(policy.is_translatable_attribute("placeholder"));
  CHECK(policy.abbreviations.contains("tzv."));
  CHECK_THROWS_AS(ExtractionPolicy::parse("bogus = 1\n", "."), Error);
}

TEST_CASE("extract segments") {
  auto doc = parse_document("<p>Hi <b>there</b></p>", MarkupFormat::kHtml);
  auto segs = extract_segments(doc);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].text == "Hi there");
  REQUIRE(segs[0].spans.size() == 1);
  CHECK(segs[0].spans[0].tag.name == "b");
  CHECK(segs[0].spans[0].token_range == TokenRange{1, 2});

  CHECK(extract_segments(parse_document("<p>One. Two.</p>", MarkupFormat::kHtml)).size() == 2);

  segs = extract_segments(parse_document("<p><script>x</script>ok</p>", MarkupFormat::kHtml));
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].text == "ok");

  segs = extract_segments(
      parse_document("<p><img alt=\"Mapa světa\" src=\"m.png\"/>Text</p>", MarkupFormat::kXml));
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].attribute == std::optional<std::string>("alt"));
  CHECK(segs[0].text == "Mapa světa");
  CHECK(segs[1].text == "Text");
}

TEST_CASE("spans crossing a sentence boundary are split per segment") {
  auto doc = parse_document("<p>One <b>two. Three</b> four.</p>", MarkupFormat::kXml);
  auto segs = extract_segments(doc);
  REQUIRE(segs.size() == 2);
  REQUIRE(segs[0].spans.size() == 1);
  REQUIRE(segs[1].spans.size() == 1);
  CHECK(segs[0].spans[0].marker_id == segs[1].spans[0].marker_id);
  CHECK(segs[0].spans[0].token_range == TokenRange{1, 3});
  CHECK(segs[1].spans[0].token_range == TokenRange{0, 1});
}

TEST_CASE("inline elements may not contain blocks or comments") {
  auto doc = parse_document("<p><b>x<div>y</div></b></p>", MarkupFormat::kXml);
  CHECK_THROWS_AS(extract_segments(doc), Error);
  doc = parse_document("<p><b>x<!-- c --></b></p>", MarkupFormat::kXml);
  try {
    extract_segments(doc);
    FAIL("expected NestingUnsupported");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kNestingUnsupported);
  }
}

TEST_CASE("reinsert") {
  auto doc = canonicalize(parse_document("<p>Hi <b>there</b></p>", MarkupFormat::kXml));
  auto segs = extract_segments(doc);
  CHECK(reinsert_segments(doc, {}) == doc);

  std::vector<TranslatedSegment> same;
  for (const auto &s : segs) same.push_back(as_is(s));
  CHECK(serialize_document(reinsert_segments(doc, same)) == "<p>Hi <b>there</b></p>");

  TranslatedSegment moved;
  moved.segment_id = segs[0].segment_id;
  moved.text = "X Y";
  moved.tokens = tokenize(moved.text);
  moved.spans = segs[0].spans;
  moved.spans[0].token_range = {0, 1};
  moved.spans[0].char_range.reset();
  CHECK(serialize_document(reinsert_segments(doc, {moved})) == "<p><b>X</b> Y</p>");

  moved.segment_id = "9#0.0";
  CHECK_THROWS_AS(reinsert_segments(doc, {moved}), Error);
}

TEST_CASE("reinsert rejects partially overlapping spans") {
  auto doc = canonicalize(parse_document("<p><b>a</b> <i>b</i> c</p>", MarkupFormat::kXml));
  auto segs = extract_segments(doc);
  REQUIRE(segs.size() == 1);
  auto t = as_is(segs[0]);
  t.text = "a b c";
  for (auto &s : t.spans) s.char_range.reset();
  t.spans[0].token_range = {0, 2};
  t.spans[1].token_range = {1, 3};
  try {
    reinsert_segments(doc, {t});
    FAIL("expected SpanConflict");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kSpanConflict);
  }
}

TEST_CASE("translated attributes are written back") {
  auto doc = canonicalize(
      parse_document("<div><img alt=\"Mapa\" src=\"m.png\"/></div>", MarkupFormat::kXml));
  auto segs = extract_segments(doc);
  REQUIRE(segs.size() == 1);
  auto t = as_is(segs[0]);
  t.text = "Карта";
  t.tokens = tokenize(t.text);
  CHECK(serialize_document(reinsert_segments(doc, {t})) ==
        "<div><img alt=\"Карта\" src=\"m.png\"/></div>");
}

TEST_CASE("classify exercises") {
  ExerciseMeta m;
  m.exercise_type = "crossword";
  CHECK(classify_exercise(m) == ExerciseClass::Excluded(ExclusionReason::kCrossword));
  m = {};
  m.subject = "biology";
  m.exercise_type = "multiple_choice";
  CHECK(classify_exercise(m) == ExerciseClass::Translatable());
  m = {};
  m.is_grammar_drill = true;
  CHECK(classify_exercise(m) == ExerciseClass::Excluded(ExclusionReason::kGrammarPractice));
  m = {};
  m.has_images_only = true;
  CHECK(classify_exercise(m) == ExerciseClass::Excluded(ExclusionReason::kImageBased));
  m = {};
  m.is_syllable_based = true;
  CHECK(classify_exercise(m) == ExerciseClass::Excluded(ExclusionReason::kSyllableBased));
  m = {};
  m.manually_excluded = true;
  CHECK(classify_exercise(m) == ExerciseClass::Excluded(ExclusionReason::kOther));
  CHECK(std::string(exclusion_reason_name(ExclusionReason::kCrossword)) == "crossword");
}
