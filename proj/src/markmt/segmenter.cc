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

#include "markmt/segmenter.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "markmt/error.h"
#include "markmt/text.h"

namespace markmt {

namespace {

struct CodePoint {
  char32_t cp;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode_positions(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t at = pos;
    int c = text::next_code_point(s, pos);
    out.push_back({c < 0 ? U'�' : static_cast<char32_t>(c), at, pos});
  }
  return out;
}

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

bool is_closer(char32_t c) {
  switch (c) {
    case U')': case U']': case U'}': case U'"': case U'\'':
    case U'»': case U'›': case U'“': case U'”': case U'’':
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t c) {
  switch (c) {
    case U'(': case U'[': case U'"': case U'\'': case U'„':
    case U'‚': case U'«': case U'‹': case U'“': case U'‘':
      return true;
    default:
      return false;
  }
}

std::vector<std::string> parse_list(std::string_view value) {
  std::vector<std::string> out;
  for (auto &item : text::split(value, ',')) {
    auto trimmed = text::trim_ascii(item);
    if (!trimmed.empty()) out.push_back(trimmed);
  }
  return out;
}

bool list_contains(const std::vector<std::string> &list, std::string_view name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

// ---------------------------------------------------------------------------
// Extraction layout: text runs of inline content and the segments cut from
// them. reinsert_segments() re-derives the same layout from the source tree.

struct RunSpan {
  std::string marker;
  TagSnapshot tag;
  CharRange range;
  std::string parent;
  std::size_t order = 0;
};

struct Run {
  NodePath block;
  std::size_t child_begin = 0;
  std::size_t child_end = 0;
  std::string text;
  std::vector<RunSpan> spans;
  std::vector<CharRange> owned;
  std::size_t first_segment = 0;
};

struct Layout {
  std::vector<Run> runs;
  std::vector<Segment> segments;
};

std::string marker_for(std::size_t order) { return "m" + std::to_string(order); }

TokenRange token_range_for(const std::vector<Token> &tokens, long lead, CharRange owned_range,
                           bool &zero_token) {
  long begin = static_cast<long>(owned_range.begin) - lead;
  long end = static_cast<long>(owned_range.end) - lead;
  std::size_t first = tokens.size();
  std::size_t last = 0;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    auto ts = static_cast<long>(tokens[t].char_start);
    auto te = static_cast<long>(tokens[t].char_end);
    if (ts < end && te > begin) {
      first = std::min(first, t);
      last = t + 1;
    }
  }
  if (first < last && owned_range.size() > 0) {
    zero_token = false;
    return {first, last};
  }
  zero_token = true;
  std::size_t k = 0;
  while (k < tokens.size() && static_cast<long>(tokens[k].char_end) <= begin) ++k;
  return {k, k};
}

class Extractor {
 public:
  explicit Extractor(const ExtractionPolicy &policy) : policy_(policy) {}

  Layout run(const MarkupDocument &doc) {
    visit_block(doc.root, NodePath{});
    return std::move(layout_);
  }

 private:
  void emit_attributes(const Element &element, const NodePath &path) {
    for (const auto &attr : element.attributes) {
      if (!policy_.is_translatable_attribute(attr.name)) continue;
      auto [b, e] = text::trim_range(attr.value);
      if (b == e) continue;
      Segment seg;
      seg.segment_id = path.to_string() + "@" + attr.name;
      seg.text = attr.value.substr(b, e - b);
      seg.leading_space = attr.value.substr(0, b);
      seg.trailing_space = attr.value.substr(e);
      seg.tokens = tokenize(seg.text);
      seg.location = path;
      seg.attribute = attr.name;
      layout_.segments.push_back(std::move(seg));
    }
  }

  bool starts_run(const Node &node) const {
    if (node.text()) return true;
    const auto *e = node.element();
    return e != nullptr && policy_.is_inline(e->name);
  }

  void visit_block(const Element &element, const NodePath &path) {
    emit_attributes(element, path);
    const auto &children = element.children;
    std::size_t i = 0;
    while (i < children.size()) {
      if (starts_run(children[i])) {
        Run run;
        run.block = path;
        run.child_begin = i;
        while (i < children.size() && starts_run(children[i])) {
          if (const auto *t = children[i].text()) {
            run.text += t->content;
          } else {
            flatten_inline(*children[i].element(), path.child(i), "", run);
          }
          ++i;
        }
        run.child_end = i;
        finish_run(std::move(run));
        continue;
      }
      if (const auto *e = children[i].element()) {
        if (!policy_.is_skipped(e->name)) visit_block(*e, path.child(i));
      }
      ++i;
    }
  }

  void flatten_inline(const Element &element, const NodePath &path, const std::string &parent,
                      Run &run) {
    emit_attributes(element, path);
    std::size_t order = run.spans.size();
    run.spans.push_back({marker_for(order), TagSnapshot{element.name, element.attributes},
                         CharRange{run.text.size(), run.text.size()}, parent, order});
    std::string marker = run.spans.back().marker;
    for (std::size_t i = 0; i < element.children.size(); ++i) {
      const auto &child = element.children[i];
      if (const auto *t = child.text()) {
        run.text += t->content;
      } else if (const auto *e = child.element()) {
        if (!policy_.is_inline(e->name)) {
          throw Error(ErrorCode::kNestingUnsupported,
                      "inline <" + element.name + "> at " + path.to_string() +
                          " contains block-level <" + e->name + ">");
        }
        flatten_inline(*e, path.child(i), marker, run);
      } else {
        throw Error(ErrorCode::kNestingUnsupported,
                    "inline <" + element.name + "> at " + path.to_string() +
                        " contains a comment or processing instruction");
      }
    }
    run.spans[order].range.end = run.text.size();
  }

  void finish_run(Run run) {
    if (text::is_blank(run.text)) return;
    for (auto range : split_sentences(run.text, policy_.abbreviations)) {
      if (!run.owned.empty() &&
          text::is_blank(std::string_view(run.text).substr(range.begin, range.size()))) {
        run.owned.back().end = range.end;
      } else {
        run.owned.push_back(range);
      }
    }
    run.first_segment = layout_.segments.size();
    for (std::size_t s = 0; s < run.owned.size(); ++s) {
      CharRange owned = run.owned[s];
      std::string_view piece = std::string_view(run.text).substr(owned.begin, owned.size());
      auto [b, e] = text::trim_range(piece);
      Segment seg;
      seg.segment_id = run.block.to_string() + "#" + std::to_string(run.child_begin) + "." +
                       std::to_string(s);
      seg.leading_space = std::string(piece.substr(0, b));
      seg.text = std::string(piece.substr(b, e - b));
      seg.trailing_space = std::string(piece.substr(e));
      seg.tokens = tokenize(seg.text);
      seg.location = run.block;
      seg.run_child = run.child_begin;
      seg.sentence_index = s;
      bool last = s + 1 == run.owned.size();
      for (const auto &span : run.spans) {
        CharRange local;
        if (span.range.size() > 0) {
          std::size_t lo = std::max(span.range.begin, owned.begin);
          std::size_t hi = std::min(span.range.end, owned.end);
          if (lo >= hi) continue;
          local = {lo - owned.begin, hi - owned.begin};
        } else {
          std::size_t p = span.range.begin;
          bool inside = (p >= owned.begin && p < owned.end) || (last && p == owned.end);
          if (!inside) continue;
          local = {p - owned.begin, p - owned.begin};
        }
        InlineSpan out;
        out.marker_id = span.marker;
        out.tag = span.tag;
        out.char_range = local;
        out.parent_marker = span.parent;
        out.order = span.order;
        out.token_range =
            token_range_for(seg.tokens, static_cast<long>(b), local, out.zero_token);
        seg.spans.push_back(std::move(out));
      }
      layout_.segments.push_back(std::move(seg));
    }
    layout_.runs.push_back(std::move(run));
  }

  const ExtractionPolicy &policy_;
  Layout layout_;
};

// ---------------------------------------------------------------------------
// Run reconstruction.

struct Placed {
  std::string marker;
  TagSnapshot tag;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string parent;
  std::size_t order = 0;
  std::size_t segment = 0;

  bool empty() const { return begin == end; }
};

bool partially_overlap(const Placed &a, const Placed &b) {
  if (a.empty() || b.empty()) return false;
  return (a.begin < b.begin && b.begin < a.end && a.end < b.end) ||
         (b.begin < a.begin && a.begin < b.end && b.end < a.end);
}

Element shell(const TagSnapshot &tag) {
  Element e;
  e.name = tag.name;
  e.attributes = tag.attributes;
  return e;
}

std::vector<Node> build_nodes(const std::string &text, const std::vector<Placed> &spans) {
  std::vector<const Placed *> nonempty;
  std::vector<const Placed *> empties;
  for (const auto &s : spans) (s.empty() ? empties : nonempty).push_back(&s);
  std::sort(nonempty.begin(), nonempty.end(), [](const Placed *a, const Placed *b) {
    if (a->begin != b->begin) return a->begin < b->begin;
    if (a->end != b->end) return a->end > b->end;
    return a->order < b->order;
  });
  std::sort(empties.begin(), empties.end(),
            [](const Placed *a, const Placed *b) { return a->order < b->order; });

  // Empty elements nested directly inside another empty element at the same
  // position are emitted as its children.
  std::multimap<std::pair<std::size_t, std::string>, const Placed *> empty_children;
  std::set<std::pair<std::size_t, std::string>> empty_markers;
  for (const auto *e : empties) empty_markers.insert({e->begin, e->marker});
  std::map<std::size_t, std::vector<const Placed *>> top_empties;
  for (const auto *e : empties) {
    if (!e->parent.empty() && empty_markers.count({e->begin, e->parent})) {
      empty_children.insert({{e->begin, e->parent}, e});
    } else {
      top_empties[e->begin].push_back(e);
    }
  }

  std::set<std::size_t> points;
  for (const auto *s : nonempty) {
    points.insert(s->begin);
    points.insert(s->end);
  }
  for (const auto &[p, list] : top_empties) points.insert(p);

  struct Open {
    Element element;
    std::size_t end;
    std::string marker;
  };
  std::vector<Open> stack;
  std::vector<Node> root;
  std::size_t pos = 0;

  auto container = [&]() -> std::vector<Node> & {
    return stack.empty() ? root : stack.back().element.children;
  };
  auto emit_text = [&](std::size_t upto) {
    if (upto > pos) container().emplace_back(Text{text.substr(pos, upto - pos)});
    pos = std::max(pos, upto);
  };
  std::function<Element(const Placed *)> make_empty = [&](const Placed *e) {
    Element el = shell(e->tag);
    auto [lo, hi] = empty_children.equal_range({e->begin, e->marker});
    std::vector<const Placed *> kids;
    for (auto it = lo; it != hi; ++it) kids.push_back(it->second);
    std::sort(kids.begin(), kids.end(),
              [](const Placed *a, const Placed *b) { return a->order < b->order; });
    for (const auto *k : kids) el.children.emplace_back(make_empty(k));
    return el;
  };
  auto close_top = [&]() {
    Open o = std::move(stack.back());
    stack.pop_back();
    container().emplace_back(std::move(o.element));
  };

  std::size_t next = 0;
  for (std::size_t p : points) {
    emit_text(p);
    std::vector<const Placed *> pending;
    if (auto it = top_empties.find(p); it != top_empties.end()) pending = it->second;
    std::vector<bool> done(pending.size(), false);
    auto emit_where = [&](auto predicate) {
      for (std::size_t k = 0; k < pending.size(); ++k) {
        if (!done[k] && predicate(pending[k])) {
          container().emplace_back(make_empty(pending[k]));
          done[k] = true;
        }
      }
    };

    while (!stack.empty() && stack.back().end == p) {
      const std::string marker = stack.back().marker;
      emit_where([&](const Placed *e) { return e->parent == marker; });
      close_top();
    }
    std::set<std::string> opening;
    for (std::size_t k = next; k < nonempty.size() && nonempty[k]->begin == p; ++k) {
      opening.insert(nonempty[k]->marker);
    }
    emit_where([&](const Placed *e) { return !opening.count(e->parent); });
    while (next < nonempty.size() && nonempty[next]->begin == p) {
      const Placed *s = nonempty[next++];
      stack.push_back({shell(s->tag), s->end, s->marker});
      emit_where([&](const Placed *e) { return e->parent == s->marker; });
    }
  }
  emit_text(text.size());
  while (!stack.empty()) close_top();
  canonicalize_children(root);
  return root;
}

struct SegmentBounds {
  std::size_t text_begin;
  std::size_t text_end;
};

std::vector<Node> rebuild_run(const Run &run, const std::vector<Segment> &segments,
                              const std::unordered_map<std::string, const TranslatedSegment *>
                                  &translations) {
  std::string text;
  std::vector<Placed> placed;
  std::vector<SegmentBounds> bounds;
  std::size_t count = run.owned.size();

  for (std::size_t s = 0; s < count; ++s) {
    const Segment &seg = segments[run.first_segment + s];
    auto it = translations.find(seg.segment_id);
    const TranslatedSegment *tr = it == translations.end() ? nullptr : it->second;
    std::size_t offset = text.size();
    text += seg.leading_space;
    std::size_t text_begin = text.size();
    text += tr ? tr->text : seg.text;
    std::size_t text_end = text.size();
    text += seg.trailing_space;
    bounds.push_back({text_begin, text_end});

    std::vector<Placed> local;
    auto place = [&](const InlineSpan &span, std::size_t b, std::size_t e) {
      local.push_back({span.marker_id, span.tag, b, e, span.parent_marker, span.order, s});
    };
    if (tr == nullptr) {
      for (const auto &span : seg.spans) {
        place(span, offset + span.char_range->begin, offset + span.char_range->end);
      }
    } else {
      std::vector<Token> tokens = tr->tokens;
      if (tokens.empty() && !tr->text.empty()) tokens = tokenize(tr->text);
      bool same_text = tr->text == seg.text;
      auto count_marker = [](const std::vector<InlineSpan> &list, const std::string &m) {
        return std::count_if(list.begin(), list.end(),
                             [&](const InlineSpan &x) { return x.marker_id == m; });
      };
      for (const auto &span : tr->spans) {
        const InlineSpan *source = nullptr;
        if (same_text && count_marker(tr->spans, span.marker_id) == 1 &&
            count_marker(seg.spans, span.marker_id) == 1) {
          for (const auto &src : seg.spans) {
            if (src.marker_id == span.marker_id && src.token_range == span.token_range) {
              source = &src;
            }
          }
        }
        if (source != nullptr) {
          place(span, offset + source->char_range->begin, offset + source->char_range->end);
          continue;
        }
        const auto &r = span.token_range;
        if (r.begin > r.end || r.end > tokens.size()) {
          throw Error(ErrorCode::kSpanConflict, "span " + span.marker_id + " of segment " +
                                                    seg.segment_id + " lies outside its tokens");
        }
        if (!r.empty()) {
          place(span, text_begin + tokens[r.begin].char_start,
                text_begin + tokens[r.end - 1].char_end);
        } else {
          std::size_t p = r.begin >= tokens.size() ? text_end
                                                   : text_begin + tokens[r.begin].char_start;
          place(span, p, p);
        }
      }
    }
    for (std::size_t a = 0; a < local.size(); ++a) {
      for (std::size_t b = a + 1; b < local.size(); ++b) {
        if (partially_overlap(local[a], local[b])) {
          throw Error(ErrorCode::kSpanConflict, "spans " + local[a].marker + " and " +
                                                    local[b].marker + " of segment " +
                                                    seg.segment_id + " partially overlap");
        }
      }
    }
    placed.insert(placed.end(), local.begin(), local.end());
  }

  // Re-join fragments of one element that continue across a sentence
  // boundary, unless the joined span would cross another span.
  for (std::size_t s = 0; s + 1 < count; ++s) {
    bool merged_any = true;
    while (merged_any) {
      merged_any = false;
      for (std::size_t a = 0; a < placed.size(); ++a) {
      if (placed[a].segment != s || placed[a].end < bounds[s].text_end) continue;
      std::size_t b = placed.size();
      for (std::size_t k = 0; k < placed.size(); ++k) {
        if (placed[k].segment == s + 1 && placed[k].marker == placed[a].marker &&
            placed[k].begin <= bounds[s + 1].text_begin &&
            (b == placed.size() || placed[k].begin < placed[b].begin)) {
          b = k;
        }
      }
      if (b == placed.size()) continue;
      Placed merged = placed[a];
      merged.end = placed[b].end;
      merged.segment = s + 1;
      bool conflict = false;
      for (std::size_t k = 0; k < placed.size() && !conflict; ++k) {
        if (k != a && k != b) conflict = partially_overlap(merged, placed[k]);
      }
      if (conflict) continue;
      placed[a] = merged;
      placed.erase(placed.begin() + static_cast<long>(b));
      merged_any = true;
      break;
      }
    }
  }
  return build_nodes(text, placed);
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  auto cps = decode_positions(text);
  std::size_t i = 0;
  auto push = [&](std::size_t b, std::size_t e) {
    tokens.push_back({std::string(text.substr(b, e - b)), b, e});
  };
  while (i < cps.size()) {
    if (text::is_space(cps[i].cp)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !text::is_space(cps[j].cp)) ++j;
    std::size_t lo = i;
    std::size_t hi = j;
    while (lo < hi && text::is_punct(cps[lo].cp)) ++lo;
    if (lo == hi) {
      for (std::size_t k = i; k < j; ++k) push(cps[k].begin, cps[k].end);
    } else {
      while (hi > lo && text::is_punct(cps[hi - 1].cp)) --hi;
      for (std::size_t k = i; k < lo; ++k) push(cps[k].begin, cps[k].end);
      push(cps[lo].begin, cps[hi - 1].end);
      for (std::size_t k = hi; k < j; ++k) push(cps[k].begin, cps[k].end);
    }
    i = j;
  }
  return tokens;
}

AbbreviationList::AbbreviationList(const std::vector<std::string> &entries) {
  for (const auto &e : entries) {
    auto trimmed = text::trim_ascii(e);
    if (!trimmed.empty()) entries_.push_back(text::fold_case(trimmed));
  }
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

AbbreviationList AbbreviationList::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read abbreviation list " + path.string());
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    auto trimmed = text::trim_ascii(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    entries.push_back(trimmed);
  }
  return AbbreviationList(entries);
}

bool AbbreviationList::contains(std::string_view word) const {
  return std::binary_search(entries_.begin(), entries_.end(), text::fold_case(word));
}

std::vector<CharRange> split_sentences(std::string_view text,
                                       const AbbreviationList &abbreviations) {
  if (text.empty()) return {};
  auto cps = decode_positions(text);
  std::vector<std::size_t> boundaries;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!is_terminator(cps[i].cp)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && is_terminator(cps[j].cp)) ++j;
    std::size_t k = j;
    while (k < cps.size() && is_closer(cps[k].cp)) ++k;
    std::size_t w = k;
    while (w < cps.size() && text::is_space(cps[w].cp)) ++w;
    if (w == k || w == cps.size()) {
      i = j;
      continue;
    }
    std::size_t n = w;
    while (n < cps.size() && is_opener(cps[n].cp)) ++n;
    bool starts_sentence =
        n < cps.size() && (text::is_upper(cps[n].cp) || text::is_digit(cps[n].cp));
    if (starts_sentence && j == i + 1 && cps[i].cp == U'.') {
      std::size_t s = i;
      while (s > 0 && !text::is_space(cps[s - 1].cp)) --s;
      while (s < i && is_opener(cps[s].cp)) ++s;
      auto word = text.substr(cps[s].begin, cps[i].end - cps[s].begin);
      if (abbreviations.contains(word)) starts_sentence = false;
    }
    if (starts_sentence) boundaries.push_back(cps[w].begin);
    i = j;
  }
  std::vector<CharRange> ranges;
  std::size_t start = 0;
  for (auto b : boundaries) {
    ranges.push_back({start, b});
    start = b;
  }
  ranges.push_back({start, text.size()});
  return ranges;
}

bool ExtractionPolicy::is_inline(std::string_view name) const {
  return list_contains(inline_tags, name);
}

bool ExtractionPolicy::is_skipped(std::string_view name) const {
  return list_contains(skip_tags, name);
}

bool ExtractionPolicy::is_translatable_attribute(std::string_view name) const {
  return list_contains(translatable_attributes, name);
}

ExtractionPolicy ExtractionPolicy::parse(std::string_view config,
                                         const std::filesystem::path &base_dir) {
  ExtractionPolicy policy;
  int line_no = 0;
  for (const auto &raw : text::split(config, '\n')) {
    ++line_no;
    auto line = text::trim_ascii(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw SchemaError(line_no, line, "expected 'key = value'");
    }
    auto key = text::trim_ascii(line.substr(0, eq));
    auto value = text::trim_ascii(line.substr(eq + 1));
    if (key == "inline_tags") {
      policy.inline_tags = parse_list(value);
    } else if (key == "skip_tags") {
      policy.skip_tags = parse_list(value);
    } else if (key == "translatable_attributes") {
      policy.translatable_attributes = parse_list(value);
    } else if (key == "abbreviations_path") {
      std::filesystem::path p(value);
      if (p.is_relative()) p = base_dir / p;
      policy.abbreviations = AbbreviationList::load(p);
    } else {
      throw SchemaError(line_no, key, "unknown policy key");
    }
  }
  return policy;
}

ExtractionPolicy ExtractionPolicy::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read policy file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.parent_path());
}

std::vector<Segment> extract_segments(const MarkupDocument &doc,
                                      const ExtractionPolicy &policy) {
  return Extractor(policy).run(doc).segments;
}

MarkupDocument reinsert_segments(const MarkupDocument &doc,
                                 const std::vector<TranslatedSegment> &translated,
                                 const ExtractionPolicy &policy) {
  MarkupDocument out = canonicalize(doc);
  if (translated.empty()) return out;

  Layout layout = Extractor(policy).run(out);
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < layout.segments.size(); ++i) {
    by_id[layout.segments[i].segment_id] = i;
  }
  std::unordered_map<std::string, const TranslatedSegment *> translations;
  for (const auto &t : translated) {
    if (!by_id.count(t.segment_id)) {
      throw Error(ErrorCode::kLocationStale,
                  "segment '" + t.segment_id + "' does not resolve in the document");
    }
    translations[t.segment_id] = &t;
  }

  bool attributes_changed = false;
  for (const auto &seg : layout.segments) {
    if (!seg.attribute) continue;
    auto it = translations.find(seg.segment_id);
    if (it == translations.end()) continue;
    Element *element = out.resolve_element(seg.location);
    if (element == nullptr) {
      throw Error(ErrorCode::kLocationStale, "segment '" + seg.segment_id + "' is stale");
    }
    for (auto &attr : element->attributes) {
      if (attr.name == *seg.attribute) {
        attr.value = seg.leading_space + it->second->text + seg.trailing_space;
      }
    }
    attributes_changed = true;
  }
  if (attributes_changed) layout = Extractor(policy).run(out);

  for (auto run = layout.runs.rbegin(); run != layout.runs.rend(); ++run) {
    bool touched = false;
    for (std::size_t s = 0; s < run->owned.size(); ++s) {
      touched |= translations.count(layout.segments[run->first_segment + s].segment_id) > 0;
    }
    if (!touched) continue;
    Element *block = out.resolve_element(run->block);
    if (block == nullptr || run->child_end > block->children.size()) {
      throw Error(ErrorCode::kLocationStale,
                  "text run at " + run->block.to_string() + " does not resolve");
    }
    auto nodes = rebuild_run(*run, layout.segments, translations);
    auto &children = block->children;
    children.erase(children.begin() + static_cast<long>(run->child_begin),
                   children.begin() + static_cast<long>(run->child_end));
    children.insert(children.begin() + static_cast<long>(run->child_begin),
                    std::make_move_iterator(nodes.begin()),
                    std::make_move_iterator(nodes.end()));
  }
  return canonicalize(out);
}

const char *exclusion_reason_name(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::kImageBased: return "image_based";
    case ExclusionReason::kSyllableBased: return "syllable_based";
    case ExclusionReason::kCrossword: return "crossword";
    case ExclusionReason::kGrammarPractice: return "grammar_practice";
    case ExclusionReason::kOther: return "other";
  }
  return "other";
}

ExerciseClass classify_exercise(const ExerciseMeta &meta) {
  auto type = text::fold_case(meta.exercise_type);
  auto has = [&](std::string_view needle) { return type.find(needle) != std::string::npos; };
  if (meta.has_images_only || type == "image_based" || type == "image_only") {
    return ExerciseClass::Excluded(ExclusionReason::kImageBased);
  }
  if (meta.is_syllable_based || has("syllable")) {
    return ExerciseClass::Excluded(ExclusionReason::kSyllableBased);
  }
  if (meta.is_crossword || has("crossword")) {
    return ExerciseClass::Excluded(ExclusionReason::kCrossword);
  }
  if (meta.is_grammar_drill || type == "grammar_practice" || type == "grammar_drill") {
    return ExerciseClass::Excluded(ExclusionReason::kGrammarPractice);
  }
  if (meta.manually_excluded) return ExerciseClass::Excluded(ExclusionReason::kOther);
  return ExerciseClass::Translatable();
}

}  // namespace markmt
