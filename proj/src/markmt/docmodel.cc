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

#include "markmt/docmodel.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>

#include "markmt/error.h"
#include "markmt/text.h"

namespace markmt {

namespace {

constexpr std::array<std::string_view, 6> kVoidElements = {
    "br", "img", "hr", "input", "meta", "link"};

// Start tags that implicitly close an open <p> in HTML mode.
constexpr std::array<std::string_view, 18> kClosesParagraph = {
    "p",  "div", "ul", "ol", "li", "table", "h1",         "h2",  "h3",
    "h4", "h5",  "h6", "hr", "pre", "form", "blockquote", "section", "dl"};

bool contains(auto &list, std::string_view name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

bool is_raw_text_element(std::string_view name) {
  return name == "script" || name == "style";
}

bool is_name_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == ':' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
  return is_name_start(c) || std::isdigit(c) || c == '-' || c == '.';
}

bool is_xml_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const std::unordered_map<std::string_view, char32_t> &html_entities() {
  static const std::unordered_map<std::string_view, char32_t> table = {
      {"nbsp", 0xA0},   {"copy", 0xA9},   {"reg", 0xAE},    {"deg", 0xB0},
      {"plusmn", 0xB1}, {"sup2", 0xB2},   {"sup3", 0xB3},   {"middot", 0xB7},
      {"laquo", 0xAB},  {"raquo", 0xBB},  {"times", 0xD7},  {"divide", 0xF7},
      {"ndash", 0x2013}, {"mdash", 0x2014}, {"lsquo", 0x2018}, {"rsquo", 0x2019},
      {"sbquo", 0x201A}, {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"bdquo", 0x201E},
      {"hellip", 0x2026}, {"euro", 0x20AC}, {"minus", 0x2212}, {"micro", 0xB5},
      {"shy", 0xAD},    {"larr", 0x2190}, {"rarr", 0x2192}};
  return table;
}

class Parser {
 public:
  Parser(std::string_view input, MarkupFormat format)
      : in_(input), format_(format) {}

  MarkupDocument parse() {
    MarkupDocument doc;
    doc.format = format_;
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    check_encoding();

    bool have_root = false;
    while (true) {
      skip_space();
      if (at_end()) break;
      if (peek("<!--")) {
        Opaque o{read_until("-->", "unterminated comment")};
        (have_root ? doc.epilog : doc.prolog).push_back(std::move(o));
      } else if (peek("<?")) {
        std::size_t start = pos_;
        Opaque o{read_until("?>", "unterminated processing instruction")};
        if (!have_root && o.raw.rfind("<?xml", 0) == 0) {
          doc.declared_encoding = declared_encoding(o.raw, start);
        }
        (have_root ? doc.epilog : doc.prolog).push_back(std::move(o));
      } else if (peek("<!")) {
        if (have_root) fail("markup declaration after root element");
        doc.prolog.push_back(Opaque{read_until(">", "unterminated declaration")});
      } else if (peek("<") && !peek("</")) {
        if (have_root) fail("multiple root elements");
        doc.root = parse_root();
        have_root = true;
      } else {
        fail(have_root ? "content after root element" : "expected root element");
      }
    }
    if (!have_root) fail("document has no root element");
    return doc;
  }

 private:
  bool html() const { return format_ == MarkupFormat::kHtml; }
  bool at_end() const { return pos_ >= in_.size(); }
  bool peek(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  [[noreturn]] void fail(const std::string &message) const { fail_at(pos_, message); }

  [[noreturn]] void fail_at(std::size_t offset, const std::string &message) const {
    int line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < offset && i < in_.size(); ++i) {
      if (in_[i] == '\n') {
        ++line;
        line_start = i + 1;
      }
    }
    auto column = static_cast<int>(
        text::code_point_count(in_.substr(line_start, offset - line_start)) + 1);
    throw MalformedMarkup(line, column, message);
  }

  void check_encoding() {
    std::size_t pos = pos_;
    while (pos < in_.size()) {
      std::size_t at = pos;
      if (text::next_code_point(in_, pos) < 0) {
        throw Error(ErrorCode::kDecode,
                    "invalid UTF-8 sequence at byte " + std::to_string(at));
      }
    }
  }

  std::optional<std::string> declared_encoding(const std::string &decl,
                                               std::size_t offset) const {
    auto at = decl.find("encoding");
    if (at == std::string::npos) return std::nullopt;
    at = decl.find_first_of("\"'", at);
    if (at == std::string::npos) fail_at(offset, "malformed XML declaration");
    auto end = decl.find(decl[at], at + 1);
    if (end == std::string::npos) fail_at(offset, "malformed XML declaration");
    std::string enc = decl.substr(at + 1, end - at - 1);
    auto lower = ascii_lower(enc);
    if (lower != "utf-8" && lower != "utf8") {
      throw Error(ErrorCode::kDecode, "unsupported declared encoding '" + enc +
                                          "' (only UTF-8 is accepted)");
    }
    return enc;
  }

  void skip_space() {
    while (!at_end() && is_xml_space(in_[pos_])) ++pos_;
  }

  std::string read_until(std::string_view terminator, const char *message) {
    auto end = in_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(message);
    std::string raw(in_.substr(pos_, end + terminator.size() - pos_));
    pos_ = end + terminator.size();
    return raw;
  }

  std::string read_name() {
    std::size_t start = pos_;
    if (at_end() || !is_name_start(static_cast<unsigned char>(in_[pos_]))) {
      fail("expected a name");
    }
    while (!at_end() && is_name_char(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    std::string name(in_.substr(start, pos_ - start));
    return html() ? ascii_lower(name) : name;
  }

  // Decodes character references in [begin, end).
  std::string decode(std::size_t begin, std::size_t end) const {
    std::string out;
    out.reserve(end - begin);
    std::size_t i = begin;
    while (i < end) {
      char c = in_[i];
      if (c != '&') {
        out.push_back(c);
        ++i;
        continue;
      }
      auto semi = in_.find(';', i);
      if (semi == std::string_view::npos || semi >= end || semi - i > 12) {
        if (html()) {
          out.push_back('&');
          ++i;
          continue;
        }
        fail_at(i, "unterminated entity reference");
      }
      std::string_view name = in_.substr(i + 1, semi - i - 1);
      if (auto cp = resolve_entity(name)) {
        text::append_utf8(out, *cp);
      } else if (html()) {
        out.append(in_.substr(i, semi + 1 - i));
      } else {
        fail_at(i, "unknown entity '&" + std::string(name) + ";'");
      }
      i = semi + 1;
    }
    return out;
  }

  std::optional<char32_t> resolve_entity(std::string_view name) const {
    if (name == "amp") return U'&';
    if (name == "lt") return U'<';
    if (name == "gt") return U'>';
    if (name == "quot") return U'"';
    if (name == "apos") return U'\'';
    if (!name.empty() && name[0] == '#') {
      bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      auto digits = name.substr(hex ? 2 : 1);
      if (digits.empty()) return std::nullopt;
      std::uint32_t value = 0;
      for (char d : digits) {
        int v;
        if (d >= '0' && d <= '9') v = d - '0';
        else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
        else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
        else return std::nullopt;
        value = value * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (value > 0x10FFFF) return std::nullopt;
      }
      if (value == 0 || (value >= 0xD800 && value <= 0xDFFF)) return std::nullopt;
      return static_cast<char32_t>(value);
    }
    if (html()) {
      auto it = html_entities().find(name);
      if (it != html_entities().end()) return it->second;
    }
    return std::nullopt;
  }

  // Parses `<name attr...>` or `<name .../>` with pos_ on '<'. Returns true
  // when the tag closed itself.
  bool parse_start_tag(Element &element) {
    ++pos_;
    element.name = read_name();
    while (true) {
      std::size_t before = pos_;
      skip_space();
      if (at_end()) fail("unterminated start tag <" + element.name + ">");
      if (peek("/>")) {
        pos_ += 2;
        return true;
      }
      if (peek(">")) {
        ++pos_;
        return false;
      }
      if (before == pos_) fail("expected whitespace between attributes");
      std::size_t attr_at = pos_;
      Attribute attr;
      attr.name = read_name();
      skip_space();
      if (peek("=")) {
        ++pos_;
        skip_space();
        if (peek("\"") || peek("'")) {
          char quote = in_[pos_++];
          auto end = in_.find(quote, pos_);
          if (end == std::string_view::npos) fail("unterminated attribute value");
          if (!html() && in_.substr(pos_, end - pos_).find('<') != std::string_view::npos) {
            fail("'<' in attribute value");
          }
          attr.value = decode(pos_, end);
          pos_ = end + 1;
        } else if (html()) {
          std::size_t start = pos_;
          while (!at_end() && !is_xml_space(in_[pos_]) && in_[pos_] != '>' &&
                 !peek("/>")) {
            ++pos_;
          }
          attr.value = decode(start, pos_);
        } else {
          fail("attribute value must be quoted");
        }
      } else if (!html()) {
        fail("attribute '" + attr.name + "' has no value");
      }
      bool duplicate = std::any_of(
          element.attributes.begin(), element.attributes.end(),
          [&](const Attribute &a) { return a.name == attr.name; });
      if (duplicate) {
        if (!html()) fail_at(attr_at, "duplicate attribute '" + attr.name + "'");
        continue;
      }
      element.attributes.push_back(std::move(attr));
    }
  }

  static void append_text(std::vector<Node> &children, std::string text) {
    if (text.empty()) return;
    if (!children.empty()) {
      if (auto *t = children.back().text()) {
        t->content += text;
        return;
      }
    }
    children.emplace_back(Text{std::move(text)});
  }

  void close_top(std::vector<Element> &stack, Element &root_out, bool &done) {
    Element finished = std::move(stack.back());
    stack.pop_back();
    if (stack.empty()) {
      root_out = std::move(finished);
      done = true;
    } else {
      stack.back().children.emplace_back(std::move(finished));
    }
  }

  Element parse_root() {
    std::vector<Element> stack;
    Element root;
    bool done = false;

    auto open = [&](Element element, bool self_closed) {
      if (html()) {
        while (!stack.empty() && stack.back().name == "p" &&
               contains(kClosesParagraph, element.name)) {
          close_top(stack, root, done);
        }
        if (element.name == "li" && !stack.empty() && stack.back().name == "li") {
          close_top(stack, root, done);
        }
        if (done) fail("multiple root elements");
      }
      bool is_void = html() && is_void_element(element.name);
      stack.push_back(std::move(element));
      if (self_closed || is_void) close_top(stack, root, done);
    };

    while (!done) {
      if (at_end()) {
        while (html() && !stack.empty() &&
               (stack.back().name == "p" || stack.back().name == "li")) {
          close_top(stack, root, done);
        }
        if (done) break;
        fail("unclosed element <" + stack.back().name + ">");
      }
      if (peek("<!--")) {
        stack.back().children.emplace_back(
            Opaque{read_until("-->", "unterminated comment")});
      } else if (peek("<![CDATA[")) {
        pos_ += 9;
        auto end = in_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        append_text(stack.back().children, std::string(in_.substr(pos_, end - pos_)));
        pos_ = end + 3;
      } else if (peek("<?")) {
        stack.back().children.emplace_back(
            Opaque{read_until("?>", "unterminated processing instruction")});
      } else if (peek("<!")) {
        if (!html()) fail("markup declaration inside element content");
        stack.back().children.emplace_back(
            Opaque{read_until(">", "unterminated declaration")});
      } else if (peek("</")) {
        std::size_t tag_at = pos_;
        pos_ += 2;
        std::string name = read_name();
        skip_space();
        if (!peek(">")) fail("expected '>' to end </" + name + ">");
        ++pos_;
        if (stack.empty()) fail_at(tag_at, "unexpected end tag </" + name + ">");
        if (stack.back().name == name) {
          close_top(stack, root, done);
          continue;
        }
        if (!html()) {
          fail_at(tag_at, "mismatched end tag </" + name + ">, expected </" +
                              stack.back().name + ">");
        }
        if (is_void_element(name)) continue;
        auto it = std::find_if(stack.rbegin(), stack.rend(),
                               [&](const Element &e) { return e.name == name; });
        bool recoverable =
            it != stack.rend() &&
            std::all_of(stack.rbegin(), it, [](const Element &e) {
              return e.name == "p" || e.name == "li";
            });
        if (!recoverable) fail_at(tag_at, "unexpected end tag </" + name + ">");
        while (stack.back().name != name) close_top(stack, root, done);
        close_top(stack, root, done);
      } else if (peek("<")) {
        Element element;
        bool self_closed = parse_start_tag(element);
        bool raw = html() && !self_closed && is_raw_text_element(element.name);
        std::string name = element.name;
        open(std::move(element), self_closed);
        if (raw) {
          std::string close = "</" + name;
          std::size_t end = pos_;
          while (true) {
            end = in_.find("</", end);
            if (end == std::string_view::npos) fail("unterminated <" + name + ">");
            if (ascii_lower(in_.substr(end, close.size())) == close) break;
            end += 2;
          }
          append_text(stack.back().children, std::string(in_.substr(pos_, end - pos_)));
          pos_ = end;
        }
      } else {
        auto end = in_.find('<', pos_);
        if (end == std::string_view::npos) end = in_.size();
        append_text(stack.back().children, decode(pos_, end));
        pos_ = end;
      }
    }
    return root;
  }

  std::string_view in_;
  MarkupFormat format_;
  std::size_t pos_ = 0;
};

void serialize_element(const Element &element, MarkupFormat format, std::string &out) {
  out.push_back('<');
  out += element.name;
  for (const auto &attr : element.attributes) {
    out.push_back(' ');
    out += attr.name;
    out += "=\"";
    out += escape_attribute(attr.value);
    out.push_back('"');
  }
  bool html = format == MarkupFormat::kHtml;
  if (element.children.empty() && (!html || is_void_element(element.name))) {
    out += "/>";
    return;
  }
  out.push_back('>');
  bool raw = html && is_raw_text_element(element.name);
  for (const auto &child : element.children) {
    if (raw && child.text()) {
      out += child.text()->content;
    } else {
      serialize_node(child, format, out);
    }
  }
  out += "</";
  out += element.name;
  out.push_back('>');
}

void append_text_content(const Element &element, std::string &out) {
  for (const auto &child : element.children) {
    if (const auto *t = child.text()) {
      out += t->content;
    } else if (const auto *e = child.element()) {
      append_text_content(*e, out);
    }
  }
}

}  // namespace

const char *format_name(MarkupFormat format) {
  return format == MarkupFormat::kHtml ? "html" : "xml";
}

MarkupFormat parse_format_name(std::string_view name) {
  if (name == "html") return MarkupFormat::kHtml;
  if (name == "xml") return MarkupFormat::kXml;
  throw Error(ErrorCode::kInvalidArgument, "unknown markup format '" + std::string(name) + "'");
}

const std::string *Element::attribute(std::string_view key) const {
  for (const auto &attr : attributes) {
    if (attr.name == key) return &attr.value;
  }
  return nullptr;
}

bool operator==(const Element &a, const Element &b) {
  return a.name == b.name && a.attributes == b.attributes && a.children == b.children;
}

std::string NodePath::to_string() const {
  std::string out = "r";
  for (auto i : indices) {
    out.push_back('.');
    out += std::to_string(i);
  }
  return out;
}

NodePath NodePath::parse(std::string_view s) {
  if (s.empty() || s[0] != 'r') {
    throw Error(ErrorCode::kInvalidArgument, "bad node path '" + std::string(s) + "'");
  }
  NodePath path;
  auto parts = text::split(s.substr(1), '.');
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto &p = parts[k];
    if (p.empty() || !std::all_of(p.begin(), p.end(), ::isdigit)) {
      throw Error(ErrorCode::kInvalidArgument, "bad node path '" + std::string(s) + "'");
    }
    path.indices.push_back(std::stoul(p));
  }
  if (parts.size() == 1 && !parts[0].empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bad node path '" + std::string(s) + "'");
  }
  return path;
}

NodePath NodePath::child(std::size_t index) const {
  NodePath out = *this;
  out.indices.push_back(index);
  return out;
}

const Element *MarkupDocument::resolve_element(const NodePath &path) const {
  const Element *current = &root;
  for (auto i : path.indices) {
    if (i >= current->children.size()) return nullptr;
    current = current->children[i].element();
    if (current == nullptr) return nullptr;
  }
  return current;
}

Element *MarkupDocument::resolve_element(const NodePath &path) {
  return const_cast<Element *>(std::as_const(*this).resolve_element(path));
}

bool is_void_element(std::string_view name) { return contains(kVoidElements, name); }

MarkupDocument parse_document(std::string_view bytes, MarkupFormat format) {
  return Parser(bytes, format).parse();
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_attribute(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void serialize_node(const Node &node, MarkupFormat format, std::string &out) {
  if (const auto *e = node.element()) {
    serialize_element(*e, format, out);
  } else if (const auto *t = node.text()) {
    out += escape_text(t->content);
  } else {
    out += node.opaque()->raw;
  }
}

std::string serialize_document(const MarkupDocument &doc) {
  std::string out;
  for (const auto &o : doc.prolog) {
    out += o.raw;
    out.push_back('\n');
  }
  serialize_element(doc.root, doc.format, out);
  for (const auto &o : doc.epilog) {
    out.push_back('\n');
    out += o.raw;
  }
  return out;
}

void canonicalize_children(std::vector<Node> &children) {
  std::vector<Node> merged;
  merged.reserve(children.size());
  for (auto &child : children) {
    if (auto *t = child.text()) {
      if (t->content.empty()) continue;
      if (!merged.empty() && merged.back().text()) {
        merged.back().text()->content += t->content;
        continue;
      }
    } else if (auto *e = child.element()) {
      canonicalize_children(e->children);
    }
    merged.push_back(std::move(child));
  }
  children = std::move(merged);
}

MarkupDocument canonicalize(const MarkupDocument &doc) {
  MarkupDocument out = doc;
  canonicalize_children(out.root.children);
  return out;
}

std::string text_content(const Element &element) {
  std::string out;
  append_text_content(element, out);
  return out;
}

}  // namespace markmt
