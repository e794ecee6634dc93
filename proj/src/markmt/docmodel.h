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

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace markmt {

enum class MarkupFormat { kXml, kHtml };

const char *format_name(MarkupFormat format);
MarkupFormat parse_format_name(std::string_view name);

struct Node;

struct Attribute {
  std::string name;
  std::string value;

  friend bool operator==(const Attribute &, const Attribute &) = default;
};

struct Element {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<Node> children;

  const std::string *attribute(std::string_view key) const;
  friend bool operator==(const Element &, const Element &);
};

struct Text {
  std::string content;

  friend bool operator==(const Text &, const Text &) = default;
};

/// Comments, processing instructions and doctype declarations. Kept verbatim
/// (including their delimiters) and never translated.
struct Opaque {
  std::string raw;

  friend bool operator==(const Opaque &, const Opaque &) = default;
};

struct Node {
  std::variant<Element, Text, Opaque> value;

  Node(Element e) : value(std::move(e)) {}
  Node(Text t) : value(std::move(t)) {}
  Node(Opaque o) : value(std::move(o)) {}

  const Element *element() const { return std::get_if<Element>(&value); }
  Element *element() { return std::get_if<Element>(&value); }
  const Text *text() const { return std::get_if<Text>(&value); }
  Text *text() { return std::get_if<Text>(&value); }
  const Opaque *opaque() const { return std::get_if<Opaque>(&value); }

  friend bool operator==(const Node &a, const Node &b) { return a.value == b.value; }
};

/// Sequence of child indices from the root element.
struct NodePath {
  std::vector<std::size_t> indices;

  std::string to_string() const;
  static NodePath parse(std::string_view s);
  NodePath child(std::size_t index) const;

  friend bool operator==(const NodePath &, const NodePath &) = default;
};

struct MarkupDocument {
  Element root;
  MarkupFormat format = MarkupFormat::kXml;
  std::optional<std::string> declared_encoding;
  /// Opaque nodes before and after the root element (XML declaration,
  /// doctype, comments).
  std::vector<Opaque> prolog;
  std::vector<Opaque> epilog;

  /// Returns nullptr when the path does not resolve to an element.
  const Element *resolve_element(const NodePath &path) const;
  Element *resolve_element(const NodePath &path);

  friend bool operator==(const MarkupDocument &, const MarkupDocument &) = default;
};

/// Elements that never have content in HTML mode.
bool is_void_element(std::string_view name);

/// Parses UTF-8 markup. XML mode is strict. HTML mode lowercases names,
/// accepts unquoted and valueless attributes, auto-closes void elements and
/// implicitly closes `p` and `li`.
/// Throws MalformedMarkup or Error(kDecode).
MarkupDocument parse_document(std::string_view bytes, MarkupFormat format);

/// Canonical serialization: text escapes &, <, >; attribute values are double
/// quoted and additionally escape ". Childless elements are written `<x/>` in
/// XML; in HTML only void elements use that form.
std::string serialize_document(const MarkupDocument &doc);
void serialize_node(const Node &node, MarkupFormat format, std::string &out);

/// Merges adjacent text nodes and drops empty ones. Idempotent.
MarkupDocument canonicalize(const MarkupDocument &doc);
void canonicalize_children(std::vector<Node> &children);

/// Concatenated text content of an element's subtree.
std::string text_content(const Element &element);

std::string escape_text(std::string_view s);
std::string escape_attribute(std::string_view s);

}  // namespace markmt
