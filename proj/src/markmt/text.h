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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers. Character classification and case folding are delegated to
// ICU; everything here works on byte offsets into UTF-8 strings.
namespace markmt::text {

/// Decodes one code point starting at `pos` and advances `pos`. Returns a
/// negative value on an ill-formed sequence.
int next_code_point(std::string_view s, std::size_t &pos);

bool is_valid_utf8(std::string_view s);
std::u32string to_u32(std::string_view s);
std::string to_utf8(std::u32string_view s);
void append_utf8(std::string &out, char32_t cp);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);
bool is_upper(char32_t cp);
bool is_digit(char32_t cp);

/// Simple (one-to-one) Unicode case folding, diacritics untouched.
std::string fold_case(std::string_view s);

/// Uppercases the first code point.
std::string upper_first(std::string_view s);

std::size_t code_point_count(std::string_view s);

/// Byte range of `s` with leading and trailing Unicode whitespace removed.
std::pair<std::size_t, std::size_t> trim_range(std::string_view s);
bool is_blank(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim_ascii(std::string_view s);

}  // namespace markmt::text
