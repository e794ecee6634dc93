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

#include "markmt/text.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace markmt::text {

int next_code_point(std::string_view s, std::size_t &pos) {
  UChar32 c = 0;
  auto i = static_cast<int32_t>(pos);
  U8_NEXT(reinterpret_cast<const uint8_t *>(s.data()), i,
          static_cast<int32_t>(s.size()), c);
  pos = static_cast<std::size_t>(i);
  return c;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (next_code_point(s, pos) < 0) return false;
  }
  return true;
}

std::u32string to_u32(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    int c = next_code_point(s, pos);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

void append_utf8(std::string &out, char32_t cp) {
  uint8_t buf[4];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, 4, static_cast<UChar32>(cp), error);
  if (error) {
    out.append("\xEF\xBF\xBD");
    return;
  }
  out.append(reinterpret_cast<const char *>(buf), static_cast<std::size_t>(len));
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) append_utf8(out, c);
  return out;
}

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool is_punct(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)); }

bool is_upper(char32_t cp) {
  return u_isUUppercase(static_cast<UChar32>(cp)) ||
         u_charType(static_cast<UChar32>(cp)) == U_TITLECASE_LETTER;
}

bool is_digit(char32_t cp) { return u_isdigit(static_cast<UChar32>(cp)); }

std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    int c = next_code_point(s, pos);
    if (c < 0) {
      out.append("\xEF\xBF\xBD");
      continue;
    }
    append_utf8(out, static_cast<char32_t>(u_foldCase(c, U_FOLD_CASE_DEFAULT)));
  }
  return out;
}

std::string upper_first(std::string_view s) {
  if (s.empty()) return {};
  std::size_t pos = 0;
  int c = next_code_point(s, pos);
  if (c < 0) return std::string(s);
  std::string out;
  append_utf8(out, static_cast<char32_t>(u_toupper(c)));
  out.append(s.substr(pos));
  return out;
}

std::size_t code_point_count(std::string_view s) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    next_code_point(s, pos);
    ++n;
  }
  return n;
}

std::pair<std::size_t, std::size_t> trim_range(std::string_view s) {
  std::size_t begin = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t at = pos;
    int c = next_code_point(s, pos);
    if (c < 0 || !is_space(static_cast<char32_t>(c))) {
      begin = at;
      break;
    }
    begin = pos;
  }
  std::size_t end = begin;
  pos = begin;
  while (pos < s.size()) {
    int c = next_code_point(s, pos);
    if (c < 0 || !is_space(static_cast<char32_t>(c))) end = pos;
  }
  return {begin, end};
}

bool is_blank(std::string_view s) {
  auto [b, e] = trim_range(s);
  return b == e;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto at = s.find(sep, start);
    if (at == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, at - start));
    start = at + 1;
  }
}

std::string trim_ascii(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (b < e && ws(s[b])) ++b;
  while (e > b && ws(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace markmt::text
