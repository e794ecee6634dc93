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

#include "markmt/text.h"

namespace text = markmt::text;

TEST_CASE("decode and validate utf-8") {
  std::string s = "aá😀";
  std::size_t pos = 0;
  CHECK(text::next_code_point(s, pos) == 'a');
  CHECK(text::next_code_point(s, pos) == 0xE1);
  CHECK(text::next_code_point(s, pos) == 0x1F600);
  CHECK(pos == s.size());
  CHECK(text::is_valid_utf8(s));
  CHECK_FALSE(text::is_valid_utf8("\xC3"));
  CHECK_FALSE(text::is_valid_utf8("\xC0\x80"));
  CHECK_FALSE(text::is_valid_utf8("\xED\xA0\x80"));
  CHECK(text::to_utf8(text::to_u32(s)) == s);
  CHECK(text::code_point_count(s) == 3);
}

TEST_CASE("character classes") {
  CHECK(text::is_space(U' '));
  CHECK(text::is_space(0x00A0));
  CHECK(text::is_space(0x3000));
  CHECK_FALSE(text::is_space(U'a'));
  CHECK(text::is_punct(U','));
  CHECK(text::is_punct(U'„'));
  CHECK(text::is_upper(U'Ř'));
  CHECK_FALSE(text::is_upper(U'ř'));
  CHECK(text::is_digit(U'7'));
}

TEST_CASE("case folding keeps diacritics") {
  CHECK(text::fold_case("HÁLKY") == "hálky");
  CHECK(text::fold_case("Гали") == "гали");
  CHECK(text::upper_first("гали") == "Гали");
  CHECK(text::upper_first("") == "");
}

TEST_CASE("trim and split") {
  auto [b, e] = text::trim_range("  ab \n");
  CHECK(b == 3);
  CHECK(e == 5);
  CHECK(text::is_blank(" \t　"));
  CHECK_FALSE(text::is_blank(" x "));
  auto parts = text::split("a\t\tb", '\t');
  REQUIRE(parts.size() == 3);
  CHECK(parts[1].empty());
  CHECK(text::trim_ascii("  x y ") == "x y");
}
