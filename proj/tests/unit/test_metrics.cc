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

#include <cmath>

#include "generators.h"
#include "markmt/error.h"
#include "markmt/metrics.h"
#include "oracles.h"

using namespace markmt;

namespace {

void check_against_oracle(const ChrFReport &got, const oracle::ChrF &want) {
  CHECK(std::abs(got.score - want.score) < 1e-9);
  CHECK(std::abs(got.chrP - want.precision) < 1e-9);
  CHECK(std::abs(got.chrR - want.recall) < 1e-9);
  REQUIRE(got.per_order.size() == want.orders.size());
  for (std::size_t n = 0; n < want.orders.size(); ++n) {
    CHECK(got.per_order[n].hyp_count == want.orders[n].hyp);
    CHECK(got.per_order[n].ref_count == want.orders[n].ref);
    CHECK(got.per_order[n].overlap == want.orders[n].overlap);
  }
}

}  // namespace

TEST_CASE("sentence chrF") {
  CHECK(chrf_sentence("abc", "abc").score == 100.0);
  CHECK(chrf_sentence("def", "abc").score == 0.0);
  auto r = chrf_sentence("cat", "cab");
  CHECK(r.chrP == doctest::Approx(0.388889).epsilon(1e-6));
  CHECK(r.chrR == doctest::Approx(0.388889).epsilon(1e-6));
  CHECK(std::abs(r.score - 38.889) < 0.001);
  CHECK(chrf_sentence("a b", "ab").score == 100.0);
  CHECK(chrf_sentence("", "").score == 100.0);
  CHECK(chrf_sentence("", "abc").score == 0.0);
  CHECK(chrf_sentence("abc", "").score == 0.0);
}

TEST_CASE("whitespace can be counted") {
  ChrFParams p;
  p.include_whitespace = true;
  CHECK(chrf_sentence("a b", "ab", p).score < 100.0);
}

TEST_CASE("property: chrF equals the brute-force counter") {
  gen::Gen g(2024);
  for (int trial = 0; trial < 500; ++trial) {
    std::string h = g.text(gen::unicode_alphabet(), 14);
    std::string r = g.text(gen::unicode_alphabet(), 14);
    INFO(h, " | ", r);
    check_against_oracle(chrf_sentence(h, r), oracle::chrf(h, r));
  }
}

TEST_CASE("corpus chrF sums statistics") {
  std::vector<std::pair<std::string, std::string>> one = {{"cat", "cab"}};
  CHECK(chrf_corpus(one).score == chrf_sentence("cat", "cab").score);
  std::vector<std::pair<std::string, std::string>> same = {{"x", "x"}, {"abc", "abc"}};
  CHECK(chrf_corpus(same).score == 100.0);
  std::vector<std::pair<std::string, std::string>> two = {{"cat", "cab"}, {"dog", "dig"}};
  check_against_oracle(chrf_corpus(two), oracle::chrf_corpus(two));
  CHECK_THROWS_AS(chrf_corpus({}), Error);

  gen::Gen g(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t n = g.between(1, 6);
    for (std::size_t k = 0; k < n; ++k) {
      pairs.emplace_back(g.text(gen::unicode_alphabet(), 10), g.text(gen::unicode_alphabet(), 10));
    }
    check_against_oracle(chrf_corpus(pairs), oracle::chrf_corpus(pairs));
  }
}

TEST_CASE("report json") {
  auto j = chrf_sentence("cat", "cab").to_json();
  CHECK(j.find("\"score\"") != std::string::npos);
  CHECK(j.find("\"per_order\"") != std::string::npos);
  CHECK(j.find("\"params\"") != std::string::npos);
}

TEST_CASE("bootstrap") {
  std::vector<std::pair<std::string, std::string>> perfect(20, {"abc", "abc"});
  auto s = bootstrap_ci(perfect);
  CHECK(s.mean == 100.0);
  CHECK(s.ci_low == 100.0);
  CHECK(s.ci_high == 100.0);

  std::vector<std::pair<std::string, std::string>> tiny = {
      {"cat", "cab"}, {"dog", "dig"}, {"pes", "pes"}, {"kočka", "kočky"}};
  BootstrapOptions opt;
  opt.resamples = 200;
  opt.seed = 42;
  auto a = bootstrap_ci(tiny, opt);
  auto b = bootstrap_ci(tiny, opt);
  CHECK(a == b);
  CHECK(a.ci_low <= a.mean);
  CHECK(a.mean <= a.ci_high);
  CHECK(a.mean == chrf_corpus(tiny).score);
  opt.seed = 43;
  CHECK_FALSE(bootstrap_ci(tiny, opt) == a);

  try {
    bootstrap_ci({{"a", "a"}});
    FAIL("expected TooFewSamples");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kTooFewSamples);
  }
}

TEST_CASE("moments") {
  auto one = summarize_scores({7.8});
  CHECK(render_moments(one) == "7.80 ± 0.00");
  auto three = summarize_scores({6, 8, 10});
  CHECK(three.mean == doctest::Approx(8.0));
  CHECK(three.sd == doctest::Approx(2.0));
  CHECK(render_moments(three) == "8.00 ± 2.00");
  ScoreSummary s;
  s.mean = 7.8;
  s.sd = 3.25;
  CHECK(render_moments(s) == "7.80 ± 3.25");
  CHECK_THROWS_AS(summarize_scores({}), Error);

  ScoreSummary ci;
  ci.mean = 61.6;
  ci.ci_low = 60.8;
  ci.ci_high = 62.4;
  CHECK(render_interval(ci) == "61.6 ± 0.8");
}

TEST_CASE("uniform index is unbiased in range") {
  std::mt19937_64 engine(1);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) ++seen[uniform_index(7, engine)];
  for (int c : seen) CHECK(c > 800);
}
