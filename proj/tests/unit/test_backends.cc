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

#include <cstdlib>
#include <future>

#include "markmt/backends.h"
#include "markmt/error.h"
#include "stub_server.h"
#include "testutil.h"

using namespace markmt;

namespace {

TranslationRequest request_of(std::vector<std::string> segments) {
  return {std::move(segments), "cs", "uk", true};
}

RemoteConfig stub_config(const stub::StubServer &server) {
  RemoteConfig c;
  c.endpoint_url = server.url();
  c.timeout_ms = 2000;
  c.max_retries = 3;
  c.backoff_base_ms = 1;
  return c;
}

struct SleepLog {
  std::vector<std::chrono::milliseconds> delays;
  RemoteBackend::Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) { delays.push_back(d); };
  }
};

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("request validation") {
  CHECK_NOTHROW(validate_request(request_of({"a"})));
  CHECK(code_of([] { validate_request(request_of({})); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { validate_request({{"a"}, "cs", "cs", true}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { validate_request({{"a"}, "CS", "uk", true}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { validate_request({{"a"}, "ces", "uk", true}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("pair lists") {
  auto pairs = parse_pair_list("cs-uk, en-uk");
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::make_pair(std::string("cs"), std::string("uk")));
  CHECK(parse_pair_list("").empty());
  CHECK_THROWS_AS(parse_pair_list("csuk"), Error);
}

TEST_CASE("identity backend") {
  IdentityBackend b;
  auto r = b.translate_batch(request_of({"abc", "x y"}));
  CHECK(r.translations == std::vector<std::string>{"abc", "x y"});
  REQUIRE(r.alignments.has_value());
  CHECK((*r.alignments)[0] == AlignmentLinks({{0, 0}}));
  CHECK((*r.alignments)[1] == AlignmentLinks({{0, 0}, {1, 1}}));
  CHECK(r.backend_id == "identity");

  IdentityBackend only(parse_pair_list("cs-uk"));
  CHECK(only.supports("cs", "uk"));
  CHECK_FALSE(only.supports("uk", "cs"));
  CHECK(code_of([&] { only.translate_batch({{"a"}, "en", "uk", true}); }) ==
        ErrorCode::kUnsupportedPair);
}

TEST_CASE("dictionary backend") {
  DictionaryBackend b(std::unordered_map<std::string, std::string>{{"pes", "собака"}});
  auto r = b.translate_batch(request_of({"pes"}));
  CHECK(r.translations == std::vector<std::string>{"собака"});
  auto [text, links] = b.translate_one("Pes a kočka.");
  CHECK(text == "Собака a kočka.");
  CHECK(links.contains(0, 0));
  CHECK(links.contains(-1, 1));
  CHECK(links.contains(-1, 2));
  CHECK(links.contains(-1, 3));

  auto loaded = DictionaryBackend::load(testing::fixture("dictionary/cs-uk.tsv"));
  CHECK(loaded->translate_one("velký pes běží").first == "великий собака біжить");
  testing::TempDir dir;
  testing::spit(dir / "bad.tsv", "pes\n");
  CHECK_THROWS_AS(DictionaryBackend::load(dir / "bad.tsv"), SchemaError);
  CHECK_THROWS_AS(DictionaryBackend::load(dir / "missing.tsv"), Error);
}

TEST_CASE("remote config") {
  auto c = RemoteConfig::from_json(
      R"({"endpoint_url": "http://localhost:1/v1/translate", "api_key_env_name": "K",
          "max_retries": 2, "pairs": ["cs-uk"]})");
  CHECK(c.max_retries == 2);
  CHECK(c.api_key_env_name == "K");
  REQUIRE(c.pairs.size() == 1);
  CHECK_THROWS_AS(RemoteConfig::from_json("{}"), SchemaError);
  CHECK_THROWS_AS(RemoteConfig::from_json("[1]"), SchemaError);
  CHECK_THROWS_AS(RemoteConfig::from_json(R"({"endpoint_url": "http://x", "timeout_ms": 0})"),
                  SchemaError);
  CHECK_THROWS_AS(RemoteConfig::from_json("{oops"), SchemaError);
  RemoteConfig tls;
  tls.endpoint_url = "https://example.org/v1/translate";
  CHECK(code_of([&] { RemoteBackend b(tls); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("remote backend against the stub server") {
  stub::StubServer server;
  server.start();

  SUBCASE("small batch is one call") {
    RemoteBackend b(stub_config(server));
    auto r = b.translate_batch(request_of({"ahoj světe", "pes"}));
    CHECK(r.translations == std::vector<std::string>{"ahoj světe", "pes"});
    REQUIRE(r.alignments.has_value());
    CHECK((*r.alignments)[0] == AlignmentLinks({{0, 0}, {1, 1}}));
    CHECK(server.calls().size() == 1);
    CHECK(b.healthy());
  }

  SUBCASE("large batch is split in order") {
    auto c = stub_config(server);
    c.max_batch_chars = 10;
    RemoteBackend b(c);
    std::vector<std::string> segs = {"aaaaaa", "bbbbbb", "cccccc", "", "dd"};
    CHECK(b.plan_chunks({"aaaaaa", "bbbbbb", "cccccc", "dd"}).size() == 3);
    auto r = b.translate_batch(request_of(segs));
    CHECK(r.translations == segs);
    auto calls = server.calls();
    REQUIRE(calls.size() == 3);
    CHECK(calls[0].first_segment == "aaaaaa");
    CHECK(calls[1].first_segment == "bbbbbb");
    CHECK(calls[2].first_segment == "cccccc");
    for (const auto &call : calls) CHECK(call.chars <= 10);
  }

  SUBCASE("two 503s then success") {
    SleepLog sleeps;
    RemoteBackend b(stub_config(server), sleeps.sleeper());
    server.push_faults({503, 503});
    auto r = b.translate_batch(request_of({"pes"}));
    CHECK(r.translations == std::vector<std::string>{"pes"});
    CHECK(server.calls().size() == 3);
    REQUIRE(sleeps.delays.size() == 2);
    CHECK(sleeps.delays[0].count() == 1);
    CHECK(sleeps.delays[1].count() == 2);
  }

  SUBCASE("retry budget exhausted") {
    SleepLog sleeps;
    auto c = stub_config(server);
    c.max_retries = 1;
    RemoteBackend b(c, sleeps.sleeper());
    server.push_faults({503, 429});
    try {
      b.translate_batch(request_of({"pes"}));
      FAIL("expected BackendUnavailable");
    } catch (const BackendUnavailable &e) {
      CHECK(e.retryable());
    }
    CHECK(server.calls().size() == 2);
  }

  SUBCASE("client errors are not retried") {
    RemoteBackend b(stub_config(server), [](auto) {});
    server.push_faults({400});
    try {
      b.translate_batch(request_of({"pes"}));
      FAIL("expected BackendUnavailable");
    } catch (const BackendUnavailable &e) {
      CHECK_FALSE(e.retryable());
    }
    CHECK(server.calls().size() == 1);
  }

  SUBCASE("protocol violations") {
    RemoteBackend b(stub_config(server), [](auto) {});
    server.push_faults({stub::kMalformedBody});
    CHECK(code_of([&] { b.translate_batch(request_of({"pes"})); }) == ErrorCode::kProtocol);
    server.push_faults({stub::kWrongLength});
    CHECK(code_of([&] { b.translate_batch(request_of({"pes", "a"})); }) == ErrorCode::kProtocol);
  }

  SUBCASE("timeouts") {
    auto c = stub_config(server);
    c.timeout_ms = 200;
    c.max_retries = 0;
    RemoteBackend b(c, [](auto) {});
    server.push_faults({stub::kStall});
    CHECK(code_of([&] { b.translate_batch(request_of({"pes"})); }) == ErrorCode::kTimeout);
  }

  SUBCASE("unsupported pair never reaches the wire") {
    auto c = stub_config(server);
    c.pairs = parse_pair_list("cs-uk");
    RemoteBackend b(c);
    CHECK(code_of([&] { b.translate_batch({{"a"}, "uk", "cs", true}); }) ==
          ErrorCode::kUnsupportedPair);
    CHECK(server.calls().empty());
  }

  SUBCASE("concurrent batches") {
    RemoteBackend b(stub_config(server));
    std::vector<std::future<TranslationResult>> futures;
    for (int i = 0; i < 8; ++i) {
      futures.push_back(std::async(std::launch::async, [&b, i] {
        return b.translate_batch(request_of({"seg " + std::to_string(i)}));
      }));
    }
    for (int i = 0; i < 8; ++i) {
      CHECK(futures[static_cast<std::size_t>(i)].get().translations[0] ==
            "seg " + std::to_string(i));
    }
  }
  server.stop();
}

TEST_CASE("remote backend authentication") {
  stub::StubOptions opt;
  opt.api_key = "sekret";
  stub::StubServer server(opt);
  server.start();
  auto c = stub_config(server);
  c.api_key_env_name = "MARKMT_TEST_KEY";

  ::unsetenv("MARKMT_TEST_KEY");
  RemoteBackend b(c, [](auto) {});
  CHECK(code_of([&] { b.translate_batch(request_of({"pes"})); }) == ErrorCode::kAuth);

  ::setenv("MARKMT_TEST_KEY", "wrong", 1);
  CHECK(code_of([&] { b.translate_batch(request_of({"pes"})); }) == ErrorCode::kAuth);

  ::setenv("MARKMT_TEST_KEY", "sekret", 1);
  CHECK(b.translate_batch(request_of({"pes"})).translations[0] == "pes");
  CHECK(server.calls().back().authorization == "Bearer sekret");
  server.stop();
}

TEST_CASE("unreachable endpoint") {
  RemoteConfig c;
  c.endpoint_url = "http://127.0.0.1:1/v1/translate";
  c.max_retries = 1;
  c.timeout_ms = 300;
  RemoteBackend b(c, [](auto) {});
  CHECK_FALSE(b.healthy());
  CHECK_THROWS_AS(b.translate_batch(request_of({"pes"})), Error);
}

TEST_CASE("backend factory") {
  CHECK(make_backend({})->id() == "identity");
  BackendSpec d;
  d.kind = "dictionary";
  d.dictionary_path = testing::fixture("dictionary/cs-uk.tsv");
  CHECK(make_backend(d)->id() == "dictionary");
  BackendSpec bad;
  bad.kind = "pivot";
  CHECK_THROWS_AS(make_backend(bad), Error);
}
