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

// Standalone stub of the v1 translation protocol for manual testing.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "markmt/text.h"
#include "stub_server.h"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Stub translation server (v1 protocol)"};
  markmt::stub::StubOptions options;
  std::string key_env;
  std::string faults;
  app.add_option("--host", options.host, "Listen address");
  app.add_option("--port", options.port, "Listen port (0 picks one)");
  app.add_option("--api-key-env", key_env, "Variable holding the expected bearer token");
  app.add_option("--fail", faults, "Comma-separated statuses for the first calls, e.g. 503,503");
  CLI11_PARSE(app, argc, argv);

  if (!key_env.empty()) {
    const char *key = std::getenv(key_env.c_str());
    options.api_key = key ? key : "";
  }
  markmt::stub::StubServer server(options);
  std::vector<int> queue;
  for (const auto &f : markmt::text::split(faults, ',')) {
    if (!markmt::text::trim_ascii(f).empty()) queue.push_back(std::stoi(f));
  }
  server.push_faults(queue);
  if (server.start() <= 0) {
    std::fprintf(stderr, "cannot listen on %s:%d\n", options.host.c_str(), options.port);
    return 1;
  }
  std::printf("%s\n", server.url().c_str());
  std::fflush(stdout);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}
