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

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace markmt {

struct ChrFParams {
  int max_order = 6;
  double beta = 2.0;
  bool include_whitespace = false;

  friend bool operator==(const ChrFParams &, const ChrFParams &) = default;
};

struct NGramStats {
  int order = 0;
  std::uint64_t hyp_count = 0;
  std::uint64_t ref_count = 0;
  std::uint64_t overlap = 0;

  friend bool operator==(const NGramStats &, const NGramStats &) = default;
};

struct ChrFReport {
  double score = 0.0;
  double chrP = 0.0;
  double chrR = 0.0;
  std::vector<NGramStats> per_order;
  ChrFParams params;

  /// JSON object with exactly the fields score, chrP, chrR, per_order, params.
  std::string to_json() const;
};

/// Character n-gram statistics of one pair, orders 1..max_order.
std::vector<NGramStats> chrf_stats(std::string_view hyp, std::string_view ref,
                                   const ChrFParams &params = {});

/// Applies the chrF formula to (possibly summed) statistics. Orders with no
/// n-grams on either side are skipped; precision and recall are averaged
/// over the remaining orders.
ChrFReport chrf_from_stats(std::vector<NGramStats> stats, const ChrFParams &params = {});

ChrFReport chrf_sentence(std::string_view hyp, std::string_view ref,
                         const ChrFParams &params = {});

/// Micro-averaged: statistics summed over all pairs first.
/// Throws Error(kEmptyInput).
ChrFReport chrf_corpus(const std::vector<std::pair<std::string, std::string>> &pairs,
                       const ChrFParams &params = {});

enum class SummaryMethod { kBootstrap, kMoments };

struct ScoreSummary {
  double mean = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
  SummaryMethod method = SummaryMethod::kMoments;

  double half_width() const { return (ci_high - ci_low) / 2.0; }

  friend bool operator==(const ScoreSummary &, const ScoreSummary &) = default;
};

struct BootstrapOptions {
  int resamples = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 1;
  ChrFParams params;
};

/// Percentile bootstrap over corpus chrF. All resamples draw their indices,
/// in order, from one mt19937_64 seeded with `seed`. `mean` is the full-corpus score and `sd`
/// the standard deviation of the resampled scores; the interval is widened
/// to include `mean` if the percentiles miss it.
/// Throws Error(kTooFewSamples) for fewer than two pairs.
ScoreSummary bootstrap_ci(const std::vector<std::pair<std::string, std::string>> &pairs,
                          const BootstrapOptions &options = {});

/// Mean and sample standard deviation (n - 1); the interval is the normal
/// approximation of a 95% interval for the mean. Throws Error(kEmptyInput).
ScoreSummary summarize_scores(const std::vector<double> &values);

/// "7.80 ± 3.25": mean ± sd with two decimals.
std::string render_moments(const ScoreSummary &summary);
/// "61.6 ± 0.8": mean ± interval half-width with one decimal.
std::string render_interval(const ScoreSummary &summary);

/// Uniform index in [0, n) by rejection; identical on every platform.
std::uint64_t uniform_index(std::uint64_t n, auto &engine) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % n;
}

}  // namespace markmt
