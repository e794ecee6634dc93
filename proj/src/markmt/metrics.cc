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

#include "markmt/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_map>

#include "json.hpp"

#include "markmt/error.h"
#include "markmt/text.h"

namespace markmt {

namespace {

std::u32string characters(std::string_view s, bool include_whitespace) {
  std::u32string out = text::to_u32(s);
  if (!include_whitespace) {
    out.erase(std::remove_if(out.begin(), out.end(), [](char32_t c) { return text::is_space(c); }),
              out.end());
  }
  return out;
}

std::unordered_map<std::u32string_view, std::uint64_t> ngram_counts(const std::u32string &s,
                                                                     std::size_t n) {
  std::unordered_map<std::u32string_view, std::uint64_t> counts;
  if (s.size() < n) return counts;
  std::u32string_view view(s);
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++counts[view.substr(i, n)];
  return counts;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out(buf);
  // Avoid "-0.0".
  if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') out.erase(0, 1);
  return out;
}

double percentile(const std::vector<double> &sorted, double q) {
  if (sorted.size() == 1) return sorted[0];
  double rank = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(rank));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  double frac = rank - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

std::string ChrFReport::to_json() const {
  nlohmann::ordered_json j;
  j["score"] = score;
  j["chrP"] = chrP;
  j["chrR"] = chrR;
  j["per_order"] = nlohmann::ordered_json::array();
  for (const auto &s : per_order) {
    j["per_order"].push_back({{"order", s.order},
                              {"hyp_count", s.hyp_count},
                              {"ref_count", s.ref_count},
                              {"overlap", s.overlap}});
  }
  j["params"] = {{"max_order", params.max_order},
                 {"beta", params.beta},
                 {"include_whitespace", params.include_whitespace}};
  return j.dump();
}

std::vector<NGramStats> chrf_stats(std::string_view hyp, std::string_view ref,
                                   const ChrFParams &params) {
  if (params.max_order < 1) throw Error(ErrorCode::kInvalidArgument, "max_order must be >= 1");
  auto h = characters(hyp, params.include_whitespace);
  auto r = characters(ref, params.include_whitespace);
  std::vector<NGramStats> stats;
  for (int n = 1; n <= params.max_order; ++n) {
    auto un = static_cast<std::size_t>(n);
    NGramStats s;
    s.order = n;
    s.hyp_count = h.size() >= un ? h.size() - un + 1 : 0;
    s.ref_count = r.size() >= un ? r.size() - un + 1 : 0;
    if (s.hyp_count > 0 && s.ref_count > 0) {
      auto hc = ngram_counts(h, un);
      auto rc = ngram_counts(r, un);
      for (const auto &[gram, count] : hc) {
        auto it = rc.find(gram);
        if (it != rc.end()) s.overlap += std::min(count, it->second);
      }
    }
    stats.push_back(s);
  }
  return stats;
}

ChrFReport chrf_from_stats(std::vector<NGramStats> stats, const ChrFParams &params) {
  ChrFReport report;
  report.params = params;
  double precision = 0.0;
  double recall = 0.0;
  int effective = 0;
  bool hyp_empty = true;
  bool ref_empty = true;
  for (const auto &s : stats) {
    hyp_empty &= s.hyp_count == 0;
    ref_empty &= s.ref_count == 0;
    if (s.hyp_count == 0 && s.ref_count == 0) continue;
    ++effective;
    if (s.hyp_count > 0) precision += static_cast<double>(s.overlap) / static_cast<double>(s.hyp_count);
    if (s.ref_count > 0) recall += static_cast<double>(s.overlap) / static_cast<double>(s.ref_count);
  }
  report.per_order = std::move(stats);
  if (effective == 0) {
    // Both sides empty: nothing to disagree on.
    report.chrP = report.chrR = 1.0;
    report.score = 100.0;
    return report;
  }
  report.chrP = precision / effective;
  report.chrR = recall / effective;
  if (hyp_empty != ref_empty) {
    report.score = 0.0;
    return report;
  }
  double b2 = params.beta * params.beta;
  double denom = b2 * report.chrP + report.chrR;
  report.score = denom > 0.0 ? 100.0 * (1.0 + b2) * report.chrP * report.chrR / denom : 0.0;
  return report;
}

ChrFReport chrf_sentence(std::string_view hyp, std::string_view ref, const ChrFParams &params) {
  return chrf_from_stats(chrf_stats(hyp, ref, params), params);
}

ChrFReport chrf_corpus(const std::vector<std::pair<std::string, std::string>> &pairs,
                       const ChrFParams &params) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "chrF of an empty corpus");
  std::vector<NGramStats> total;
  for (const auto &[hyp, ref] : pairs) {
    auto stats = chrf_stats(hyp, ref, params);
    if (total.empty()) {
      total = std::move(stats);
      continue;
    }
    for (std::size_t k = 0; k < total.size(); ++k) {
      total[k].hyp_count += stats[k].hyp_count;
      total[k].ref_count += stats[k].ref_count;
      total[k].overlap += stats[k].overlap;
    }
  }
  return chrf_from_stats(std::move(total), params);
}

ScoreSummary bootstrap_ci(const std::vector<std::pair<std::string, std::string>> &pairs,
                          const BootstrapOptions &options) {
  if (pairs.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples, "bootstrap needs at least two segment pairs");
  }
  if (options.resamples < 1 || !(options.confidence > 0.0 && options.confidence < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bad bootstrap options");
  }
  const std::size_t n = pairs.size();
  const auto orders = static_cast<std::size_t>(options.params.max_order);
  // Per-pair statistics, flattened: [pair][order][hyp, ref, overlap].
  std::vector<std::uint64_t> flat(n * orders * 3);
  std::vector<NGramStats> total;
  for (std::size_t i = 0; i < n; ++i) {
    auto stats = chrf_stats(pairs[i].first, pairs[i].second, options.params);
    for (std::size_t k = 0; k < orders; ++k) {
      flat[(i * orders + k) * 3 + 0] = stats[k].hyp_count;
      flat[(i * orders + k) * 3 + 1] = stats[k].ref_count;
      flat[(i * orders + k) * 3 + 2] = stats[k].overlap;
    }
    if (total.empty()) {
      total = stats;
    } else {
      for (std::size_t k = 0; k < orders; ++k) {
        total[k].hyp_count += stats[k].hyp_count;
        total[k].ref_count += stats[k].ref_count;
        total[k].overlap += stats[k].overlap;
      }
    }
  }
  const double point = chrf_from_stats(total, options.params).score;

  std::vector<double> scores(static_cast<std::size_t>(options.resamples));
  std::vector<NGramStats> sample(orders);
  std::mt19937_64 engine(options.seed);
  for (int r = 0; r < options.resamples; ++r) {
    for (std::size_t k = 0; k < orders; ++k) {
      sample[k] = NGramStats{static_cast<int>(k + 1), 0, 0, 0};
    }
    for (std::size_t draw = 0; draw < n; ++draw) {
      std::size_t i = uniform_index(n, engine);
      for (std::size_t k = 0; k < orders; ++k) {
        sample[k].hyp_count += flat[(i * orders + k) * 3 + 0];
        sample[k].ref_count += flat[(i * orders + k) * 3 + 1];
        sample[k].overlap += flat[(i * orders + k) * 3 + 2];
      }
    }
    scores[static_cast<std::size_t>(r)] = chrf_from_stats(sample, options.params).score;
  }

  double sum = 0.0;
  for (double s : scores) sum += s;
  double avg = sum / static_cast<double>(scores.size());
  double sq = 0.0;
  for (double s : scores) sq += (s - avg) * (s - avg);

  std::sort(scores.begin(), scores.end());
  double alpha = (1.0 - options.confidence) / 2.0;
  ScoreSummary summary;
  summary.method = SummaryMethod::kBootstrap;
  summary.n = n;
  summary.mean = point;
  summary.sd = scores.size() > 1 ? std::sqrt(sq / static_cast<double>(scores.size() - 1)) : 0.0;
  summary.ci_low = std::min(percentile(scores, alpha), point);
  summary.ci_high = std::max(percentile(scores, 1.0 - alpha), point);
  return summary;
}

ScoreSummary summarize_scores(const std::vector<double> &values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no scores to summarize");
  ScoreSummary summary;
  summary.method = SummaryMethod::kMoments;
  summary.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  summary.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - summary.mean) * (v - summary.mean);
    summary.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  double half = 1.96 * summary.sd / std::sqrt(static_cast<double>(values.size()));
  summary.ci_low = summary.mean - half;
  summary.ci_high = summary.mean + half;
  return summary;
}

std::string render_moments(const ScoreSummary &summary) {
  return fixed(summary.mean, 2) + " ± " + fixed(summary.sd, 2);
}

std::string render_interval(const ScoreSummary &summary) {
  return fixed(summary.mean, 1) + " ± " + fixed(summary.half_width(), 1);
}

}  // namespace markmt
