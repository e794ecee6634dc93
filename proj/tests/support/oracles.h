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
#include <map>
#include <string>
#include <utility>
#include <vector>

// Slow reference implementations used to check the library. They share no
// code with it.
namespace markmt::oracle {

struct OrderCounts {
  std::uint64_t hyp = 0;
  std::uint64_t ref = 0;
  std::uint64_t overlap = 0;
};

struct ChrF {
  double score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::vector<OrderCounts> orders;
};

/// Code points of a UTF-8 string with Unicode whitespace removed.
std::u32string strip_space(const std::string &utf8);

/// Counts every n-gram by pairwise comparison.
std::vector<OrderCounts> count_ngrams(const std::string &hyp, const std::string &ref,
                                      int max_order = 6);
ChrF chrf_from_counts(const std::vector<OrderCounts> &orders, double beta = 2.0);
ChrF chrf(const std::string &hyp, const std::string &ref, int max_order = 6, double beta = 2.0);
ChrF chrf_corpus(const std::vector<std::pair<std::string, std::string>> &pairs,
                 int max_order = 6, double beta = 2.0);

using Sentence = std::vector<std::string>;
using Table = std::map<std::string, std::map<std::string, double>>;

struct EmTrace {
  /// tables[k] after k iterations; tables[0] is the uniform start.
  std::vector<Table> tables;
  std::vector<double> log_likelihood;
};

inline const char *const kNullWord = "<NULL>";

/// IBM Model 1 EM written from the textbook formulas, no smoothing. Words
/// are compared as given.
EmTrace model1_em(const std::vector<std::pair<Sentence, Sentence>> &corpus, int iterations);
double model1_log_likelihood(const std::vector<std::pair<Sentence, Sentence>> &corpus,
                             const Table &t);

/// Shortest contiguous range [begin, end) of [0, n) holding every index in
/// `targets`, found by trying all ranges. {0, 0} when `targets` is empty.
std::pair<std::size_t, std::size_t> minimal_cover(const std::vector<std::size_t> &targets,
                                                  std::size_t n);

}  // namespace markmt::oracle
