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

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "markmt/types.h"

namespace markmt {

struct SentencePair {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;

  /// Reads `src<TAB>tgt` lines, tokenizing both sides. Lines with an empty
  /// side are rejected with a SchemaError.
  static ParallelCorpus load(const std::filesystem::path &path);
  ParallelCorpus reversed() const;
};

/// Word-translation probabilities t(tgt | src) over case-folded words.
class LexiconTable {
 public:
  static constexpr std::string_view kNull = "<NULL>";
  static constexpr double kDefaultFloor = 1e-6;

  LexiconTable() = default;
  explicit LexiconTable(double floor) : floor_(floor) {}

  /// Stored probability, or the floor for pairs never observed.
  double prob(std::string_view src, std::string_view tgt) const;
  /// True when (src, tgt) has a stored entry.
  bool has(std::string_view src, std::string_view tgt) const;
  void set(const std::string &src, const std::string &tgt, double p);

  double floor() const { return floor_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::unordered_map<std::string, std::unordered_map<std::string, double>> &rows() const {
    return rows_;
  }
  double row_sum(const std::string &src) const;

  /// TSV `src<TAB>tgt<TAB>prob`, sorted by src, then by descending prob.
  std::string to_tsv() const;
  void save(const std::filesystem::path &path) const;
  static LexiconTable parse_tsv(std::string_view tsv, double floor = kDefaultFloor);
  static LexiconTable load(const std::filesystem::path &path, double floor = kDefaultFloor);

  /// Identity lexicon over `words`: t(w | w) = 1.
  static LexiconTable identity(const std::vector<std::string> &words);

 private:
  double floor_ = kDefaultFloor;
  std::unordered_map<std::string, std::unordered_map<std::string, double>> rows_;
};

struct Model1Options {
  int iterations = 5;
  double floor = LexiconTable::kDefaultFloor;
  /// Called after every iteration with the iteration number (1-based), the
  /// log-likelihood of the updated parameters and the updated table.
  std::function<void(int, double, const LexiconTable &)> on_iteration;
};

struct Model1Result {
  LexiconTable lexicon;
  /// log_likelihood[0] is under the uniform start; entry k after iteration k.
  std::vector<double> log_likelihood;
};

/// IBM Model 1 trained by EM. Every source sentence gets a NULL word; the
/// table starts uniform over co-occurring pairs. The floor is applied once,
/// to the returned table, and rows are renormalized.
/// Throws Error(kEmptyCorpus) and Error(kInvalidArgument).
Model1Result train_model1(const ParallelCorpus &corpus, const Model1Options &options = {});

/// Corpus log-likelihood under `lexicon`, up to a constant in the lengths.
double corpus_log_likelihood(const ParallelCorpus &corpus, const LexiconTable &lexicon);

/// Best source position for every target token. A target word with no
/// stored probability from any source word links to NULL (-1); otherwise
/// ties go to the smallest source index and NULL loses ties.
AlignmentLinks viterbi_align(const std::vector<std::string> &src,
                             const std::vector<std::string> &tgt, const LexiconTable &lexicon);

enum class SymmetrizeMethod { kIntersection, kUnion };

/// `reverse` holds (tgt, src) links from the inverse model. NULL links are
/// dropped from both inputs. Throws Error(kDimensionMismatch) when a link
/// falls outside the sentence sizes.
AlignmentLinks symmetrize(const AlignmentLinks &forward, const AlignmentLinks &reverse,
                          std::size_t src_len, std::size_t tgt_len, SymmetrizeMethod method);

/// Space-separated `i-j` pairs, NULL links omitted.
std::string to_pharaoh(const AlignmentLinks &links);
AlignmentLinks parse_pharaoh(std::string_view line);

/// Token texts of a tokenized sentence.
std::vector<std::string> token_texts(const std::vector<Token> &tokens);

}  // namespace markmt
