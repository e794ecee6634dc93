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

#include "markmt/aligner.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "markmt/error.h"
#include "markmt/io.h"
#include "markmt/segmenter.h"
#include "markmt/text.h"

namespace markmt {

namespace {

std::vector<std::string> fold_all(const std::vector<std::string> &words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto &w : words) out.push_back(text::fold_case(w));
  return out;
}

class Vocabulary {
 public:
  int id(const std::string &word) {
    auto [it, inserted] = ids_.try_emplace(word, static_cast<int>(words_.size()));
    if (inserted) words_.push_back(word);
    return it->second;
  }
  const std::string &word(int id) const { return words_[static_cast<std::size_t>(id)]; }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> words_;
};

// One row of t(. | src): sorted target ids with their values.
struct Row {
  std::vector<int> tgt;
  std::vector<double> value;

  std::size_t index(int t) const {
    return static_cast<std::size_t>(std::lower_bound(tgt.begin(), tgt.end(), t) - tgt.begin());
  }
};

struct EncodedPair {
  std::vector<int> src;  // src[0] is NULL
  std::vector<int> tgt;
};

}  // namespace

ParallelCorpus ParallelCorpus::load(const std::filesystem::path &path) {
  ParallelCorpus corpus;
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::is_blank(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw SchemaError(line_no, "corpus", "expected src<TAB>tgt");
    auto src = token_texts(tokenize(std::string_view(line).substr(0, tab)));
    auto tgt = token_texts(tokenize(std::string_view(line).substr(tab + 1)));
    if (src.empty()) throw SchemaError(line_no, "src", "empty source side");
    if (tgt.empty()) throw SchemaError(line_no, "tgt", "empty target side");
    corpus.pairs.push_back({std::move(src), std::move(tgt)});
  }
  return corpus;
}

ParallelCorpus ParallelCorpus::reversed() const {
  ParallelCorpus out;
  out.pairs.reserve(pairs.size());
  for (const auto &p : pairs) out.pairs.push_back({p.tgt, p.src});
  return out;
}

double LexiconTable::prob(std::string_view src, std::string_view tgt) const {
  auto row = rows_.find(std::string(src));
  if (row == rows_.end()) return floor_;
  auto cell = row->second.find(std::string(tgt));
  return cell == row->second.end() ? floor_ : cell->second;
}

bool LexiconTable::has(std::string_view src, std::string_view tgt) const {
  auto row = rows_.find(std::string(src));
  return row != rows_.end() && row->second.count(std::string(tgt)) > 0;
}

void LexiconTable::set(const std::string &src, const std::string &tgt, double p) {
  rows_[src][tgt] = p;
}

double LexiconTable::row_sum(const std::string &src) const {
  auto row = rows_.find(src);
  if (row == rows_.end()) return 0.0;
  std::map<std::string, double> sorted(row->second.begin(), row->second.end());
  double sum = 0.0;
  for (const auto &[t, p] : sorted) sum += p;
  return sum;
}

std::string LexiconTable::to_tsv() const {
  std::vector<std::string> sources;
  sources.reserve(rows_.size());
  for (const auto &[s, row] : rows_) sources.push_back(s);
  std::sort(sources.begin(), sources.end());
  std::string out;
  char buf[64];
  for (const auto &s : sources) {
    std::vector<std::pair<std::string, double>> cells(rows_.at(s).begin(), rows_.at(s).end());
    std::sort(cells.begin(), cells.end(), [](const auto &a, const auto &b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (const auto &[t, p] : cells) {
      std::snprintf(buf, sizeof buf, "%.17g", p);
      out += s;
      out.push_back('\t');
      out += t;
      out.push_back('\t');
      out += buf;
      out.push_back('\n');
    }
  }
  return out;
}

void LexiconTable::save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << to_tsv();
}

LexiconTable LexiconTable::parse_tsv(std::string_view tsv, double floor) {
  LexiconTable table(floor);
  int line_no = 0;
  for (const auto &raw : text::split(tsv, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != 3) throw SchemaError(line_no, "lexicon", "expected src<TAB>tgt<TAB>prob");
    char *end = nullptr;
    double p = std::strtod(fields[2].c_str(), &end);
    if (end == fields[2].c_str() || *end != '\0' || !(p >= 0.0 && p <= 1.0)) {
      throw SchemaError(line_no, "prob", "not a probability: '" + fields[2] + "'");
    }
    table.set(fields[0], fields[1], p);
  }
  return table;
}

LexiconTable LexiconTable::load(const std::filesystem::path &path, double floor) {
  return parse_tsv(read_file(path), floor);
}

LexiconTable LexiconTable::identity(const std::vector<std::string> &words) {
  LexiconTable table;
  for (const auto &w : words) {
    auto f = text::fold_case(w);
    table.set(f, f, 1.0);
  }
  return table;
}

double corpus_log_likelihood(const ParallelCorpus &corpus, const LexiconTable &lexicon) {
  double ll = 0.0;
  for (const auto &pair : corpus.pairs) {
    auto src = fold_all(pair.src);
    auto tgt = fold_all(pair.tgt);
    double norm = std::log(static_cast<double>(src.size() + 1));
    for (const auto &t : tgt) {
      double sum = lexicon.prob(LexiconTable::kNull, t);
      for (const auto &s : src) sum += lexicon.prob(s, t);
      ll += std::log(sum) - norm;
    }
  }
  return ll;
}

Model1Result train_model1(const ParallelCorpus &corpus, const Model1Options &options) {
  if (corpus.pairs.empty()) throw Error(ErrorCode::kEmptyCorpus, "training corpus is empty");
  if (options.iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "iterations must be at least 1");
  }
  if (!(options.floor >= 0.0 && options.floor < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "floor must lie in [0, 1)");
  }

  Vocabulary src_vocab;
  Vocabulary tgt_vocab;
  const int null_id = src_vocab.id(std::string(LexiconTable::kNull));
  std::vector<EncodedPair> encoded;
  encoded.reserve(corpus.pairs.size());
  for (const auto &pair : corpus.pairs) {
    if (pair.src.empty() || pair.tgt.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "sentence pair with an empty side");
    }
    EncodedPair e;
    e.src.push_back(null_id);
    for (const auto &w : pair.src) e.src.push_back(src_vocab.id(text::fold_case(w)));
    for (const auto &w : pair.tgt) e.tgt.push_back(tgt_vocab.id(text::fold_case(w)));
    encoded.push_back(std::move(e));
  }

  // Uniform start over co-occurring pairs.
  std::map<int, std::vector<int>> cooc;
  for (const auto &e : encoded) {
    for (int s : e.src) cooc[s].insert(cooc[s].end(), e.tgt.begin(), e.tgt.end());
  }
  // Source ids are dense, and every source word co-occurs with something.
  std::vector<Row> table(cooc.size());
  for (auto &[s, targets] : cooc) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    Row &row = table[static_cast<std::size_t>(s)];
    row.tgt = targets;
    row.value.assign(targets.size(), 1.0 / static_cast<double>(targets.size()));
  }

  auto to_lexicon = [&](const std::vector<Row> &rows) {
    LexiconTable out(options.floor);
    for (std::size_t s = 0; s < rows.size(); ++s) {
      for (std::size_t k = 0; k < rows[s].tgt.size(); ++k) {
        out.set(src_vocab.word(static_cast<int>(s)), tgt_vocab.word(rows[s].tgt[k]),
                rows[s].value[k]);
      }
    }
    return out;
  };

  // One pass: accumulates expected counts when `counts` is given and
  // returns the log-likelihood of the current table.
  auto pass = [&](std::vector<Row> *counts) {
    double ll = 0.0;
    std::vector<double> column;
    for (const auto &e : encoded) {
      double norm = std::log(static_cast<double>(e.src.size()));
      for (int t : e.tgt) {
        column.assign(e.src.size(), 0.0);
        double denom = 0.0;
        for (std::size_t i = 0; i < e.src.size(); ++i) {
          const Row &row = table[static_cast<std::size_t>(e.src[i])];
          column[i] = row.value[row.index(t)];
          denom += column[i];
        }
        ll += std::log(denom) - norm;
        if (counts == nullptr) continue;
        for (std::size_t i = 0; i < e.src.size(); ++i) {
          Row &c = (*counts)[static_cast<std::size_t>(e.src[i])];
          c.value[c.index(t)] += column[i] / denom;
        }
      }
    }
    return ll;
  };

  Model1Result result;
  for (int iter = 1; iter <= options.iterations; ++iter) {
    std::vector<Row> counts = table;
    for (auto &row : counts) std::fill(row.value.begin(), row.value.end(), 0.0);
    result.log_likelihood.push_back(pass(&counts));
    for (std::size_t s = 0; s < table.size(); ++s) {
      double total = 0.0;
      for (double c : counts[s].value) total += c;
      if (total <= 0.0) continue;
      for (std::size_t k = 0; k < table[s].value.size(); ++k) {
        table[s].value[k] = counts[s].value[k] / total;
      }
    }
    if (options.on_iteration) {
      // The likelihood of the updated table is the next pass's value; it is
      // computed here once more so the callback sees it.
      options.on_iteration(iter, pass(nullptr), to_lexicon(table));
    }
  }
  result.log_likelihood.push_back(pass(nullptr));

  // Floor, then renormalize each row.
  for (auto &row : table) {
    double total = 0.0;
    for (auto &v : row.value) {
      v = std::max(v, options.floor);
      total += v;
    }
    if (total > 0.0) {
      for (auto &v : row.value) v /= total;
    }
  }
  result.lexicon = to_lexicon(table);
  return result;
}

AlignmentLinks viterbi_align(const std::vector<std::string> &src,
                             const std::vector<std::string> &tgt, const LexiconTable &lexicon) {
  auto fsrc = fold_all(src);
  AlignmentLinks links;
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    auto t = text::fold_case(tgt[j]);
    int best = -1;
    double best_p = -1.0;
    for (std::size_t i = 0; i < fsrc.size(); ++i) {
      if (!lexicon.has(fsrc[i], t)) continue;
      double p = lexicon.prob(fsrc[i], t);
      if (p > best_p) {
        best_p = p;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0 && lexicon.prob(LexiconTable::kNull, t) > best_p) best = -1;
    links.add(best, static_cast<int>(j));
  }
  return links;
}

AlignmentLinks symmetrize(const AlignmentLinks &forward, const AlignmentLinks &reverse,
                          std::size_t src_len, std::size_t tgt_len, SymmetrizeMethod method) {
  auto check = [&](int s, int t, const char *which) {
    if (s >= static_cast<int>(src_len) || t < 0 || t >= static_cast<int>(tgt_len) || s < -1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  std::string(which) + " link " + std::to_string(s) + "-" + std::to_string(t) +
                      " outside a " + std::to_string(src_len) + "x" + std::to_string(tgt_len) +
                      " sentence pair");
    }
  };
  AlignmentLinks fwd;
  for (const auto &l : forward.links) {
    check(l.src, l.tgt, "forward");
    if (l.src >= 0) fwd.add(l.src, l.tgt);
  }
  AlignmentLinks rev;
  for (const auto &l : reverse.links) {
    // Reverse links are (tgt, src).
    if (l.tgt < -1 || l.tgt >= static_cast<int>(src_len) || l.src >= static_cast<int>(tgt_len) ||
        l.src < -1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "reverse link " + std::to_string(l.src) + "-" + std::to_string(l.tgt) +
                      " outside the sentence pair");
    }
    if (l.src >= 0 && l.tgt >= 0) rev.add(l.tgt, l.src);
  }
  AlignmentLinks out;
  if (method == SymmetrizeMethod::kIntersection) {
    for (const auto &l : fwd.links) {
      if (rev.contains(l.src, l.tgt)) out.add(l.src, l.tgt);
    }
  } else {
    out = fwd;
    for (const auto &l : rev.links) out.add(l.src, l.tgt);
  }
  return out;
}

std::string to_pharaoh(const AlignmentLinks &links) {
  std::vector<Link> real;
  for (const auto &l : links.links) {
    if (l.src >= 0) real.push_back(l);
  }
  std::sort(real.begin(), real.end(), [](const Link &a, const Link &b) {
    return a.src != b.src ? a.src < b.src : a.tgt < b.tgt;
  });
  std::string out;
  for (const auto &l : real) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(l.src) + "-" + std::to_string(l.tgt);
  }
  return out;
}

AlignmentLinks parse_pharaoh(std::string_view line) {
  AlignmentLinks links;
  std::istringstream in{std::string(line)};
  std::string item;
  while (in >> item) {
    auto dash = item.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == item.size()) {
      throw Error(ErrorCode::kInvalidArgument, "bad alignment pair '" + item + "'");
    }
    try {
      links.add(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
    } catch (const std::exception &) {
      throw Error(ErrorCode::kInvalidArgument, "bad alignment pair '" + item + "'");
    }
  }
  return links;
}

std::vector<std::string> token_texts(const std::vector<Token> &tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) out.push_back(t.text);
  return out;
}

}  // namespace markmt
