// Copyright 2026 The salkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "salkit/common.hpp"
#include "salkit/metrics.hpp"
#include "salkit/text.hpp"

namespace salkit {

/// Word vectors aligned to a vocabulary of unique, whitespace-free tokens.
struct EmbeddingTable {
  std::vector<std::string> vocabulary;
  Matrix vectors;  // one row per token

  Index size() const { return vectors.rows(); }
  Index dim() const { return vectors.cols(); }

  /// Row of `word`, or -1.
  Index find(const std::string& word) const {
    if (index_.size() != vocabulary.size()) reindex();
    const auto it = index_.find(word);
    return it == index_.end() ? -1 : it->second;
  }

 private:
  void reindex() const {
    index_.clear();
    for (std::size_t i = 0; i < vocabulary.size(); ++i) index_.emplace(vocabulary[i], static_cast<Index>(i));
  }
  mutable std::unordered_map<std::string, Index> index_;
};

/// Text format: header line `n d`, then n lines `token v_1 ... v_d`.
inline EmbeddingTable read_embeddings(std::istream& in) {
  text::LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError("missing header", 1);
  const auto head = text::split_ws(line);
  if (head.size() != 2) throw ParseError("header must be `n d`", reader.number());
  const long long n = text::parse_int(head[0], reader.number(), "row count");
  const long long d = text::parse_int(head[1], reader.number(), "dimension");
  if (n < 0 || d <= 0) throw ParseError("header needs n >= 0 and d > 0", reader.number());

  EmbeddingTable table;
  table.vocabulary.reserve(static_cast<std::size_t>(n));
  table.vectors.resize(n, d);
  std::unordered_map<std::string, std::size_t> seen;
  Index row = 0;
  while (reader.next(line)) {
    const auto fields = text::split_ws(line);
    if (fields.empty()) continue;
    if (row >= n) throw ParseError("more vectors than the header declares (" + std::to_string(n) + ")", reader.number());
    if (static_cast<long long>(fields.size()) != d + 1)
      throw ParseError("expected a token and " + std::to_string(d) + " values, found " + std::to_string(fields.size()) +
                           " fields (tokens may not contain whitespace)",
                       reader.number());
    std::string token(fields[0]);
    if (!seen.emplace(token, reader.number()).second) throw ParseError("duplicate token '" + token + "'", reader.number());
    for (long long j = 0; j < d; ++j) table.vectors(row, j) = text::parse_double(fields[j + 1], reader.number());
    table.vocabulary.push_back(std::move(token));
    ++row;
  }
  if (row != n)
    throw ParseError("file ends after " + std::to_string(row) + " vectors, header declares " + std::to_string(n),
                     reader.number() + 1);
  return table;
}

inline EmbeddingTable read_embeddings(const std::string& path) {
  auto in = text::open_input(path);
  return read_embeddings(in);
}

/// Values are written with 9 significant digits.
inline void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  require(static_cast<Index>(table.vocabulary.size()) == table.size(), "vocabulary and vector counts differ");
  out << table.size() << ' ' << table.dim() << '\n';
  for (Index i = 0; i < table.size(); ++i) {
    const std::string& token = table.vocabulary[static_cast<std::size_t>(i)];
    require(!token.empty() && text::split_ws(token).size() == 1 && token.find('\n') == std::string::npos,
            "token '" + token + "' is empty or contains whitespace");
    out << token;
    for (Index j = 0; j < table.dim(); ++j) out << ' ' << text::format_double(table.vectors(i, j), 9);
    out << '\n';
  }
}

inline void write_embeddings(const std::string& path, const EmbeddingTable& table) {
  auto out = text::open_output(path);
  write_embeddings(out, table);
  if (!out) throw Error("write to '" + path + "' failed");
}

struct ScoredPair {
  std::string first;
  std::string second;
  double score = 0.0;
};

/// `word1<TAB>word2<TAB>score` per line; blank lines are ignored.
inline std::vector<ScoredPair> read_word_pairs(std::istream& in) {
  text::LineReader reader(in);
  std::string line;
  std::vector<ScoredPair> out;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto fields = text::split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty())
      throw ParseError("expected `word1<TAB>word2<TAB>score`", reader.number());
    out.push_back({std::string(fields[0]), std::string(fields[1]), text::parse_double(fields[2], reader.number(), "score")});
  }
  return out;
}

inline std::vector<ScoredPair> read_word_pairs(const std::string& path) {
  auto in = text::open_input(path);
  return read_word_pairs(in);
}

struct SimilarityCorrelation {
  double spearman = 0.0;
  double pearson = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;  // pairs with an out-of-vocabulary word
};

/// Rank (and linear) correlation between cosine similarities and human scores.
inline SimilarityCorrelation similarity_correlation(const EmbeddingTable& table, const std::vector<ScoredPair>& pairs) {
  std::vector<double> cos;
  std::vector<double> human;
  SimilarityCorrelation out;
  for (const auto& p : pairs) {
    const Index a = table.find(p.first);
    const Index b = table.find(p.second);
    if (a < 0 || b < 0) {
      ++out.skipped;
      continue;
    }
    cos.push_back(cosine(table.vectors.row(a), table.vectors.row(b)));
    human.push_back(p.score);
  }
  out.used = cos.size();
  require(out.used >= 5, "similarity correlation needs at least 5 in-vocabulary pairs, got " + std::to_string(out.used));
  out.spearman = spearman(cos, human);
  out.pearson = pearson(cos, human);
  return out;
}

/// Top-m words by cosine similarity to `query`, excluding the query. Ties go
/// to the lexicographically smaller word.
inline std::vector<std::string> nearest_neighbors(const EmbeddingTable& table, const std::string& query, std::size_t m) {
  const Index q = table.find(query);
  if (q < 0) throw LookupError("word '" + query + "' is not in the vocabulary");
  require(static_cast<Index>(m) < table.size(), "m must be smaller than the vocabulary size");
  std::vector<std::pair<double, Index>> scored;
  scored.reserve(static_cast<std::size_t>(table.size()));
  for (Index i = 0; i < table.size(); ++i)
    if (i != q) scored.emplace_back(cosine(table.vectors.row(q), table.vectors.row(i)), i);
  const auto better = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return table.vocabulary[static_cast<std::size_t>(a.second)] < table.vocabulary[static_cast<std::size_t>(b.second)];
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(m), scored.end(), better);
  std::vector<std::string> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(table.vocabulary[static_cast<std::size_t>(scored[i].second)]);
  return out;
}

}  // namespace salkit
