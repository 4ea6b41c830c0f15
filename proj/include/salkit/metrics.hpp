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
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "salkit/common.hpp"

namespace salkit {

/// Fraction of positions where prediction equals label.
inline double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
  require(!labels.empty(), "accuracy of an empty sample is undefined");
  require(predictions.size() == labels.size(), "prediction and label counts differ");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hit += predictions[i] == labels[i];
  return static_cast<double>(hit) / static_cast<double>(labels.size());
}

namespace detail {

// Distinct group codes, sorted; exactly two are required.
inline std::pair<int, int> two_groups(const std::vector<int>& groups) {
  std::vector<int> g(groups.begin(), groups.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  if (g.size() != 2)
    throw UndefinedMetricError("TPR gap needs exactly two groups, found " + std::to_string(g.size()));
  return {g[0], g[1]};
}

// P(prediction == cls | label == cls, group), or nullopt without support.
inline std::optional<double> true_positive_rate(const std::vector<int>& predictions, const std::vector<int>& labels,
                                                const std::vector<int>& groups, int cls, int group) {
  std::size_t support = 0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != cls || groups[i] != group) continue;
    ++support;
    hit += predictions[i] == cls;
  }
  if (support == 0) return std::nullopt;
  return static_cast<double>(hit) / static_cast<double>(support);
}

inline void check_lengths(const std::vector<int>& predictions, const std::vector<int>& labels, const std::vector<int>& groups) {
  require(!labels.empty(), "empty sample");
  require(predictions.size() == labels.size() && groups.size() == labels.size(), "prediction, label and group counts differ");
}

}  // namespace detail

/// |TPR(group A) - TPR(group B)| for the positive class (label 1).
inline double tpr_gap(const std::vector<int>& predictions, const std::vector<int>& labels, const std::vector<int>& groups) {
  detail::check_lengths(predictions, labels, groups);
  const auto [a, b] = detail::two_groups(groups);
  const auto ta = detail::true_positive_rate(predictions, labels, groups, 1, a);
  const auto tb = detail::true_positive_rate(predictions, labels, groups, 1, b);
  if (!ta || !tb) throw UndefinedMetricError("a group has no positive-label samples; TPR gap is undefined");
  return std::abs(*ta - *tb);
}

struct TprRms {
  double value = 0.0;
  std::vector<int> skipped_classes;  // classes absent from one of the groups
};

/// Root mean square over classes of the per-class TPR gap between the two
/// groups. Classes missing from either group are skipped and reported.
inline TprRms tpr_rms(const std::vector<int>& predictions, const std::vector<int>& labels, const std::vector<int>& groups) {
  detail::check_lengths(predictions, labels, groups);
  const auto [a, b] = detail::two_groups(groups);
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  TprRms out;
  double sum = 0.0;
  int used = 0;
  for (int c : classes) {
    const auto ta = detail::true_positive_rate(predictions, labels, groups, c, a);
    const auto tb = detail::true_positive_rate(predictions, labels, groups, c, b);
    if (!ta || !tb) {
      out.skipped_classes.push_back(c);
      continue;
    }
    sum += (*ta - *tb) * (*ta - *tb);
    ++used;
  }
  if (used == 0) throw UndefinedMetricError("no class is present in both groups; TPR RMS is undefined");
  out.value = std::sqrt(sum / used);
  return out;
}

/// Average ranks (1-based), ties sharing the mean of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size() && a.size() >= 2, "correlation needs two equal-length samples of size >= 2");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw UndefinedMetricError("correlation with a constant sample is undefined");
  return sab / std::sqrt(saa * sbb);
}

/// Pearson correlation of average ranks.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(average_ranks(a), average_ranks(b));
}

/// Cosine similarity; zero when either vector is zero.
template <class A, class B>
double cosine(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace salkit
