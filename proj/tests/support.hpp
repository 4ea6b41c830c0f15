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

// Shared helpers for the test programs: random data with a known shape and
// the hand-counted metric fixtures.

#include <filesystem>
#include <string>
#include <vector>

#include "salkit/dataset.hpp"
#include "salkit/rng.hpp"

namespace salkit::testing {

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

/// Centered dataset with a continuous guarded block (not derived from labels).
/// Inputs are correlated with the guarded block so every singular value is
/// well separated from zero.
inline LabeledDataset random_continuous(Index n, Index d, Index d_guarded, std::uint64_t seed) {
  LabeledDataset ds;
  ds.guarded = gaussian(n, d_guarded, seed);
  ds.inputs = gaussian(n, d, seed + 1) + ds.guarded * gaussian(d_guarded, d, seed + 2);
  ds.task_labels.assign(static_cast<std::size_t>(n), 0);
  ds.task_levels = {"0"};
  ds.attribute_labels.assign(static_cast<std::size_t>(n), 0);
  ds.attribute_levels = {"0"};
  ds.input_mean = Vector::Zero(d);
  ds.guarded_mean = Vector::Zero(d_guarded);
  for (Index i = 0; i < n; ++i) ds.ids.push_back(std::to_string(i));
  return center(std::move(ds));
}

/// Dataset whose attribute has `levels` classes drawn uniformly, with a
/// class-dependent shift along random directions.
inline LabeledDataset random_categorical(Index n, Index d, int levels, std::uint64_t seed, double shift = 2.0) {
  Rng rng(seed);
  Matrix x = gaussian(n, d, seed + 7);
  const Matrix means = gaussian(levels, d, seed + 11) * shift;
  std::vector<std::string> task, attr;
  for (Index i = 0; i < n; ++i) {
    const auto c = static_cast<Index>(rng.below(static_cast<std::uint64_t>(levels)));
    x.row(i) += means.row(c);
    attr.push_back(std::to_string(c));
    task.push_back(rng.uniform() < 0.5 ? "a" : "b");
  }
  return make_dataset(std::move(x), task, attr);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("salkit_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Binary TPR-gap fixture: both groups hold four positives; group 0 recovers
// all four, group 1 recovers one. Negatives are predicted correctly.
struct MetricFixture {
  std::vector<int> predictions, labels, groups;
};

inline MetricFixture tpr_gap_fixture() {
  MetricFixture f;
  auto add = [&f](int group, int label, int pred, int count) {
    for (int i = 0; i < count; ++i) {
      f.groups.push_back(group);
      f.labels.push_back(label);
      f.predictions.push_back(pred);
    }
  };
  add(0, 1, 1, 4);
  add(0, 0, 0, 3);
  add(1, 1, 1, 1);
  add(1, 1, 0, 3);
  add(1, 0, 0, 3);
  return f;  // TPR 4/4 vs 1/4 -> gap 0.75
}

// Two-class TPR-RMS fixture with ten samples per (class, group) cell:
// class 0 is recovered 8/10 vs 5/10 (gap 0.3), class 1 9/10 vs 5/10 (0.4).
inline MetricFixture tpr_rms_fixture() {
  MetricFixture f;
  auto cell = [&f](int group, int label, int hits) {
    for (int i = 0; i < 10; ++i) {
      f.groups.push_back(group);
      f.labels.push_back(label);
      f.predictions.push_back(i < hits ? label : 1 - label);
    }
  };
  cell(0, 0, 8);
  cell(1, 0, 5);
  cell(0, 1, 9);
  cell(1, 1, 5);
  return f;  // sqrt((0.09 + 0.16) / 2) = 0.35355
}

}  // namespace salkit::testing
