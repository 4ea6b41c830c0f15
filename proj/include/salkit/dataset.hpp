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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "salkit/common.hpp"

namespace salkit {

/// n samples of (input x, task label y, guarded attribute encoding z).
///
/// Categorical columns are kept both as integer codes (for probes and
/// fairness metrics) and as their level names (for I/O). `guarded` is the
/// numeric encoding of the attribute: a single +-1 column for binary
/// attributes, a one-hot block for multiclass ones.
struct LabeledDataset {
  std::vector<std::string> ids;
  Matrix inputs;                              // n x d
  std::vector<int> task_labels;               // codes into task_levels
  std::vector<std::string> task_levels;
  std::vector<int> attribute_labels;          // codes into attribute_levels
  std::vector<std::string> attribute_levels;
  Matrix guarded;                             // n x d'
  Vector input_mean;                          // accumulated by center()
  Vector guarded_mean;

  Index size() const { return inputs.rows(); }
  Index dim() const { return inputs.cols(); }
  Index guarded_dim() const { return guarded.cols(); }
  int task_classes() const { return static_cast<int>(task_levels.size()); }
  int attribute_classes() const { return static_cast<int>(attribute_levels.size()); }
};

/// Binary attributes become one column (code 0 -> -1, code 1 -> +1);
/// multiclass attributes become a one-hot block (centered later by center()).
inline Matrix encode_guarded(const std::vector<int>& codes, int levels) {
  require(levels >= 1, "attribute needs at least one level");
  const Index n = static_cast<Index>(codes.size());
  if (levels <= 2) {
    Matrix z(n, 1);
    for (Index i = 0; i < n; ++i) z(i, 0) = codes[i] == 1 ? 1.0 : -1.0;
    return z;
  }
  Matrix z = Matrix::Zero(n, levels);
  for (Index i = 0; i < n; ++i) {
    require(codes[i] >= 0 && codes[i] < levels, "attribute code out of range");
    z(i, codes[i]) = 1.0;
  }
  return z;
}

/// Uncentered class-indicator encoding (one column per level, binary included).
inline Matrix indicator_encoding(const std::vector<int>& codes, int levels) {
  const Index n = static_cast<Index>(codes.size());
  Matrix z = Matrix::Zero(n, levels);
  for (Index i = 0; i < n; ++i) {
    require(codes[i] >= 0 && codes[i] < levels, "attribute code out of range");
    z(i, codes[i]) = 1.0;
  }
  return z;
}

/// Maps string labels to dense codes; levels are sorted so the encoding does
/// not depend on row order.
inline std::pair<std::vector<int>, std::vector<std::string>> encode_levels(const std::vector<std::string>& raw) {
  std::vector<std::string> levels(raw.begin(), raw.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < levels.size(); ++i) index[levels[i]] = static_cast<int>(i);
  std::vector<int> codes;
  codes.reserve(raw.size());
  for (const auto& r : raw) codes.push_back(index.at(r));
  return {std::move(codes), std::move(levels)};
}

inline void validate(const LabeledDataset& ds) {
  const Index n = ds.size();
  if (n < 2) throw DataError("dataset needs at least 2 samples, got " + std::to_string(n));
  require(ds.guarded.rows() == n, "guarded block has " + std::to_string(ds.guarded.rows()) + " rows, expected " + std::to_string(n));
  require(ds.guarded_dim() <= ds.dim(),
          "guarded dimension " + std::to_string(ds.guarded_dim()) + " exceeds input dimension " + std::to_string(ds.dim()));
  require(static_cast<Index>(ds.task_labels.size()) == n, "task label count does not match sample count");
  require(static_cast<Index>(ds.attribute_labels.size()) == n, "attribute label count does not match sample count");
  if (!ds.inputs.allFinite() || !ds.guarded.allFinite()) throw DataError("dataset contains non-finite values");
}

/// Builds a dataset from raw columns. Categorical values are encoded with
/// encode_levels(); the guarded block with encode_guarded().
inline LabeledDataset make_dataset(Matrix inputs, const std::vector<std::string>& task,
                                   const std::vector<std::string>& attribute,
                                   std::vector<std::string> ids = {}) {
  LabeledDataset ds;
  const Index n = inputs.rows();
  ds.inputs = std::move(inputs);
  auto [tc, tl] = encode_levels(task);
  auto [ac, al] = encode_levels(attribute);
  ds.task_labels = std::move(tc);
  ds.task_levels = std::move(tl);
  ds.attribute_labels = std::move(ac);
  ds.attribute_levels = std::move(al);
  ds.guarded = encode_guarded(ds.attribute_labels, ds.attribute_classes());
  if (ids.empty()) {
    ids.reserve(n);
    for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  }
  ds.ids = std::move(ids);
  ds.input_mean = Vector::Zero(ds.dim());
  ds.guarded_mean = Vector::Zero(ds.guarded_dim());
  validate(ds);
  return ds;
}

/// Largest absolute column mean of inputs and guarded, scaled by the data
/// magnitude so that large-valued data is judged fairly.
inline bool is_centered(const LabeledDataset& ds, double tol = 1e-9) {
  const double n = static_cast<double>(ds.size());
  const double xs = std::max(1.0, ds.inputs.cwiseAbs().maxCoeff());
  const double zs = std::max(1.0, ds.guarded.size() ? ds.guarded.cwiseAbs().maxCoeff() : 0.0);
  const double xm = ds.dim() ? (ds.inputs.colwise().sum() / n).cwiseAbs().maxCoeff() : 0.0;
  const double zm = ds.guarded_dim() ? (ds.guarded.colwise().sum() / n).cwiseAbs().maxCoeff() : 0.0;
  return xm <= tol * xs && zm <= tol * zs;
}

/// Subtracts column means from inputs and guarded. Means are added to the
/// stored ones, so input_mean always refers to the original coordinates.
inline LabeledDataset center(LabeledDataset ds) {
  validate(ds);
  const Vector xm = ds.inputs.colwise().mean().transpose();
  const Vector zm = ds.guarded.colwise().mean().transpose();
  ds.inputs.rowwise() -= xm.transpose();
  ds.guarded.rowwise() -= zm.transpose();
  ds.input_mean = (ds.input_mean.size() == xm.size() ? ds.input_mean : Vector::Zero(xm.size())) + xm;
  ds.guarded_mean = (ds.guarded_mean.size() == zm.size() ? ds.guarded_mean : Vector::Zero(zm.size())) + zm;
  return ds;
}

/// Rows `rows` of ds, uncentered: the subset's means are reset to zero
/// and inputs are shifted back to original coordinates.
inline LabeledDataset subset(const LabeledDataset& ds, const std::vector<Index>& rows) {
  LabeledDataset out;
  const Index m = static_cast<Index>(rows.size());
  out.inputs.resize(m, ds.dim());
  out.guarded.resize(m, ds.guarded_dim());
  out.task_levels = ds.task_levels;
  out.attribute_levels = ds.attribute_levels;
  for (Index r = 0; r < m; ++r) {
    const Index i = rows[r];
    require(i >= 0 && i < ds.size(), "subset row out of range");
    out.inputs.row(r) = ds.inputs.row(i) + ds.input_mean.transpose();
    out.guarded.row(r) = ds.guarded.row(i) + ds.guarded_mean.transpose();
    out.task_labels.push_back(ds.task_labels[i]);
    out.attribute_labels.push_back(ds.attribute_labels[i]);
    out.ids.push_back(ds.ids.empty() ? std::to_string(i) : ds.ids[i]);
  }
  out.input_mean = Vector::Zero(ds.dim());
  out.guarded_mean = Vector::Zero(ds.guarded_dim());
  return out;
}

}  // namespace salkit
