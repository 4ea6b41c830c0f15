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
#include <variant>
#include <vector>

#include "salkit/common.hpp"
#include "salkit/dataset.hpp"
#include "salkit/linear_sal.hpp"
#include "salkit/probes.hpp"

namespace salkit {

/// Iterative null-space projection baseline. Each stored direction is the
/// unit weight vector of an attribute probe; the eraser projects onto the
/// orthogonal complement of their span.
struct InlpEraser {
  std::vector<Vector> directions;
  int iterations = 0;
  Vector input_mean;
  Matrix basis;  // orthonormal basis of span(directions), d x r

  Index dim() const { return input_mean.size(); }

  Matrix projector() const {
    Matrix p = -basis * basis.transpose();
    p.diagonal().array() += 1.0;
    return p;
  }
};

/// Orthonormal basis of the span of `directions` (numerical rank via SVD).
inline Matrix span_basis(const std::vector<Vector>& directions, Index d) {
  if (directions.empty()) return Matrix(d, 0);
  Matrix stacked(d, static_cast<Index>(directions.size()));
  for (std::size_t j = 0; j < directions.size(); ++j) stacked.col(static_cast<Index>(j)) = directions[j];
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const Index r = numerical_rank(svd.singularValues());
  return svd.matrixU().leftCols(r);
}

/// Rebuilds the cached basis after directions are edited or loaded.
inline void refresh_basis(InlpEraser& e) { e.basis = span_basis(e.directions, e.dim()); }

inline double majority_fraction(const std::vector<int>& labels) {
  if (labels.empty()) return 0.0;
  std::vector<std::size_t> counts;
  for (int l : labels) {
    if (static_cast<std::size_t>(l) >= counts.size()) counts.resize(static_cast<std::size_t>(l) + 1, 0);
    ++counts[static_cast<std::size_t>(l)];
  }
  return static_cast<double>(*std::max_element(counts.begin(), counts.end())) / static_cast<double>(labels.size());
}

/// Runs up to `iterations` rounds of: train an attribute probe on the current
/// inputs, stop if it is within 0.02 of chance, otherwise remove its weight
/// direction(s) from the inputs.
inline InlpEraser fit_inlp(const LabeledDataset& ds, int iterations, const ProbeConfig& cfg = {}) {
  validate(ds);
  require(iterations >= 0, "iterations must be non-negative");
  require(is_centered(ds), "INLP needs a centered dataset; call center() first");
  InlpEraser e;
  e.input_mean = ds.input_mean;
  e.basis = Matrix(ds.dim(), 0);
  const double chance = majority_fraction(ds.attribute_labels);
  Matrix current = ds.inputs;
  for (int t = 0; t < iterations; ++t) {
    const LinearProbe probe = train_linear_probe(current, ds.attribute_labels, cfg);
    e.iterations = t + 1;
    if (probe.train_accuracy <= chance + 0.02) break;
    const Matrix dirs = probe.directions();
    for (Index j = 0; j < dirs.cols(); ++j)
      if (dirs.col(j).norm() > 0.0) e.directions.emplace_back(dirs.col(j));
    refresh_basis(e);
    current = ds.inputs - (ds.inputs * e.basis) * e.basis.transpose();
  }
  return e;
}

/// x - lambda * Q Q^T (x - mean), Q the orthonormal basis of the removed span.
inline Vector project_interpolated(const InlpEraser& e, const Vector& x, double lambda) {
  require(x.size() == e.dim(), "input has length " + std::to_string(x.size()) + ", eraser expects " + std::to_string(e.dim()));
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  if (e.basis.cols() == 0 || lambda == 0.0) return x;
  const Vector coords = e.basis.transpose() * (x - e.input_mean);
  return x - lambda * (e.basis * coords);
}

inline Vector project_inplace(const InlpEraser& e, const Vector& x) { return project_interpolated(e, x, 1.0); }

/// Erasers that act in input space.
using LinearEraser = std::variant<SalEraser, InlpEraser>;

inline Index eraser_dim(const LinearEraser& e) {
  return std::visit([](const auto& v) { return v.dim(); }, e);
}

/// Applies the eraser's in-place projector to every row (centered with the
/// eraser's mean, which is added back), blended with the identity by lambda.
inline Matrix apply_eraser(const LinearEraser& eraser, const Matrix& inputs, double lambda = 1.0) {
  const Index d = eraser_dim(eraser);
  require(inputs.cols() == d, "inputs have " + std::to_string(inputs.cols()) + " columns, eraser expects " + std::to_string(d));
  Matrix out(inputs.rows(), inputs.cols());
  std::visit(
      [&](const auto& e) {
        parallel_for(inputs.rows(), [&](Index i) { out.row(i) = project_interpolated(e, inputs.row(i).transpose(), lambda).transpose(); });
      },
      eraser);
  return out;
}

}  // namespace salkit
