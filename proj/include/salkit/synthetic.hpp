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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "salkit/dataset.hpp"
#include "salkit/rng.hpp"

namespace salkit {

/// Planted-signal dataset description.
///
/// Linear mode: the attribute has bias_rank + 1 classes placed on a regular
/// unit simplex inside a random bias_rank-dimensional frame B, so the
/// population cross-covariance has rank bias_rank (binary for rank 1):
///   x = bias_strength * B q_c + task_strength * (+-1) * T + N(0, I),
/// with T orthogonal to B and the task label independent of the attribute.
///
/// Nonlinear mode: two frame directions p1, p2 carry independent signs a, b
/// and the binary attribute is a * b, so class means coincide and only the
/// product of the two coordinates reveals it. bias_rank is ignored.
struct SyntheticSpec {
  Index n = 1000;
  Index d = 10;
  Index bias_rank = 1;
  double bias_strength = 3.0;
  double task_strength = 3.0;
  bool nonlinear = false;
  std::uint64_t seed = 0;
};

namespace detail {

// Rows are unit-norm vertices of a regular simplex centered at the origin of R^r.
inline Matrix simplex_vertices(Index r) {
  Matrix h = Matrix::Zero(r + 1, r);
  for (Index j = 1; j <= r; ++j) {
    const double s = 1.0 / std::sqrt(static_cast<double>(j * (j + 1)));
    for (Index i = 0; i < j; ++i) h(i, j - 1) = s;
    h(j, j - 1) = -static_cast<double>(j) * s;
  }
  for (Index i = 0; i <= r; ++i) h.row(i).normalize();
  return h;
}

inline Matrix random_frame(Index d, Index cols, Rng& rng) {
  Matrix g(d, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(d, cols);
}

}  // namespace detail

/// Deterministic given spec.seed (see Rng for the exact stream). Draw order:
/// the frame's Gaussian entries column by column, then per sample the
/// attribute draw(s), the task draw and d noise normals.
inline LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
  require(spec.n >= 2, "synthetic dataset needs n >= 2");
  require(spec.d >= 1, "synthetic dataset needs d >= 1");
  require(spec.bias_strength >= 0.0 && spec.task_strength >= 0.0, "signal strengths must be non-negative");
  Rng rng(spec.seed);
  Matrix x(spec.n, spec.d);
  std::vector<std::string> task(static_cast<std::size_t>(spec.n)), attr(static_cast<std::size_t>(spec.n));

  if (!spec.nonlinear) {
    require(spec.bias_rank >= 1, "bias_rank must be >= 1");
    require(spec.bias_rank <= spec.d, "bias_rank " + std::to_string(spec.bias_rank) + " exceeds d=" + std::to_string(spec.d));
    const bool with_task = spec.task_strength > 0.0;
    require(!with_task || spec.bias_rank < spec.d, "no room for a task direction orthogonal to the bias frame");
    const Matrix frame = detail::random_frame(spec.d, spec.bias_rank + (with_task ? 1 : 0), rng);
    const Matrix bias = frame.leftCols(spec.bias_rank) * detail::simplex_vertices(spec.bias_rank).transpose();  // d x (r+1)
    const Vector t = with_task ? Vector(frame.col(spec.bias_rank)) : Vector::Zero(spec.d);
    const auto classes = static_cast<std::uint64_t>(spec.bias_rank + 1);
    for (Index i = 0; i < spec.n; ++i) {
      const auto c = static_cast<Index>(rng.below(classes));
      const int y = static_cast<int>(rng.below(2));
      for (Index j = 0; j < spec.d; ++j) x(i, j) = rng.normal();
      x.row(i) += spec.bias_strength * bias.col(c).transpose() + spec.task_strength * (2.0 * y - 1.0) * t.transpose();
      task[static_cast<std::size_t>(i)] = std::to_string(y);
      attr[static_cast<std::size_t>(i)] = std::to_string(c);
    }
  } else {
    require(spec.d >= 3, "nonlinear mode needs d >= 3");
    const Matrix frame = detail::random_frame(spec.d, 3, rng);
    for (Index i = 0; i < spec.n; ++i) {
      const double a = rng.below(2) ? 1.0 : -1.0;
      const double b = rng.below(2) ? 1.0 : -1.0;
      const int y = static_cast<int>(rng.below(2));
      for (Index j = 0; j < spec.d; ++j) x(i, j) = rng.normal();
      x.row(i) += (spec.bias_strength * (a * frame.col(0) + b * frame.col(1)) +
                   spec.task_strength * (2.0 * y - 1.0) * frame.col(2))
                      .transpose();
      task[static_cast<std::size_t>(i)] = std::to_string(y);
      attr[static_cast<std::size_t>(i)] = a * b > 0.0 ? "1" : "0";
    }
  }
  return make_dataset(std::move(x), task, attr);
}

}  // namespace salkit
