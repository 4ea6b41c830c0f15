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
#include <string>

#include "salkit/common.hpp"

namespace salkit {

enum class KernelFamily { linear, poly2, rbf };

struct KernelSpec {
  KernelFamily family = KernelFamily::linear;
  double gamma = 0.1;  // rbf only

  static KernelSpec linear() { return {KernelFamily::linear, 0.1}; }
  static KernelSpec poly2() { return {KernelFamily::poly2, 0.1}; }
  static KernelSpec rbf(double gamma = 0.1) { return {KernelFamily::rbf, gamma}; }

  void check() const {
    if (family == KernelFamily::rbf) require(gamma > 0.0 && std::isfinite(gamma), "rbf kernel needs gamma > 0");
  }
};

inline std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::linear: return "linear";
    case KernelFamily::poly2: return "poly2";
    case KernelFamily::rbf: return "rbf";
  }
  return "?";
}

inline KernelFamily parse_kernel_family(const std::string& s) {
  if (s == "linear") return KernelFamily::linear;
  if (s == "poly2") return KernelFamily::poly2;
  if (s == "rbf") return KernelFamily::rbf;
  throw ContractError("unknown kernel family '" + s + "' (expected linear, poly2 or rbf)");
}

/// linear: x.y, poly2: (1 + x.y)^2, rbf: exp(-gamma |x - y|^2).
template <class A, class B>
double eval_kernel(const KernelSpec& spec, const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  require(x.size() == y.size(), "kernel arguments have lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  switch (spec.family) {
    case KernelFamily::linear: return x.dot(y);
    case KernelFamily::poly2: {
      const double t = 1.0 + x.dot(y);
      return t * t;
    }
    case KernelFamily::rbf: {
      // Element loop so a row and a column vector can be mixed freely.
      double dist = 0.0;
      for (Index i = 0; i < x.size(); ++i) {
        const double t = x(i) - y(i);
        dist += t * t;
      }
      return std::exp(-spec.gamma * dist);
    }
  }
  return 0.0;
}

/// Pairwise kernel values over the rows. Only i <= j is evaluated; the lower
/// triangle is mirrored so the result is exactly symmetric.
inline Matrix gram_matrix(const KernelSpec& spec, const Matrix& rows) {
  spec.check();
  const Index n = rows.rows();
  Matrix k(n, n);
  parallel_for(n, [&](Index i) {
    for (Index j = i; j < n; ++j) k(i, j) = eval_kernel(spec, rows.row(i), rows.row(j));
  });
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) k(i, j) = k(j, i);
  return k;
}

/// kappa(x)_j = K(rows_j, x).
inline Vector kernel_column(const KernelSpec& spec, const Matrix& rows, const Vector& x) {
  require(x.size() == rows.cols(), "input has length " + std::to_string(x.size()) + ", expected " + std::to_string(rows.cols()));
  Vector out(rows.rows());
  for (Index j = 0; j < rows.rows(); ++j) out(j) = eval_kernel(spec, rows.row(j), x);
  return out;
}

/// Entry (i, j) = K(queries_i, rows_j).
inline Matrix cross_gram(const KernelSpec& spec, const Matrix& queries, const Matrix& rows) {
  spec.check();
  require(queries.cols() == rows.cols(), "query and reference dimensions differ");
  Matrix k(queries.rows(), rows.rows());
  parallel_for(queries.rows(), [&](Index i) {
    for (Index j = 0; j < rows.rows(); ++j) k(i, j) = eval_kernel(spec, queries.row(i), rows.row(j));
  });
  return k;
}

}  // namespace salkit
