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
#include <optional>
#include <span>
#include <vector>

#include "salkit/common.hpp"
#include "salkit/dataset.hpp"

namespace salkit {

struct CrossCovariance {
  Matrix omega;  // d x d'
  Index n_samples = 0;
};

/// Omega = (1/n) sum_i x_i z_i^T over a centered dataset.
inline CrossCovariance compute_cross_covariance(const LabeledDataset& ds) {
  validate(ds);
  require(is_centered(ds), "cross-covariance needs a centered dataset; call center() first");
  CrossCovariance cov;
  cov.n_samples = ds.size();
  cov.omega = ds.inputs.transpose() * ds.guarded / static_cast<double>(ds.size());
  return cov;
}

/// Count of singular values above kRankTolerance * sigma[0].
inline Index numerical_rank(const Vector& sigma) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double floor = kRankTolerance * sigma(0);
  Index r = 0;
  while (r < sigma.size() && sigma(r) > floor) ++r;
  return r;
}

/// Smallest k >= 1 with sigma[0] / sigma[k] > alpha. A sigma[k] under the rank
/// floor counts as satisfying the ratio, and when no k below the rank works the
/// full rank is returned.
inline Index select_k(const Vector& sigma, double alpha) {
  require(sigma.size() > 0, "select_k needs at least one singular value");
  require(alpha >= 1.0, "alpha must be >= 1");
  for (Index i = 1; i < sigma.size(); ++i)
    require(sigma(i) <= sigma(i - 1) && sigma(i) >= 0.0, "singular values must be non-negative and non-increasing");
  const Index rank = numerical_rank(sigma);
  if (rank == 0) return 0;
  for (Index k = 1; k < rank; ++k)
    if (sigma(0) / sigma(k) > alpha) return k;
  return rank;
}

/// Fitted linear eraser. Directions 0..k-1 of u co-vary most with the
/// guarded attribute and are removed; the remaining d-k columns span the kept
/// space.
struct SalEraser {
  Matrix u;      // d x d
  Vector sigma;  // min(d, d')
  Matrix v;      // d' x d'
  Index k = 0;
  double alpha = 1.0;
  Vector input_mean;

  Index dim() const { return u.rows(); }
  Index guarded_dim() const { return v.rows(); }
  Index rank() const { return numerical_rank(sigma); }

  auto removed() const { return u.leftCols(k); }
  auto kept() const { return u.rightCols(dim() - k); }

  /// Ubar Ubar^T, computed as I - U_k U_k^T.
  Matrix projector() const {
    const Matrix uk = u.leftCols(k);
    Matrix p = -uk * uk.transpose();
    p.diagonal().array() += 1.0;
    return p;
  }
};

namespace detail {

// Flips each column of u so its largest-magnitude entry is positive, and the
// paired column of v with it.
inline void canonicalize_signs(Matrix& u, Matrix& v, Index paired) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index arg = 0;
    u.col(j).cwiseAbs().maxCoeff(&arg);
    if (u(arg, j) < 0.0) {
      u.col(j) *= -1.0;
      if (j < paired) v.col(j) *= -1.0;
    }
  }
}

}  // namespace detail

/// SVD of a precomputed cross-covariance. k comes from select_k(alpha)
/// unless k_override is given.
inline SalEraser fit_sal(const CrossCovariance& cov, const Vector& input_mean, double alpha,
                         std::optional<Index> k_override = std::nullopt) {
  require(alpha >= 1.0, "alpha must be >= 1");
  require(cov.omega.rows() >= cov.omega.cols(), "guarded dimension exceeds input dimension");
  require(input_mean.size() == cov.omega.rows(), "input mean length does not match cross-covariance rows");
  if (!cov.omega.allFinite()) throw NumericError("cross-covariance has non-finite entries; SVD is undefined");

  Eigen::JacobiSVD<Matrix> svd(cov.omega, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SalEraser e;
  e.u = svd.matrixU();
  e.v = svd.matrixV();
  e.sigma = svd.singularValues();
  if (!e.u.allFinite() || !e.sigma.allFinite()) throw NumericError("SVD of the cross-covariance did not converge");
  detail::canonicalize_signs(e.u, e.v, e.sigma.size());
  e.alpha = alpha;
  e.input_mean = input_mean;

  const Index rank = e.rank();
  if (k_override) {
    require(*k_override >= 0, "k must be non-negative");
    if (*k_override > rank)
      throw ContractError("k=" + std::to_string(*k_override) + " exceeds the numerical rank " + std::to_string(rank) +
                          " of the cross-covariance");
    e.k = *k_override;
  } else {
    e.k = e.sigma.size() ? select_k(e.sigma, alpha) : 0;
  }
  return e;
}

inline SalEraser fit_sal(const LabeledDataset& ds, double alpha, std::optional<Index> k_override = std::nullopt) {
  return fit_sal(compute_cross_covariance(ds), ds.input_mean, alpha, k_override);
}

/// Same eraser with a different number of removed directions.
inline SalEraser with_k(SalEraser e, Index k) {
  require(k >= 0 && k <= e.rank(), "k=" + std::to_string(k) + " outside [0, rank]");
  e.k = k;
  return e;
}

/// Ubar^T (x - mean): coordinates in the kept subspace, length d - k.
inline Vector project_reduce(const SalEraser& e, const Vector& x) {
  require(x.size() == e.dim(), "input has length " + std::to_string(x.size()) + ", eraser expects " + std::to_string(e.dim()));
  return e.kept().transpose() * (x - e.input_mean);
}

/// x - lambda * U_k U_k^T (x - mean); lambda = 1 is the full Ubar Ubar^T projection.
inline Vector project_interpolated(const SalEraser& e, const Vector& x, double lambda) {
  require(x.size() == e.dim(), "input has length " + std::to_string(x.size()) + ", eraser expects " + std::to_string(e.dim()));
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  if (e.k == 0 || lambda == 0.0) return x;
  const Vector centered = x - e.input_mean;
  const auto uk = e.removed();
  const Vector coords = uk.transpose() * centered;
  return x - lambda * (uk * coords);
}

/// Ubar Ubar^T (x - mean) + mean.
inline Vector project_inplace(const SalEraser& e, const Vector& x) { return project_interpolated(e, x, 1.0); }

/// lambda Ubar Ubar^T + (1 - lambda) I.
inline Matrix interpolate_projection(const SalEraser& e, double lambda) {
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  Matrix m = lambda * e.projector();
  m.diagonal().array() += 1.0 - lambda;
  return m;
}

/// Row-wise project_interpolated. Each row goes through the per-sample path,
/// so batch output matches sequential application bit for bit.
inline Matrix transform_rows(const SalEraser& e, const Matrix& rows, double lambda = 1.0) {
  require(rows.cols() == e.dim(), "rows have " + std::to_string(rows.cols()) + " columns, eraser expects " + std::to_string(e.dim()));
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  Matrix out(rows.rows(), rows.cols());
  parallel_for(rows.rows(), [&](Index i) { out.row(i) = project_interpolated(e, rows.row(i).transpose(), lambda).transpose(); });
  return out;
}

/// Row-wise project_reduce.
inline Matrix reduce_rows(const SalEraser& e, const Matrix& rows) {
  require(rows.cols() == e.dim(), "rows have " + std::to_string(rows.cols()) + " columns, eraser expects " + std::to_string(e.dim()));
  Matrix out(rows.rows(), e.dim() - e.k);
  parallel_for(rows.rows(), [&](Index i) { out.row(i) = project_reduce(e, rows.row(i).transpose()).transpose(); });
  return out;
}

/// Spectral norm of the cross-covariance between projected inputs and the
/// guarded block. Equals sigma[k] (zero once k reaches the rank).
inline double residual_covariance(const SalEraser& e, const LabeledDataset& ds) {
  require(ds.dim() == e.dim(), "dataset dimension does not match eraser");
  require(ds.guarded_dim() == e.guarded_dim(), "dataset guarded dimension does not match eraser");
  require(is_centered(ds), "residual covariance needs a centered dataset");
  const Matrix projected = ds.inputs - (ds.inputs * e.removed()) * e.removed().transpose();
  const Matrix cov = projected.transpose() * ds.guarded / static_cast<double>(ds.size());
  return spectral_norm(cov);
}

}  // namespace salkit
