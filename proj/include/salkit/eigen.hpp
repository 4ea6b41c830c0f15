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
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "salkit/common.hpp"

namespace salkit {

struct EigenPairs {
  Matrix vectors;  // n x k, unit columns
  Vector values;   // k, descending
};

struct ArnoldiOptions {
  double tolerance = 1e-10;  // Ritz residual, relative to |A|_F
  std::uint64_t seed = 0x5a15eedULL;
};

namespace detail {

inline Vector random_unit(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = u(rng);
  return v.normalized();
}

// Two passes of classical Gram-Schmidt against the first `m` columns.
inline Vector orthogonalize(const Matrix& basis, Index m, Vector w, Vector* coeffs = nullptr) {
  Vector total = Vector::Zero(m);
  for (int pass = 0; pass < 2; ++pass) {
    const Vector c = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * c;
    total += c;
  }
  if (coeffs) *coeffs = total;
  return w;
}

}  // namespace detail

/// Eigenvectors of a square (possibly nonsymmetric) matrix for its k largest
/// real eigenvalues, by Arnoldi iteration with full reorthogonalization.
///
/// The Krylov basis grows until the k leading Ritz pairs have residual
/// |h_{m+1,m} s_m| below tolerance * |A|_F. An invariant subspace (breakdown)
/// is continued from a fresh random vector, so degenerate spectra are handled
/// and at m = n the factorization is exact. The matrix is expected to have a
/// real spectrum (e.g. a product of PSD matrices); a wanted eigenvalue with an
/// imaginary part above 1e-6 |A| raises NumericError.
///
/// Clusters of exactly repeated eigenvalues are only resolved once the Krylov
/// space breaks down, as with any single-vector Krylov method.
inline EigenPairs top_eigenvectors(const Matrix& a, Index k, const ArnoldiOptions& opt = {}) {
  require(a.rows() == a.cols(), "eigenproblem needs a square matrix, got " + shape(a.rows(), a.cols()));
  const Index n = a.rows();
  require(k >= 0 && k <= n, "k=" + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
  if (!a.allFinite()) throw NumericError("eigenproblem matrix has non-finite entries");
  EigenPairs out;
  out.vectors.resize(n, k);
  out.values.resize(k);
  if (k == 0) return out;

  const double norm = a.norm();
  if (norm == 0.0) {
    out.vectors = Matrix::Identity(n, k);
    out.values.setZero();
    return out;
  }

  std::mt19937_64 rng(opt.seed);
  // Storage grows with the Krylov dimension; n x n is only reached when
  // convergence needs the full space.
  Index capacity = std::min(n, 2 * k + 10) + 1;
  Matrix basis(n, capacity);
  Matrix h = Matrix::Zero(capacity, capacity - 1);
  basis.col(0) = detail::random_unit(n, rng);

  Index next_check = std::min(n, 2 * k + 10);
  Eigen::VectorXcd ritz_values;
  Eigen::MatrixXcd ritz_vectors;
  std::vector<Index> order;

  for (Index m = 1; m <= n; ++m) {
    // Extend the factorization A V_m = V_m H_m + h_{m+1,m} v_{m+1} e_m^T.
    const Index j = m - 1;
    if (m + 1 > capacity) {
      const Index grown = std::min(n + 1, 2 * capacity);
      basis.conservativeResize(Eigen::NoChange, grown);
      h.conservativeResizeLike(Matrix::Zero(grown, grown - 1));
      capacity = grown;
    }
    Vector coeffs;
    Vector w = detail::orthogonalize(basis, m, a * basis.col(j), &coeffs);
    h.block(0, j, m, 1) = coeffs;
    double beta = w.norm();
    if (beta <= 1e-12 * norm) {
      h(m, j) = 0.0;
      if (m < n) {
        // Invariant subspace reached: restart the Krylov sequence orthogonally.
        Vector fresh = Vector::Zero(n);
        for (int attempt = 0; attempt < 8 && fresh.norm() < 1e-8; ++attempt)
          fresh = detail::orthogonalize(basis, m, detail::random_unit(n, rng));
        if (fresh.norm() < 1e-8) throw NumericError("Arnoldi could not extend an orthonormal basis");
        basis.col(m) = fresh.normalized();
      }
    } else {
      h(m, j) = beta;
      if (m < n) basis.col(m) = w / beta;
    }
    if (m < k || (m < next_check && m < n)) continue;
    next_check = std::min(n, m + std::max<Index>(10, m / 2));

    Eigen::EigenSolver<Matrix> es(h.topLeftCorner(m, m));
    if (es.info() != Eigen::Success) throw NumericError("Hessenberg eigensolver failed");
    ritz_values = es.eigenvalues();
    ritz_vectors = es.eigenvectors();
    order.resize(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index p, Index q) { return ritz_values(p).real() > ritz_values(q).real(); });
    bool converged = true;
    for (Index i = 0; i < k && converged; ++i) {
      const Index c = order[static_cast<std::size_t>(i)];
      const double resid = std::abs(h(m, m - 1)) * std::abs(ritz_vectors(m - 1, c)) / ritz_vectors.col(c).norm();
      converged = resid <= opt.tolerance * norm;
    }
    if (!converged && m < n) continue;

    for (Index i = 0; i < k; ++i) {
      const Index c = order[static_cast<std::size_t>(i)];
      const std::complex<double> lambda = ritz_values(c);
      if (std::abs(lambda.imag()) > 1e-6 * norm)
        throw NumericError("eigenvalue " + std::to_string(lambda.real()) + "+" + std::to_string(lambda.imag()) +
                           "i is not real; the matrix is not a product of PSD matrices");
      Eigen::VectorXcd s = ritz_vectors.col(c);
      Index arg = 0;
      s.cwiseAbs().maxCoeff(&arg);
      s *= std::conj(s(arg)) / std::abs(s(arg));
      Vector y = basis.leftCols(m) * s.real();
      y.normalize();
      const double resid = (a * y - lambda.real() * y).norm();
      if (resid > 1e-6 * norm)
        throw NumericError("eigenpair residual " + std::to_string(resid) + " exceeds tolerance");
      out.vectors.col(i) = y;
      out.values(i) = lambda.real();
    }
    return out;
  }
  throw NumericError("Arnoldi iteration did not converge");
}

}  // namespace salkit
