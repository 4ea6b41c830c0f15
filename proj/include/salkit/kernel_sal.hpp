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
#include <vector>

#include "salkit/common.hpp"
#include "salkit/dataset.hpp"
#include "salkit/eigen.hpp"
#include "salkit/kernel.hpp"

namespace salkit {

/// How the linear kernel over the guarded attribute is built.
enum class GuardedEncoding {
  dataset,    // the dataset's centered guarded block (+-1 column or centered one-hot)
  indicator,  // uncentered one-hot class indicators, one column per level
};

struct KsalOptions {
  GuardedEncoding encoding = GuardedEncoding::dataset;
  ArnoldiOptions arnoldi{};
};

/// Fitted kernel eraser.
///
/// w_block holds the K-orthonormal leading eigenvectors of
/// Gamma = K_psi K_phi, so Phi W are the removed feature-space directions
/// (W^T K_phi W = I). k_sqrt is K_phi^{1/2} from the SVD of K_phi and
/// l_basis an orthonormal basis of the null space of (K^{1/2} W)^T.
struct KsalEraser {
  Matrix train_inputs;  // n x d, centered
  KernelSpec spec;
  Matrix w_block;       // n x k
  Matrix k_sqrt;        // n x n
  Matrix l_basis;       // n x (n - k)
  Matrix kw;            // K_phi W, n x k
  Vector eigenvalues;   // leading eigenvalues of Gamma, descending
  Index k = 0;
  Vector input_mean;

  Index size() const { return train_inputs.rows(); }
  Index dim() const { return train_inputs.cols(); }
};

namespace detail {

// Modified Gram-Schmidt under <a, b> = a^T K b, two sweeps per vector.
// Vectors whose K-norm^2 falls below drop_tol are discarded.
inline Matrix k_orthonormalize(const Matrix& vectors, const Matrix& kmat, double drop_tol) {
  std::vector<Vector> accepted;
  std::vector<Vector> k_accepted;  // K q for each accepted q
  for (Index i = 0; i < vectors.cols(); ++i) {
    Vector v = vectors.col(i).normalized();
    for (int sweep = 0; sweep < 2; ++sweep)
      for (std::size_t j = 0; j < accepted.size(); ++j) v -= k_accepted[j].dot(v) * accepted[j];
    Vector kv = kmat * v;
    const double norm2 = v.dot(kv);
    if (!(norm2 > drop_tol)) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    accepted.push_back(v * inv);
    k_accepted.push_back(kv * inv);
  }
  Matrix out(vectors.rows(), static_cast<Index>(accepted.size()));
  for (std::size_t j = 0; j < accepted.size(); ++j) out.col(static_cast<Index>(j)) = accepted[j];
  return out;
}

// Orthonormal basis of the null space of a (rows x n), via full SVD.
inline Matrix null_space(const Matrix& a, Index n) {
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double floor = s.size() ? 1e-10 * s(0) : 0.0;
  Index r = 0;
  while (r < s.size() && s(r) > floor) ++r;
  return svd.matrixV().rightCols(n - r);
}

struct GramRoot {
  Matrix sqrt;  // U S^{1/2} V^T
  double norm = 0.0;
};

inline GramRoot gram_root(const Matrix& k_phi) {
  Eigen::BDCSVD<Matrix> svd(k_phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (!svd.singularValues().allFinite()) throw NumericError("SVD of the input Gram matrix failed");
  GramRoot r;
  r.norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  r.sqrt = svd.matrixU() * svd.singularValues().cwiseSqrt().asDiagonal() * svd.matrixV().transpose();
  return r;
}

}  // namespace detail

/// Recomputes k_sqrt, kw and l_basis from train_inputs, spec and w_block
/// (used when an eraser is loaded from disk).
inline void rebuild_derived(KsalEraser& e) {
  const Matrix k_phi = gram_matrix(e.spec, e.train_inputs);
  e.k_sqrt = detail::gram_root(k_phi).sqrt;
  e.k = e.w_block.cols();
  e.kw = k_phi * e.w_block;
  e.l_basis = detail::null_space((e.k_sqrt * e.w_block).transpose(), e.size());
}

/// Fits kernel SAL with k removed directions on a centered dataset. The
/// guarded side always uses a linear kernel.
inline KsalEraser fit_ksal(const LabeledDataset& ds, const KernelSpec& spec, Index k, const KsalOptions& opt = {}) {
  validate(ds);
  spec.check();
  require(is_centered(ds), "kernel SAL needs a centered dataset; call center() first");
  const Index n = ds.size();
  require(k >= 0 && k <= n, "k=" + std::to_string(k) + " outside [0, n]");

  KsalEraser e;
  e.spec = spec;
  e.train_inputs = ds.inputs;
  e.input_mean = ds.input_mean;

  const Matrix k_phi = gram_matrix(spec, ds.inputs);
  const Matrix z = opt.encoding == GuardedEncoding::dataset ? ds.guarded
                                                           : indicator_encoding(ds.attribute_labels, ds.attribute_classes());
  // Gamma = K_psi K_phi = Z (Z^T K_phi); never materialize K_psi.
  const Matrix gamma = z * (z.transpose() * k_phi);

  const detail::GramRoot root = detail::gram_root(k_phi);
  e.k_sqrt = root.sqrt;

  if (k > 0) {
    const EigenPairs pairs = top_eigenvectors(gamma, k, opt.arnoldi);
    const double floor = kRankTolerance * gamma.norm();
    Index usable = 0;
    while (usable < k && pairs.values(usable) > floor) ++usable;
    if (usable < k)
      throw ContractError("k=" + std::to_string(k) + " exceeds the " + std::to_string(usable) +
                          " eigenvalues of K_psi K_phi above tolerance");
    e.eigenvalues = pairs.values;
    e.w_block = detail::k_orthonormalize(pairs.vectors, k_phi, 1e-10 * root.norm);
  } else {
    e.w_block.resize(n, 0);
    e.eigenvalues.resize(0);
  }
  e.k = e.w_block.cols();
  e.kw = k_phi * e.w_block;
  e.l_basis = detail::null_space((e.k_sqrt * e.w_block).transpose(), n);
  return e;
}

/// W^T kappa(x - mean): coordinates of phi(x) along the removed directions.
inline Vector kernel_project_removed(const KsalEraser& e, const Vector& x) {
  require(x.size() == e.dim(), "input has length " + std::to_string(x.size()) + ", eraser expects " + std::to_string(e.dim()));
  return e.w_block.transpose() * kernel_column(e.spec, e.train_inputs, x - e.input_mean);
}

/// Rows of K^{1/2} L: the debiased training representations.
inline Matrix reduced_train_features(const KsalEraser& e) { return e.k_sqrt * e.l_basis; }

/// K^{1/2} L L^T K^{1/2}^T.
inline Matrix reduced_kernel(const KsalEraser& e) {
  const Matrix f = reduced_train_features(e);
  Matrix out = f * f.transpose();
  // Symmetrize away rounding in the product.
  return 0.5 * (out + out.transpose());
}

/// kappa(x) - K W W^T kappa(x): reduced kernel values between a new point
/// and every training point.
inline Vector reduced_cross_kernel(const KsalEraser& e, const Vector& x) {
  require(x.size() == e.dim(), "input has length " + std::to_string(x.size()) + ", eraser expects " + std::to_string(e.dim()));
  const Vector kappa = kernel_column(e.spec, e.train_inputs, x - e.input_mean);
  return kappa - e.kw * (e.w_block.transpose() * kappa);
}

/// reduced_cross_kernel for each row of `queries` (row i of the result).
inline Matrix reduced_cross_gram(const KsalEraser& e, const Matrix& queries) {
  require(queries.cols() == e.dim(), "queries have " + std::to_string(queries.cols()) + " columns, eraser expects " + std::to_string(e.dim()));
  Matrix out(queries.rows(), e.size());
  parallel_for(queries.rows(), [&](Index i) { out.row(i) = reduced_cross_kernel(e, queries.row(i).transpose()).transpose(); });
  return out;
}

/// gamma / rho: mean absolute entry change over the population standard
/// deviation of the original kernel entries.
inline double kernel_deviation_ratio(const Matrix& k_phi, const Matrix& k_hat) {
  require(k_phi.rows() == k_hat.rows() && k_phi.cols() == k_hat.cols(), "kernel matrices differ in shape");
  require(k_phi.size() > 0, "empty kernel matrix");
  const double count = static_cast<double>(k_phi.size());
  const double mean = k_phi.sum() / count;
  const double rho = std::sqrt((k_phi.array() - mean).square().sum() / count);
  if (!(rho > 0.0)) throw UndefinedMetricError("kernel matrix is constant; deviation ratio is undefined");
  const double gamma = (k_hat - k_phi).cwiseAbs().sum() / count;
  return gamma / rho;
}

/// Numeric check that Phi w is an eigenvector of Omega Omega^T for every
/// eigenpair (w, lambda) of K_psi K_phi, with explicit features
/// phi (m x n) and psi (m' x n). Returns the worst relative residual
/// |Omega Omega^T Phi w - lambda Phi w| / (|Phi w| |Omega Omega^T|).
/// Pairs with Phi w numerically zero carry no information and are skipped.
inline double verify_lemma_a(const Matrix& phi, const Matrix& psi) {
  require(phi.cols() == psi.cols(), "feature matrices must have the same number of samples");
  const Matrix omega = phi * psi.transpose();
  const Matrix oo = omega * omega.transpose();
  const double oo_norm = spectral_norm(oo);
  if (oo_norm == 0.0) return 0.0;
  const Matrix gamma = (psi.transpose() * psi) * (phi.transpose() * phi);
  Eigen::EigenSolver<Matrix> es(gamma);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed on K_psi K_phi");
  const double phi_norm = phi.norm();
  const double gamma_norm = gamma.norm();
  double worst = 0.0;
  for (Index i = 0; i < gamma.rows(); ++i) {
    const std::complex<double> lambda = es.eigenvalues()(i);
    if (std::abs(lambda.imag()) > 1e-8 * gamma_norm) continue;
    Eigen::VectorXcd w = es.eigenvectors().col(i);
    Index arg = 0;
    w.cwiseAbs().maxCoeff(&arg);
    w *= std::conj(w(arg)) / std::abs(w(arg));
    const Vector wr = w.real();
    const Vector u = phi * wr;
    if (u.norm() <= 1e-8 * phi_norm * wr.norm()) continue;
    const double r = (oo * u - lambda.real() * u).norm() / (u.norm() * oo_norm);
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace salkit
