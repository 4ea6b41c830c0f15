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
#include <cstdint>
#include <vector>

#include "salkit/common.hpp"
#include "salkit/kernel.hpp"
#include "salkit/rng.hpp"

namespace salkit {

/// L2-regularized logistic regression trained by full-batch gradient descent.
/// The step starts at learning_rate and is halved whenever it would increase
/// the objective, so the recorded loss never goes up.
struct ProbeConfig {
  double learning_rate = 0.1;
  int epochs = 200;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

/// Outputs per sample: one logit for two classes, one per class otherwise.
inline Index output_width(int classes) { return classes == 2 ? 1 : classes; }

/// Primal linear probe. weights is d x m with m = output_width(classes).
struct LinearProbe {
  Matrix weights;
  Vector bias;
  int classes = 2;
  ProbeConfig config;
  std::vector<double> loss_history;  // objective after each epoch
  double train_accuracy = 0.0;

  /// Unit-norm weight direction per output (one for binary probes).
  Matrix directions() const {
    Matrix d = weights;
    for (Index j = 0; j < d.cols(); ++j) {
      const double norm = d.col(j).norm();
      if (norm > 0.0) d.col(j) /= norm;
    }
    return d;
  }
};

/// Dual-form probe: scores = K alpha + b, where K holds kernel values between
/// the scored points and the training points.
struct DualProbe {
  Matrix alpha;  // n_train x m
  Vector bias;
  int classes = 2;
  ProbeConfig config;
  std::vector<double> loss_history;
  double train_accuracy = 0.0;
};

/// Kernel probe: a DualProbe plus what is needed to evaluate kappa(x).
struct KernelProbe {
  KernelSpec spec;
  Matrix train_inputs;
  DualProbe model;
};

namespace detail {

struct LossEval {
  double data_loss = 0.0;
  Matrix residual;  // dLoss/dScores, n x m
};

inline int class_count(const std::vector<int>& labels) {
  int c = 0;
  for (int l : labels) {
    require(l >= 0, "labels must be non-negative class codes");
    c = std::max(c, l + 1);
  }
  return c;
}

inline void check_labels(const std::vector<int>& labels, Index n) {
  require(static_cast<Index>(labels.size()) == n, "label count does not match sample count");
  require(n >= 10, "probe training needs at least 10 samples, got " + std::to_string(n));
  const int c = class_count(labels);
  std::vector<int> seen(static_cast<std::size_t>(c), 0);
  for (int l : labels) seen[static_cast<std::size_t>(l)] = 1;
  int present = 0;
  for (int s : seen) present += s;
  require(present >= 2, "probe labels contain a single class");
}

// Mean cross-entropy and its gradient with respect to the scores.
inline LossEval cross_entropy(const Matrix& scores, const std::vector<int>& labels, bool need_residual) {
  const Index n = scores.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  LossEval out;
  if (need_residual) out.residual.resize(n, scores.cols());
  double total = 0.0;
  if (scores.cols() == 1) {
    for (Index i = 0; i < n; ++i) {
      const double s = scores(i, 0);
      const double y = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
      // softplus(s) - y s, computed stably
      total += std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))) - y * s;
      if (need_residual) out.residual(i, 0) = (1.0 / (1.0 + std::exp(-s)) - y) * inv_n;
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      const double mx = scores.row(i).maxCoeff();
      const Eigen::RowVectorXd e = (scores.row(i).array() - mx).exp().matrix();
      const double z = e.sum();
      const int y = labels[static_cast<std::size_t>(i)];
      total += mx + std::log(z) - scores(i, y);
      if (need_residual) {
        out.residual.row(i) = e / z * inv_n;
        out.residual(i, y) -= inv_n;
      }
    }
  }
  out.data_loss = total * inv_n;
  return out;
}

inline std::vector<int> argmax_labels(const Matrix& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Index i = 0; i < scores.rows(); ++i) {
    if (scores.cols() == 1) {
      out[static_cast<std::size_t>(i)] = scores(i, 0) > 0.0 ? 1 : 0;
    } else {
      Index arg = 0;
      scores.row(i).maxCoeff(&arg);
      out[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    }
  }
  return out;
}

inline double fraction_equal(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return a.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(a.size());
}

inline Matrix small_init(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = 1e-4 * rng.normal();
  return m;
}

// Shared descent loop. `features` maps a parameter block (rows x m) to its
// score contribution (n x m); `direction` turns the score residual and the
// current parameters into a descent direction; `penalty` returns the
// regularizer given parameters and their score contribution.
template <class Features, class Direction, class Penalty>
void descend(Matrix& params, Vector& bias, const std::vector<int>& labels, const ProbeConfig& cfg,
             std::vector<double>& history, Features&& features, Direction&& direction, Penalty&& penalty) {
  require(cfg.learning_rate > 0.0 && cfg.epochs >= 0 && cfg.l2 >= 0.0, "invalid probe configuration");
  Matrix linear = features(params);
  auto objective = [&](const Matrix& lin, const Matrix& p, const Vector& b, bool need) {
    Matrix scores = lin;
    scores.rowwise() += b.transpose();
    LossEval ev = cross_entropy(scores, labels, need);
    ev.data_loss += penalty(p, lin);
    return ev;
  };
  LossEval current = objective(linear, params, bias, true);
  if (!std::isfinite(current.data_loss)) throw NumericError("probe loss is not finite at initialization");
  double step = cfg.learning_rate;
  history.clear();
  history.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Matrix dir = direction(current.residual, params);
    const Vector dir_b = -current.residual.colwise().sum().transpose();
    const Matrix dir_lin = features(dir);
    bool moved = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Matrix trial_lin = linear + step * dir_lin;
      const Matrix trial_p = params + step * dir;
      const Vector trial_b = bias + step * dir_b;
      LossEval trial = objective(trial_lin, trial_p, trial_b, true);
      if (std::isnan(trial.data_loss)) throw NumericError("probe loss became NaN");
      if (trial.data_loss <= current.data_loss) {
        params = trial_p;
        bias = trial_b;
        linear = trial_lin;
        current = std::move(trial);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    history.push_back(current.data_loss);
    if (!moved) {
      // No descent possible at machine precision: converged.
      history.resize(static_cast<std::size_t>(cfg.epochs), current.data_loss);
      break;
    }
  }
}

}  // namespace detail

inline Matrix probe_scores(const LinearProbe& p, const Matrix& inputs) {
  require(inputs.cols() == p.weights.rows(), "probe expects " + std::to_string(p.weights.rows()) + " features, got " +
                                                 std::to_string(inputs.cols()));
  Matrix s = inputs * p.weights;
  s.rowwise() += p.bias.transpose();
  return s;
}

inline std::vector<int> predict(const LinearProbe& p, const Matrix& inputs) {
  return detail::argmax_labels(probe_scores(p, inputs));
}

/// Trains a primal probe on rows of `inputs` with class codes `labels`.
inline LinearProbe train_linear_probe(const Matrix& inputs, const std::vector<int>& labels, const ProbeConfig& cfg = {}) {
  detail::check_labels(labels, inputs.rows());
  if (!inputs.allFinite()) throw DataError("probe inputs contain non-finite values");
  LinearProbe p;
  p.classes = detail::class_count(labels);
  p.config = cfg;
  const Index m = output_width(p.classes);
  p.weights = detail::small_init(inputs.cols(), m, cfg.seed);
  p.bias = Vector::Zero(m);
  const double l2 = cfg.l2;
  detail::descend(
      p.weights, p.bias, labels, cfg, p.loss_history, [&](const Matrix& w) -> Matrix { return inputs * w; },
      [&](const Matrix& residual, const Matrix& w) -> Matrix { return -(inputs.transpose() * residual + l2 * w); },
      [&](const Matrix& w, const Matrix&) { return 0.5 * l2 * w.squaredNorm(); });
  p.train_accuracy = detail::fraction_equal(predict(p, inputs), labels);
  return p;
}

inline Matrix probe_scores(const DualProbe& p, const Matrix& cross) {
  require(cross.cols() == p.alpha.rows(), "dual probe expects " + std::to_string(p.alpha.rows()) + " kernel columns, got " +
                                              std::to_string(cross.cols()));
  Matrix s = cross * p.alpha;
  s.rowwise() += p.bias.transpose();
  return s;
}

/// Predictions from kernel values against the training points (row per query).
inline std::vector<int> predict(const DualProbe& p, const Matrix& cross) {
  return detail::argmax_labels(probe_scores(p, cross));
}

/// Kernel logistic regression on a precomputed training Gram matrix.
/// Descends along the functional gradient -(residual + l2 alpha), which is a
/// descent direction for the dual objective whenever the Gram is PSD.
inline DualProbe train_dual_probe(const Matrix& gram, const std::vector<int>& labels, const ProbeConfig& cfg = {}) {
  require(gram.rows() == gram.cols(), "Gram matrix must be square");
  detail::check_labels(labels, gram.rows());
  if (!gram.allFinite()) throw DataError("Gram matrix contains non-finite values");
  DualProbe p;
  p.classes = detail::class_count(labels);
  p.config = cfg;
  const Index m = output_width(p.classes);
  p.alpha = detail::small_init(gram.rows(), m, cfg.seed);
  p.bias = Vector::Zero(m);
  const double l2 = cfg.l2;
  detail::descend(
      p.alpha, p.bias, labels, cfg, p.loss_history, [&](const Matrix& a) -> Matrix { return gram * a; },
      [&](const Matrix& residual, const Matrix& a) -> Matrix { return -(residual + l2 * a); },
      [&](const Matrix& a, const Matrix& ka) { return 0.5 * l2 * a.cwiseProduct(ka).sum(); });
  p.train_accuracy = detail::fraction_equal(predict(p, gram), labels);
  return p;
}

inline KernelProbe train_kernel_probe(const Matrix& inputs, const std::vector<int>& labels, const KernelSpec& spec,
                                      const ProbeConfig& cfg = {}) {
  KernelProbe p;
  p.spec = spec;
  p.train_inputs = inputs;
  p.model = train_dual_probe(gram_matrix(spec, inputs), labels, cfg);
  return p;
}

inline std::vector<int> predict(const KernelProbe& p, const Matrix& inputs) {
  return predict(p.model, cross_gram(p.spec, inputs, p.train_inputs));
}

}  // namespace salkit
