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
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "salkit/dataset.hpp"
#include "salkit/inlp.hpp"
#include "salkit/kernel_sal.hpp"
#include "salkit/linear_sal.hpp"
#include "salkit/metrics.hpp"
#include "salkit/probes.hpp"
#include "salkit/rng.hpp"
#include "salkit/synthetic.hpp"

namespace salkit {

/// Measurements taken after one removal setting.
struct EvalReport {
  double task_accuracy = 0.0;
  double attribute_accuracy = 0.0;                     // linear probe
  std::optional<double> attribute_accuracy_kernel;     // kernel probe, when requested
  std::optional<double> tpr_gap;                       // binary task
  std::optional<double> tpr_rms;                       // multiclass task
  std::optional<double> deviation_ratio;
  std::map<std::string, double> similarity_correlations;
  std::vector<std::string> notes;                      // undefined metrics and skipped classes
};

struct Split {
  std::vector<Index> train;
  std::vector<Index> test;
};

/// Seeded shuffle split; train gets round(train_fraction * n) rows, both sides sorted.
inline Split train_test_split(Index n, double train_fraction, std::uint64_t seed) {
  require(train_fraction > 0.0 && train_fraction < 1.0, "train fraction must lie in (0, 1)");
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  Rng rng(seed);
  for (Index i = n - 1; i > 0; --i) std::swap(idx[static_cast<std::size_t>(i)], idx[rng.below(static_cast<std::uint64_t>(i + 1))]);
  const auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

/// Seeded subsample of `fraction` of the rows (at least 2).
inline std::vector<Index> subsample(Index n, double fraction, std::uint64_t seed) {
  require(fraction > 0.0 && fraction <= 1.0, "fraction must lie in (0, 1]");
  Split s = train_test_split(n, std::min(fraction, 1.0 - 1e-12), seed);
  if (s.train.size() < 2) s.train = {0, 1};
  return s.train;
}

/// Held-out accuracy of a linear probe.
inline double linear_probe_accuracy(const Matrix& train_x, const std::vector<int>& train_y, const Matrix& test_x,
                                    const std::vector<int>& test_y, const ProbeConfig& cfg = {}) {
  return accuracy(predict(train_linear_probe(train_x, train_y, cfg), test_x), test_y);
}

/// Held-out accuracy of a dual probe given train Gram and test-vs-train kernel rows.
inline double dual_probe_accuracy(const Matrix& train_gram, const std::vector<int>& train_y, const Matrix& test_cross,
                                  const std::vector<int>& test_y, const ProbeConfig& cfg = {}) {
  return accuracy(predict(train_dual_probe(train_gram, train_y, cfg), test_cross), test_y);
}

/// Fills tpr_gap (binary task) or tpr_rms (multiclass task); undefined cases
/// become notes instead of errors.
inline void add_fairness(EvalReport& report, const std::vector<int>& predictions, const std::vector<int>& labels,
                         const std::vector<int>& groups, int task_classes) {
  try {
    if (task_classes <= 2) {
      report.tpr_gap = tpr_gap(predictions, labels, groups);
    } else {
      const TprRms r = tpr_rms(predictions, labels, groups);
      report.tpr_rms = r.value;
      if (!r.skipped_classes.empty())
        report.notes.push_back("tpr_rms skipped " + std::to_string(r.skipped_classes.size()) + " class(es) missing from a group");
    }
  } catch (const UndefinedMetricError& e) {
    report.notes.push_back(e.what());
  }
}

/// Probes run on representations already produced by an eraser.
struct ProbeSuite {
  ProbeConfig config{};
  std::optional<KernelSpec> kernel_probe;  // also train a kernel attribute probe
};

/// Evaluates input-space representations: task probe (accuracy + fairness),
/// linear attribute probe and, optionally, a kernel attribute probe.
inline EvalReport evaluate_representations(const Matrix& train_x, const LabeledDataset& train, const Matrix& test_x,
                                           const LabeledDataset& test, const ProbeSuite& suite) {
  EvalReport r;
  const LinearProbe task_probe = train_linear_probe(train_x, train.task_labels, suite.config);
  const std::vector<int> task_pred = predict(task_probe, test_x);
  r.task_accuracy = accuracy(task_pred, test.task_labels);
  add_fairness(r, task_pred, test.task_labels, test.attribute_labels, train.task_classes());
  r.attribute_accuracy = linear_probe_accuracy(train_x, train.attribute_labels, test_x, test.attribute_labels, suite.config);
  if (suite.kernel_probe) {
    const KernelProbe kp = train_kernel_probe(train_x, train.attribute_labels, *suite.kernel_probe, suite.config);
    r.attribute_accuracy_kernel = accuracy(predict(kp, test_x), test.attribute_labels);
  }
  return r;
}

/// Evaluates a fitted kernel eraser: probes run in dual form on the reduced
/// kernel (train) and reduced cross-kernel (test). The linear attribute
/// accuracy slot holds the reduced-kernel attribute probe.
inline EvalReport evaluate_ksal(const KsalEraser& e, const LabeledDataset& train, const Matrix& test_inputs,
                                const LabeledDataset& test, const ProbeConfig& cfg = {}) {
  EvalReport r;
  const Matrix gram = reduced_kernel(e);
  const Matrix cross = reduced_cross_gram(e, test_inputs);
  const DualProbe task_probe = train_dual_probe(gram, train.task_labels, cfg);
  const std::vector<int> task_pred = predict(task_probe, cross);
  r.task_accuracy = accuracy(task_pred, test.task_labels);
  add_fairness(r, task_pred, test.task_labels, test.attribute_labels, train.task_classes());
  const double acc = dual_probe_accuracy(gram, train.attribute_labels, cross, test.attribute_labels, cfg);
  r.attribute_accuracy = acc;
  r.attribute_accuracy_kernel = acc;
  r.deviation_ratio = kernel_deviation_ratio(gram_matrix(e.spec, e.train_inputs), gram);
  return r;
}

struct BenchResult {
  std::vector<double> sal_seconds;
  std::vector<double> inlp_seconds;
  double sal_median = 0.0;
  double inlp_median = 0.0;
  Index sal_k = 0;
  std::size_t inlp_directions = 0;
};

inline double median(std::vector<double> v) {
  require(!v.empty(), "median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct BenchOptions {
  Index n = 100;
  Index d = 10;
  Index guarded_dim = 1;  // planted bias rank; 1 means a binary attribute
  int runs = 3;
  int inlp_iterations = 3;
  double alpha = 2.0;
  std::uint64_t seed = 0;
  ProbeConfig probe{};
};

/// Wall-clock time to learn each projection (centering + fit) on one
/// synthetic dataset, repeated `runs` times.
inline BenchResult run_benchmark(const BenchOptions& opt) {
  require(opt.runs >= 1, "runs must be >= 1");
  SyntheticSpec spec;
  spec.n = opt.n;
  spec.d = opt.d;
  spec.bias_rank = opt.guarded_dim;
  spec.seed = opt.seed;
  const LabeledDataset ds = generate_synthetic(spec);
  using clock = std::chrono::steady_clock;
  BenchResult res;
  for (int run = 0; run < opt.runs; ++run) {
    const auto t0 = clock::now();
    const SalEraser sal = fit_sal(center(ds), opt.alpha);
    const auto t1 = clock::now();
    res.sal_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    res.sal_k = sal.k;
  }
  for (int run = 0; run < opt.runs; ++run) {
    const auto t0 = clock::now();
    const InlpEraser inlp = fit_inlp(center(ds), opt.inlp_iterations, opt.probe);
    const auto t1 = clock::now();
    res.inlp_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    res.inlp_directions = inlp.directions.size();
  }
  res.sal_median = median(res.sal_seconds);
  res.inlp_median = median(res.inlp_seconds);
  return res;
}

}  // namespace salkit
