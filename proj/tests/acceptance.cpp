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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Thresholds are fixed here on
// purpose; a failing check is a finding, not something to tune away.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "salkit/evaluation.hpp"
#include "salkit/serialize.hpp"
#include "support.hpp"

namespace {

using namespace salkit;
using salkit::testing::gaussian;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return text::format_double(v, 6); }

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Independent spectral norm (Jacobi SVD), not the library's helper.
double norm2(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

struct Splits {
  LabeledDataset train, test;
};

Splits split(const LabeledDataset& ds, std::uint64_t seed = 0) {
  const Split s = train_test_split(ds.size(), 0.7, seed);
  return {subset(ds, s.train), subset(ds, s.test)};
}

SyntheticSpec planted_bias_spec() {
  SyntheticSpec spec;
  spec.n = 2000;
  spec.d = 50;
  spec.bias_rank = 1;
  spec.bias_strength = 3.0;
  spec.task_strength = 3.0;
  spec.seed = 7;
  return spec;
}

Outcome residual_covariance_identity() {
  const LabeledDataset ds = salkit::testing::random_continuous(500, 20, 3, 0);
  const double n = static_cast<double>(ds.size());
  Eigen::JacobiSVD<Matrix> oracle(ds.inputs.transpose() * ds.guarded / n);
  const Vector sigma = oracle.singularValues();
  double worst = 0.0;
  for (Index k = 0; k <= 3; ++k) {
    const SalEraser e = fit_sal(ds, 2.0, k);
    const Matrix projected = ds.inputs * e.projector();
    const double measured = norm2(projected.transpose() * ds.guarded / n);
    const double expected = k < sigma.size() ? sigma(k) : 0.0;
    worst = std::max(worst, std::abs(measured - expected));
  }
  return {worst <= 1e-8, "max |residual - sigma_{k+1}| = " + fmt(worst)};
}

Outcome planted_bias_removal() {
  const Splits s = split(generate_synthetic(planted_bias_spec()));
  ProbeSuite suite;
  const EvalReport before = evaluate_representations(s.train.inputs, s.train, s.test.inputs, s.test, suite);
  const SalEraser e = fit_sal(center(s.train), 2.0, Index{1});
  const EvalReport after = evaluate_representations(apply_eraser(e, s.train.inputs), s.train,
                                                    apply_eraser(e, s.test.inputs), s.test, suite);
  const double drop = before.task_accuracy - after.task_accuracy;
  const bool ok = before.attribute_accuracy >= 0.95 && after.attribute_accuracy <= 0.55 && drop <= 0.02;
  return {ok, "attribute " + fmt(before.attribute_accuracy) + " -> " + fmt(after.attribute_accuracy) + ", task " +
                  fmt(before.task_accuracy) + " -> " + fmt(after.task_accuracy)};
}

Outcome nonlinear_removal() {
  SyntheticSpec spec;
  spec.n = 1000;
  spec.d = 10;
  spec.nonlinear = true;
  spec.seed = 3;
  const Splits s = split(generate_synthetic(spec));
  const LabeledDataset fit_ds = center(s.train);

  ProbeSuite suite;
  suite.kernel_probe = KernelSpec::poly2();
  const SalEraser base = fit_sal(fit_ds, 2.0);
  const SalEraser full = with_k(base, base.rank());
  const EvalReport linear = evaluate_representations(apply_eraser(full, s.train.inputs), s.train,
                                                     apply_eraser(full, s.test.inputs), s.test, suite);

  // A binary attribute gives a rank-1 guarded kernel under the +-1 code, so
  // two directions are only available with the per-class indicator code.
  KsalOptions opt;
  opt.encoding = GuardedEncoding::indicator;
  const KsalEraser ke = fit_ksal(fit_ds, KernelSpec::poly2(), 2, opt);
  const EvalReport kernel = evaluate_ksal(ke, fit_ds, s.test.inputs, s.test);

  const double after_linear = linear.attribute_accuracy_kernel.value_or(0.0);
  const double after_kernel = kernel.attribute_accuracy_kernel.value_or(1.0);
  return {after_linear >= 0.9 && after_kernel <= 0.6,
          "poly2 probe after SAL(k=" + std::to_string(full.k) + ") " + fmt(after_linear) + ", after kSAL-poly2(k=2) " +
              fmt(after_kernel)};
}

Outcome kernel_linear_equivalence() {
  const LabeledDataset ds = center(salkit::testing::random_categorical(60, 6, 2, 4));
  const KsalEraser ke = fit_ksal(ds, KernelSpec::linear(), 1);
  const SalEraser se = fit_sal(ds, 2.0, Index{1});
  const Matrix projected = ds.inputs * se.projector();
  const Matrix k_phi = ds.inputs * ds.inputs.transpose();
  const double err = max_abs(reduced_kernel(ke) - projected * projected.transpose());
  const double tol = 1e-6 * norm2(k_phi);
  return {err <= tol, "max deviation " + fmt(err) + " (tolerance " + fmt(tol) + ")"};
}

Outcome reduced_kernel_closed_form() {
  const LabeledDataset ds = center(salkit::testing::random_categorical(50, 5, 4, 5, 1.0));
  double worst = 0.0;
  for (const KernelSpec spec : {KernelSpec::linear(), KernelSpec::poly2(), KernelSpec::rbf(0.1)}) {
    const Matrix k_phi = gram_matrix(spec, ds.inputs);
    for (const Index k : {0, 1, 3}) {
      const KsalEraser e = fit_ksal(ds, spec, k);
      const Matrix closed = k_phi - k_phi * e.w_block * e.w_block.transpose() * k_phi;
      worst = std::max(worst, max_abs(reduced_kernel(e) - closed) / norm2(k_phi));
    }
  }
  return {worst <= 1e-8, "max relative deviation " + fmt(worst)};
}

Outcome lemma_a() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i)
    worst = std::max(worst, verify_lemma_a(gaussian(5, 8, 100 + 2 * i), gaussian(2, 8, 101 + 2 * i)));
  return {worst <= 1e-8, "max residual " + fmt(worst)};
}

Outcome interpolation() {
  const Splits s = split(generate_synthetic(planted_bias_spec()));
  const SalEraser e = fit_sal(center(s.train), 2.0, Index{1});
  ProbeSuite suite;
  auto attribute_at = [&](double lambda) {
    return evaluate_representations(apply_eraser(e, s.train.inputs, lambda), s.train, apply_eraser(e, s.test.inputs, lambda),
                                     s.test, suite)
        .attribute_accuracy;
  };
  const double at0 = attribute_at(0.0);
  const double at1 = attribute_at(1.0);
  const double identity_err = max_abs(apply_eraser(e, s.test.inputs, 0.0) - s.test.inputs);
  return {at0 - at1 >= 0.3 && identity_err <= 1e-9,
          "attribute accuracy lambda=0 " + fmt(at0) + ", lambda=1 " + fmt(at1) + "; lambda=0 max change " + fmt(identity_err)};
}

Outcome runtime() {
  BenchOptions opt;
  opt.n = 74882;
  opt.d = 768;
  opt.guarded_dim = 1;
  opt.runs = 3;
  const BenchResult r = run_benchmark(opt);
  return {r.sal_median < 5.0 && r.sal_median < r.inlp_median,
          "SAL median " + fmt(r.sal_median) + " s, INLP median " + fmt(r.inlp_median) + " s (" +
              std::to_string(opt.inlp_iterations) + " iterations), ratio " + fmt(r.inlp_median / r.sal_median)};
}

Outcome metric_fixtures() {
  const auto g = salkit::testing::tpr_gap_fixture();
  const auto r = salkit::testing::tpr_rms_fixture();
  const double gap = tpr_gap(g.predictions, g.labels, g.groups);
  const double rms = tpr_rms(r.predictions, r.labels, r.groups).value;
  return {std::abs(gap - 0.75) <= 1e-4 && std::abs(rms - 0.3536) <= 1e-4, "tpr_gap " + fmt(gap) + ", tpr_rms " + fmt(rms)};
}

Outcome serialization_round_trip() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const LabeledDataset ds = salkit::testing::random_continuous(80, 4 + static_cast<Index>(i), 3, 1000 + i);
    const SalEraser e = fit_sal(ds, 2.0, static_cast<Index>(i % 4));
    std::stringstream buf;
    save_eraser(buf, e);
    const SalEraser back = std::get<SalEraser>(load_eraser(buf));
    const Matrix a = e.kept() * e.kept().transpose();
    const Matrix b = back.kept() * back.kept().transpose();
    worst = std::max(worst, max_abs(a - b));
  }
  return {worst <= 1e-12, "max projector difference " + fmt(worst)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "residual-covariance identity", 1.0, residual_covariance_identity},
      {2, "planted-bias removal", 30.0, planted_bias_removal},
      {3, "nonlinear removal", 120.0, nonlinear_removal},
      {4, "kernel-linear equivalence", 1.0, kernel_linear_equivalence},
      {5, "reduced-kernel closed form", 5.0, reduced_kernel_closed_form},
      {6, "eigenvector lemma", 1.0, lemma_a},
      {7, "interpolation", 0.0, interpolation},
      {8, "fit runtime", 0.0, runtime},
      {9, "metric fixtures", 0.0, metric_fixtures},
      {10, "eraser serialization", 0.0, serialization_round_trip},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && seconds >= c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
