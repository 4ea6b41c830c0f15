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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "salkit/embeddings.hpp"
#include "salkit/linear_sal.hpp"
#include "salkit/metrics.hpp"
#include "support.hpp"

namespace salkit {
namespace {

using testing::gaussian;
using testing::random_continuous;

LabeledDataset tiny(Matrix x, Matrix z) {
  LabeledDataset ds;
  const auto n = static_cast<std::size_t>(x.rows());
  ds.inputs = std::move(x);
  ds.guarded = std::move(z);
  ds.task_labels.assign(n, 0);
  ds.attribute_labels.assign(n, 0);
  ds.task_levels = ds.attribute_levels = {"0"};
  ds.input_mean = Vector::Zero(ds.dim());
  ds.guarded_mean = Vector::Zero(ds.guarded_dim());
  return ds;
}

SalEraser identity_frame(Index d, Index k) {
  SalEraser e;
  e.u = Matrix::Identity(d, d);
  e.sigma = Vector::Ones(1);
  e.v = Matrix::Identity(1, 1);
  e.k = k;
  e.input_mean = Vector::Zero(d);
  return e;
}

double projector_gap(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// ---- centering --------------------------------------------------------------

TEST(Center, SubtractsColumnMeans) {
  Matrix x(2, 1);
  x << 1, 3;
  const LabeledDataset c = center(tiny(x, Matrix::Zero(2, 1)));
  EXPECT_DOUBLE_EQ(c.inputs(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(c.inputs(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(c.input_mean(0), 2.0);
}

TEST(Center, HandArithmetic) {
  Matrix x(3, 2);
  x << 1, 0, 0, 1, 2, 2;
  const LabeledDataset c = center(tiny(x, Matrix::Zero(3, 1)));
  Matrix expected(3, 2);
  expected << 0, -1, -1, 0, 1, 1;
  EXPECT_LE((c.inputs - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_DOUBLE_EQ(c.input_mean(0), 1.0);
  EXPECT_DOUBLE_EQ(c.input_mean(1), 1.0);
}

TEST(Center, ZeroMeanDataUnchanged) {
  Matrix x(2, 2);
  x << 1, -2, -1, 2;
  const LabeledDataset c = center(tiny(x, Matrix::Zero(2, 1)));
  EXPECT_EQ(c.inputs, x);
  EXPECT_EQ(c.input_mean, Vector::Zero(2));
}

TEST(Center, RejectsNonFinite) {
  Matrix x(2, 1);
  x << 1, std::nan("");
  EXPECT_THROW(center(tiny(x, Matrix::Zero(2, 1))), DataError);
}

TEST(Center, RejectsSingleSample) { EXPECT_THROW(center(tiny(Matrix::Ones(1, 2), Matrix::Zero(1, 1))), DataError); }

TEST(Encoding, BinaryIsSignedColumnMulticlassIsOneHot) {
  const LabeledDataset bin = make_dataset(Matrix::Zero(4, 3), {"a", "a", "b", "b"}, {"f", "m", "m", "f"});
  ASSERT_EQ(bin.guarded_dim(), 1);
  EXPECT_EQ(bin.guarded(0, 0), -1.0);
  EXPECT_EQ(bin.guarded(1, 0), 1.0);
  const LabeledDataset multi = center(make_dataset(Matrix::Zero(3, 3), {"a", "a", "b"}, {"x", "y", "z"}));
  ASSERT_EQ(multi.guarded_dim(), 3);
  EXPECT_NEAR(multi.guarded.colwise().sum().cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

// ---- cross-covariance ---------------------------------------------------------

TEST(CrossCovariance, HandExample) {
  Matrix x(2, 2), z(2, 1);
  x << 1, 0, -1, 0;
  z << 1, -1;
  const CrossCovariance c = compute_cross_covariance(tiny(x, z));
  EXPECT_DOUBLE_EQ(c.omega(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(c.omega(1, 0), 0.0);
}

TEST(CrossCovariance, ZeroGuardedGivesZero) {
  const LabeledDataset ds = center(tiny(gaussian(10, 3, 1), Matrix::Zero(10, 2)));
  EXPECT_EQ(compute_cross_covariance(ds).omega, Matrix::Zero(3, 2));
}

TEST(CrossCovariance, SelfCovarianceIsSymmetricPsd) {
  const Matrix x = gaussian(30, 4, 2);
  const LabeledDataset ds = center(tiny(x, x));
  const Matrix omega = compute_cross_covariance(ds).omega;
  EXPECT_LE((omega - omega.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Matrix> es(omega);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
}

TEST(CrossCovariance, RequiresCenteredData) {
  EXPECT_THROW(compute_cross_covariance(tiny(Matrix::Ones(4, 2), Matrix::Ones(4, 1))), ContractError);
}

// ---- select_k -----------------------------------------------------------------

TEST(SelectK, RuleAppliedByHand) {
  EXPECT_EQ(select_k(Vector::Map(std::vector<double>{4, 1, 0.5}.data(), 3), 3.0), 1);
  EXPECT_EQ(select_k(Vector::Ones(3), 2.0), 3);
  EXPECT_EQ(select_k(Vector::Zero(2), 5.0), 0);
}

TEST(SelectK, NoiseFloorSatisfiesRule) {
  Vector s(3);
  s << 1.0, 1.0, 1e-12;
  EXPECT_EQ(select_k(s, 2.0), 2);
}

TEST(SelectK, EmptyIsContractError) { EXPECT_THROW(select_k(Vector(0), 2.0), ContractError); }

// ---- fit_sal ------------------------------------------------------------------

TEST(FitSal, TwoByOneByHand) {
  CrossCovariance c{Matrix::Zero(2, 1), 2};
  c.omega(0, 0) = 1.0;
  for (double alpha : {1.0, 2.0, 100.0}) {
    const SalEraser e = fit_sal(c, Vector::Zero(2), alpha);
    EXPECT_EQ(e.k, 1);
    EXPECT_NEAR(e.sigma(0), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(e.u(0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(e.u(1, 1)), 1.0, 1e-15);
  }
}

TEST(FitSal, ZeroOmegaIsIdentity) {
  const SalEraser e = fit_sal(CrossCovariance{Matrix::Zero(3, 1), 5}, Vector::Zero(3), 2.0);
  EXPECT_EQ(e.k, 0);
  EXPECT_EQ(e.projector(), Matrix::Identity(3, 3));
}

TEST(FitSal, NonFiniteIsNumericError) {
  CrossCovariance c{Matrix::Zero(2, 1), 2};
  c.omega(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(fit_sal(c, Vector::Zero(2), 2.0), NumericError);
}

TEST(FitSal, OverrideAboveRankIsContractError) {
  const LabeledDataset ds = random_continuous(50, 5, 2, 3);
  EXPECT_THROW(fit_sal(ds, 2.0, Index{3}), ContractError);
  EXPECT_NO_THROW(fit_sal(ds, 2.0, Index{2}));
}

TEST(FitSal, FactorsAreOrthonormalAndReconstruct) {
  const LabeledDataset ds = random_continuous(200, 8, 3, 4);
  const SalEraser e = fit_sal(ds, 2.0);
  EXPECT_LE((e.u.transpose() * e.u - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((e.v.transpose() * e.v - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-8);
  const Matrix rebuilt = e.u.leftCols(3) * e.sigma.asDiagonal() * e.v.transpose();
  EXPECT_LE((rebuilt - compute_cross_covariance(ds).omega).cwiseAbs().maxCoeff(), 1e-8);
  for (Index j = 0; j < e.u.cols(); ++j) {
    Index arg = 0;
    e.u.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(e.u(arg, j), 0.0);
  }
}

TEST(FitSal, ScaleEquivariance) {
  const LabeledDataset ds = random_continuous(120, 6, 2, 5);
  LabeledDataset scaled = ds;
  scaled.inputs *= 3.5;
  const SalEraser a = fit_sal(ds, 2.0, Index{1});
  const SalEraser b = fit_sal(scaled, 2.0, Index{1});
  EXPECT_LE((b.sigma - 3.5 * a.sigma).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(projector_gap(a.projector(), b.projector()), 1e-10);
}

// ---- projections --------------------------------------------------------------

TEST(Projection, ReduceByHand) {
  const SalEraser e = identity_frame(2, 1);
  const Vector out = project_reduce(e, Vector::Map(std::vector<double>{3, 4}.data(), 2));
  ASSERT_EQ(out.size(), 1);
  EXPECT_DOUBLE_EQ(out(0), 4.0);
  EXPECT_EQ(project_reduce(identity_frame(2, 2), Vector::Ones(2)).size(), 0);
}

TEST(Projection, ReduceWithoutRemovalPreservesNorm) {
  const SalEraser e = with_k(fit_sal(random_continuous(60, 5, 2, 6), 2.0), 0);
  const Vector x = gaussian(5, 1, 7).col(0);
  EXPECT_NEAR(project_reduce(e, x + e.input_mean).norm(), x.norm(), 1e-10);
}

TEST(Projection, InplaceByHand) {
  const Vector out = project_inplace(identity_frame(2, 1), Vector::Map(std::vector<double>{3, 4}.data(), 2));
  EXPECT_DOUBLE_EQ(out(0), 0.0);
  EXPECT_DOUBLE_EQ(out(1), 4.0);
}

TEST(Projection, IdempotentSymmetricContracting) {
  const SalEraser e = fit_sal(random_continuous(100, 7, 3, 8), 2.0, Index{2});
  const Matrix p = e.projector();
  EXPECT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-10);
  const Vector x = gaussian(7, 1, 9).col(0);
  const Vector once = project_inplace(e, x);
  EXPECT_LE((project_inplace(e, once) - once).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((p * x).norm(), x.norm() + 1e-12);
  EXPECT_LE((project_inplace(with_k(e, 0), x) - x).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Projection, DimensionMismatch) {
  EXPECT_THROW(project_inplace(identity_frame(2, 1), Vector::Ones(3)), ContractError);
  EXPECT_THROW(project_reduce(identity_frame(2, 1), Vector::Ones(1)), ContractError);
}

TEST(Projection, BatchMatchesPerSampleExactly) {
  const LabeledDataset ds = random_continuous(300, 6, 2, 10);
  const SalEraser e = fit_sal(ds, 2.0, Index{1});
  const Matrix batch = transform_rows(e, ds.inputs, 0.7);
  for (Index i = 0; i < ds.size(); ++i)
    ASSERT_EQ(batch.row(i), project_interpolated(e, ds.inputs.row(i).transpose(), 0.7).transpose());
}

TEST(Interpolation, Endpoints) {
  const SalEraser e = fit_sal(random_continuous(80, 4, 2, 11), 2.0, Index{1});
  EXPECT_EQ(interpolate_projection(e, 0.0), Matrix::Identity(4, 4));
  EXPECT_LE(projector_gap(interpolate_projection(e, 1.0), e.projector()), 1e-15);
  EXPECT_THROW(interpolate_projection(e, 1.5), ContractError);
  EXPECT_THROW(interpolate_projection(e, -0.1), ContractError);
}

TEST(Interpolation, HalfwayByHand) {
  const Matrix m = interpolate_projection(identity_frame(2, 1), 0.5);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(m(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.0);
}

// ---- residual covariance ------------------------------------------------------

TEST(ResidualCovariance, MatchesNextSingularValue) {
  const LabeledDataset ds = random_continuous(500, 20, 3, 0);
  const double n = static_cast<double>(ds.size());
  // Oracle: singular values of a freshly recomputed cross-covariance.
  Eigen::JacobiSVD<Matrix> svd(ds.inputs.transpose() * ds.guarded / n);
  const SalEraser base = fit_sal(ds, 2.0);
  for (Index k = 0; k <= 3; ++k) {
    const double expected = k < 3 ? svd.singularValues()(k) : 0.0;
    EXPECT_NEAR(residual_covariance(with_k(base, k), ds), expected, 1e-8) << "k=" << k;
  }
}

TEST(ResidualCovariance, DimensionMismatch) {
  const SalEraser e = fit_sal(random_continuous(40, 4, 1, 12), 2.0);
  EXPECT_THROW(residual_covariance(e, random_continuous(40, 5, 1, 13)), ContractError);
}

// ---- metrics ------------------------------------------------------------------

TEST(Accuracy, Counting) {
  EXPECT_DOUBLE_EQ(accuracy({1, 0, 1}, {1, 0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(accuracy({1, 0}, {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(accuracy({1, 1, 0, 0}, {1, 1, 0, 1}), 0.75);
  EXPECT_THROW(accuracy({}, {}), ContractError);
}

TEST(TprGap, Fixture) {
  const auto f = testing::tpr_gap_fixture();
  EXPECT_NEAR(tpr_gap(f.predictions, f.labels, f.groups), 0.75, 1e-12);
  std::vector<int> swapped = f.groups;
  for (int& g : swapped) g = 1 - g;
  EXPECT_NEAR(tpr_gap(f.predictions, f.labels, swapped), 0.75, 1e-12);
}

TEST(TprGap, IdenticalGroupsGiveZero) {
  EXPECT_DOUBLE_EQ(tpr_gap({1, 0, 1, 0}, {1, 1, 1, 1}, {0, 0, 1, 1}), 0.0);
}

TEST(TprGap, GroupWithoutPositivesIsUndefined) {
  EXPECT_THROW(tpr_gap({1, 0, 0}, {1, 0, 0}, {0, 1, 1}), UndefinedMetricError);
}

TEST(TprRms, Fixture) {
  const auto f = testing::tpr_rms_fixture();
  const TprRms r = tpr_rms(f.predictions, f.labels, f.groups);
  EXPECT_NEAR(r.value, std::sqrt((0.09 + 0.16) / 2.0), 1e-12);
  EXPECT_NEAR(r.value, 0.3536, 1e-4);
  EXPECT_TRUE(r.skipped_classes.empty());
}

TEST(TprRms, PermutationInvariant) {
  auto f = testing::tpr_rms_fixture();
  const double before = tpr_rms(f.predictions, f.labels, f.groups).value;
  std::vector<std::size_t> order(f.labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  testing::MetricFixture g;
  for (std::size_t i : order) {
    g.predictions.push_back(f.predictions[i]);
    g.labels.push_back(f.labels[i]);
    g.groups.push_back(f.groups[i]);
  }
  EXPECT_DOUBLE_EQ(tpr_rms(g.predictions, g.labels, g.groups).value, before);
}

TEST(TprRms, SingleClassReducesToGap) {
  const auto f = testing::tpr_gap_fixture();
  std::vector<int> p, y, g;
  for (std::size_t i = 0; i < f.labels.size(); ++i)
    if (f.labels[i] == 1) {
      p.push_back(f.predictions[i]);
      y.push_back(1);
      g.push_back(f.groups[i]);
    }
  EXPECT_NEAR(tpr_rms(p, y, g).value, 0.75, 1e-12);
}

TEST(TprRms, SkipsClassesMissingFromAGroup) {
  // Class 2 occurs only in group 0.
  const TprRms r = tpr_rms({0, 1, 0, 1, 2}, {0, 1, 0, 1, 2}, {0, 0, 1, 1, 0});
  EXPECT_DOUBLE_EQ(r.value, 0.0);
  EXPECT_EQ(r.skipped_classes, std::vector<int>{2});
  EXPECT_THROW(tpr_rms({0, 1}, {0, 1}, {0, 1}), UndefinedMetricError);
}

double brute_spearman(const std::vector<double>& a, const std::vector<double>& b) {
  // Distinct values: rho = 1 - 6 sum d^2 / (n (n^2 - 1)).
  const std::size_t n = a.size();
  auto rank_of = [](const std::vector<double>& v, std::size_t i) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double w) { return w < v[i]; }));
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = rank_of(a, i) - rank_of(b, i);
    sum += d * d;
  }
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * sum / (nn * (nn * nn - 1.0));
}

TEST(Correlation, SpearmanMatchesBruteForce) {
  const std::vector<double> a = {0.1, 0.4, 0.35, 0.8, 0.9};
  const std::vector<double> b = {1.0, 2.0, 3.0, 4.0, 5.0};
  EXPECT_NEAR(spearman(a, b), brute_spearman(a, b), 1e-12);
  EXPECT_NEAR(spearman(a, b), 0.9, 1e-12);
}

TEST(Correlation, TiesUseAverageRanks) {
  EXPECT_NEAR(spearman({1, 1, 2}, {1, 2, 3}), pearson({1.5, 1.5, 3}, {1, 2, 3}), 1e-12);
}

EmbeddingTable table_of(std::vector<std::string> words, Matrix vectors) {
  EmbeddingTable t;
  t.vocabulary = std::move(words);
  t.vectors = std::move(vectors);
  return t;
}

TEST(SimilarityCorrelation, PerfectAndReversedRankings) {
  // Angles 0..5 steps from "w0": cosine to w0 decreases along the list.
  Matrix v(7, 2);
  for (Index i = 0; i < 7; ++i) v.row(i) << std::cos(0.2 * static_cast<double>(i)), std::sin(0.2 * static_cast<double>(i));
  const EmbeddingTable t = table_of({"w0", "w1", "w2", "w3", "w4", "w5", "w6"}, v);
  std::vector<ScoredPair> pairs, reversed;
  for (int i = 1; i <= 6; ++i) {
    pairs.push_back({"w0", "w" + std::to_string(i), 10.0 - i});
    reversed.push_back({"w0", "w" + std::to_string(i), static_cast<double>(i)});
  }
  pairs.push_back({"w0", "unknown", 1.0});
  const SimilarityCorrelation c = similarity_correlation(t, pairs);
  EXPECT_NEAR(c.spearman, 1.0, 1e-12);
  EXPECT_EQ(c.used, 6u);
  EXPECT_EQ(c.skipped, 1u);
  EXPECT_NEAR(similarity_correlation(t, reversed).spearman, -1.0, 1e-12);
  reversed.resize(4);
  EXPECT_THROW(similarity_correlation(t, reversed), ContractError);
}

TEST(NearestNeighbors, OrthogonalVocabularyTiesAreLexicographic) {
  const EmbeddingTable t = table_of({"d", "b", "a", "c"}, Matrix::Identity(4, 4));
  EXPECT_EQ(nearest_neighbors(t, "d", 3), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_THROW(nearest_neighbors(t, "zzz", 1), LookupError);
}

TEST(NearestNeighbors, MatchesExhaustiveCosineLoop) {
  const Matrix v = gaussian(5, 3, 21);
  const EmbeddingTable t = table_of({"ant", "bee", "cat", "dog", "eel"}, v);
  for (Index q = 0; q < 5; ++q) {
    std::vector<std::pair<double, std::string>> all;
    for (Index i = 0; i < 5; ++i)
      if (i != q) all.emplace_back(-v.row(q).dot(v.row(i)) / (v.row(q).norm() * v.row(i).norm()), t.vocabulary[i]);
    std::sort(all.begin(), all.end());
    std::vector<std::string> expected;
    for (const auto& [score, word] : all) expected.push_back(word);
    EXPECT_EQ(nearest_neighbors(t, t.vocabulary[q], 4), expected);
  }
}

TEST(NearestNeighbors, DuplicateRanksFirstAndScaleInvariant) {
  Matrix v = gaussian(6, 4, 22);
  v.row(5) = 2.0 * v.row(2);
  const EmbeddingTable t = table_of({"a", "b", "c", "d", "e", "f"}, v);
  EXPECT_EQ(nearest_neighbors(t, "c", 1).front(), "f");
  const EmbeddingTable scaled = table_of(t.vocabulary, 7.0 * v);
  EXPECT_EQ(nearest_neighbors(t, "a", 5), nearest_neighbors(scaled, "a", 5));
}

}  // namespace
}  // namespace salkit
