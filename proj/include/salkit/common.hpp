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

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "salkit/errors.hpp"

namespace salkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Singular values (or eigenvalues) at or below this fraction of the largest
/// are treated as zero.
inline constexpr double kRankTolerance = 1e-10;

/// Worker count for batch work: hardware concurrency capped by SALKIT_THREADS.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SALKIT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Runs fn(i) for i in [0, count). Every index is visited exactly once and
/// fn must only write state owned by index i, so results do not depend on
/// the schedule.
template <class Fn>
void parallel_for(Index count, Fn&& fn) {
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<Index>(count, 1)));
  if (workers <= 1 || count < 64) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const Index chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const Index begin = w * chunk;
    const Index end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (Index i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

inline std::string shape(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

/// Largest singular value.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= 16) return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  return Eigen::BDCSVD<Matrix>(m).singularValues()(0);
}

}  // namespace salkit
