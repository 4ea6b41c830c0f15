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

#include <istream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "salkit/inlp.hpp"
#include "salkit/kernel_sal.hpp"
#include "salkit/linear_sal.hpp"
#include "salkit/text.hpp"

namespace salkit {

// Eraser files are versioned text, all reals at 17 significant digits.
//
//   SALKIT v1 sal              SALKIT v1 inlp            SALKIT v1 ksal
//   d d' k alpha               d d' r iterations         d d' k n
//   input_mean                 input_mean                kernel <family> <gamma>
//   U (d rows of d)            r direction rows          input_mean
//   sigma (min(d,d'))                                    n centered training rows
//   V (d' rows of d')                                    W (n rows of k)
//                                                        eigenvalues (k)

using AnyEraser = std::variant<SalEraser, InlpEraser, KsalEraser>;

inline constexpr const char* kEraserMagic = "SALKIT";
inline constexpr const char* kEraserVersion = "v1";

namespace detail {

inline void write_row(std::ostream& out, const auto& row) {
  for (Index j = 0; j < row.size(); ++j) out << (j ? " " : "") << text::format_double(row(j), 17);
  out << '\n';
}

inline void write_rows(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) write_row(out, m.row(i));
}

// Sequential reader over whitespace-separated records that reports LoadError.
class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : reader_(in) {}

  std::vector<std::string> line(std::size_t expected_fields, const char* what) {
    std::string raw;
    try {
      if (!reader_.next(raw)) throw LoadError(std::string("truncated eraser file: missing ") + what);
    } catch (const ParseError& e) {
      throw LoadError(e.what());
    }
    std::vector<std::string> out;
    for (auto f : text::split_ws(raw)) out.emplace_back(f);
    if (out.size() != expected_fields)
      throw LoadError("line " + std::to_string(reader_.number()) + ": " + what + " has " + std::to_string(out.size()) +
                      " fields, expected " + std::to_string(expected_fields));
    return out;
  }

  double real(const std::string& field) {
    try {
      return text::parse_double(field, reader_.number());
    } catch (const ParseError& e) {
      throw LoadError(e.what());
    }
  }

  long long integer(const std::string& field) {
    try {
      return text::parse_int(field, reader_.number());
    } catch (const ParseError& e) {
      throw LoadError(e.what());
    }
  }

  Vector vector(Index size, const char* what) {
    const auto f = line(static_cast<std::size_t>(size), what);
    Vector v(size);
    for (Index j = 0; j < size; ++j) v(j) = real(f[static_cast<std::size_t>(j)]);
    return v;
  }

  Matrix matrix(Index rows, Index cols, const char* what) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) m.row(i) = vector(cols, what).transpose();
    return m;
  }

  bool at_end() {
    std::string raw;
    try {
      while (reader_.next(raw))
        if (!text::split_ws(raw).empty()) return false;
    } catch (const ParseError&) {
      return false;
    }
    return true;
  }

 private:
  text::LineReader reader_;
};

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw LoadError(msg);
}

inline bool orthonormal(const Matrix& q, double tol) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

inline void save_eraser(std::ostream& out, const SalEraser& e) {
  out << kEraserMagic << ' ' << kEraserVersion << " sal\n";
  out << e.dim() << ' ' << e.guarded_dim() << ' ' << e.k << ' ' << text::format_double(e.alpha, 17) << '\n';
  detail::write_row(out, e.input_mean);
  detail::write_rows(out, e.u);
  detail::write_row(out, e.sigma);
  detail::write_rows(out, e.v);
}

/// The fourth header field holds the iteration count; d' is not recorded by
/// INLP and is written as 0.
inline void save_eraser(std::ostream& out, const InlpEraser& e) {
  out << kEraserMagic << ' ' << kEraserVersion << " inlp\n";
  out << e.dim() << " 0 " << e.directions.size() << ' ' << e.iterations << '\n';
  detail::write_row(out, e.input_mean);
  for (const auto& d : e.directions) detail::write_row(out, d);
}

inline void save_eraser(std::ostream& out, const KsalEraser& e) {
  out << kEraserMagic << ' ' << kEraserVersion << " ksal\n";
  out << e.dim() << " 0 " << e.k << ' ' << e.size() << '\n';
  out << "kernel " << to_string(e.spec.family) << ' ' << text::format_double(e.spec.gamma, 17) << '\n';
  detail::write_row(out, e.input_mean);
  detail::write_rows(out, e.train_inputs);
  detail::write_rows(out, e.w_block);
  detail::write_row(out, e.eigenvalues.head(e.k));
}

inline void save_eraser(std::ostream& out, const AnyEraser& e) {
  std::visit([&](const auto& v) { save_eraser(out, v); }, e);
}

inline void save_eraser(const std::string& path, const AnyEraser& e) {
  auto out = text::open_output(path);
  save_eraser(out, e);
  if (!out) throw Error("write to '" + path + "' failed");
}

inline AnyEraser load_eraser(std::istream& in) {
  detail::RecordReader r(in);
  const auto magic = r.line(3, "magic line");
  detail::check(magic[0] == kEraserMagic, "not a salkit eraser file (bad magic '" + magic[0] + "')");
  detail::check(magic[1] == kEraserVersion, "unsupported eraser format version '" + magic[1] + "'");
  const std::string kind = magic[2];
  const auto head = r.line(4, "dimension line");
  const long long d = r.integer(head[0]);
  const long long dp = r.integer(head[1]);
  const long long k = r.integer(head[2]);
  detail::check(d > 0 && dp >= 0 && k >= 0, "dimensions must be non-negative");

  if (kind == "sal") {
    const double alpha = r.real(head[3]);
    detail::check(dp >= 1 && dp <= d, "guarded dimension must lie in [1, d]");
    detail::check(k <= d, "stored k=" + std::to_string(k) + " exceeds d=" + std::to_string(d));
    detail::check(alpha >= 1.0, "alpha must be >= 1");
    SalEraser e;
    e.alpha = alpha;
    e.input_mean = r.vector(d, "input mean");
    e.u = r.matrix(d, d, "U row");
    e.sigma = r.vector(std::min(d, dp), "singular values");
    e.v = r.matrix(dp, dp, "V row");
    e.k = k;
    detail::check(r.at_end(), "trailing content after eraser");
    detail::check(detail::orthonormal(e.u, 1e-8) && detail::orthonormal(e.v, 1e-8), "U or V is not orthonormal");
    for (Index i = 0; i < e.sigma.size(); ++i)
      detail::check(e.sigma(i) >= 0.0 && (i == 0 || e.sigma(i) <= e.sigma(i - 1)), "singular values not sorted non-negative");
    detail::check(k <= e.rank(), "stored k exceeds the rank of the stored singular values");
    return e;
  }
  if (kind == "inlp") {
    const long long iterations = r.integer(head[3]);
    detail::check(iterations >= 0, "iteration count must be non-negative");
    InlpEraser e;
    e.iterations = static_cast<int>(iterations);
    e.input_mean = r.vector(d, "input mean");
    for (long long i = 0; i < k; ++i) {
      Vector dir = r.vector(d, "direction");
      detail::check(std::abs(dir.norm() - 1.0) <= 1e-10, "direction " + std::to_string(i) + " is not unit norm");
      e.directions.push_back(std::move(dir));
    }
    detail::check(r.at_end(), "trailing content after eraser");
    refresh_basis(e);
    return e;
  }
  if (kind == "ksal") {
    const long long n = r.integer(head[3]);
    detail::check(n >= 1 && k <= n, "stored k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    const auto kern = r.line(3, "kernel line");
    detail::check(kern[0] == "kernel", "expected kernel line");
    KsalEraser e;
    try {
      e.spec.family = parse_kernel_family(kern[1]);
      e.spec.gamma = r.real(kern[2]);
      e.spec.check();
    } catch (const ContractError& err) {
      throw LoadError(err.what());
    }
    e.input_mean = r.vector(d, "input mean");
    e.train_inputs = r.matrix(n, d, "training row");
    e.w_block = k ? r.matrix(n, k, "W row") : Matrix(n, 0);
    e.eigenvalues = r.vector(k, "eigenvalues");
    detail::check(r.at_end(), "trailing content after eraser");
    rebuild_derived(e);
    return e;
  }
  throw LoadError("unknown eraser kind '" + kind + "'");
}

inline AnyEraser load_eraser(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open eraser file '" + path + "'");
  return load_eraser(in);
}

}  // namespace salkit
