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
#include <vector>

#include "salkit/dataset.hpp"
#include "salkit/text.hpp"

namespace salkit {

/// Tab-separated dataset: header `id y z x_0 ... x_{d-1}`, one sample per
/// row. y and z are categorical strings, x_j are reals. The result is not
/// centered.
inline LabeledDataset read_dataset(std::istream& in) {
  text::LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError("missing header", 1);
  const auto head = text::split_tabs(line);
  if (head.size() < 4 || head[0] != "id" || head[1] != "y" || head[2] != "z")
    throw ParseError("header must be `id<TAB>y<TAB>z<TAB>x_0...`", reader.number());
  const std::size_t d = head.size() - 3;
  for (std::size_t j = 0; j < d; ++j)
    if (head[j + 3] != "x_" + std::to_string(j))
      throw ParseError("expected column 'x_" + std::to_string(j) + "', found '" + std::string(head[j + 3]) + "'",
                       reader.number());

  std::vector<std::string> ids, ys, zs;
  std::vector<double> values;
  while (reader.next(line)) {
    if (line.empty()) throw ParseError("empty row", reader.number());
    const auto fields = text::split_tabs(line);
    if (fields.size() != d + 3)
      throw ParseError("row has " + std::to_string(fields.size()) + " columns, header has " + std::to_string(d + 3),
                       reader.number());
    if (fields[1].empty() || fields[2].empty()) throw ParseError("empty y or z label", reader.number());
    ids.emplace_back(fields[0]);
    ys.emplace_back(fields[1]);
    zs.emplace_back(fields[2]);
    for (std::size_t j = 0; j < d; ++j) values.push_back(text::parse_double(fields[j + 3], reader.number(), "feature"));
  }
  const Index n = static_cast<Index>(ids.size());
  if (n < 2) throw ParseError("dataset needs at least 2 rows", reader.number() + 1);
  Matrix x(n, static_cast<Index>(d));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < static_cast<Index>(d); ++j) x(i, j) = values[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)];
  return make_dataset(std::move(x), ys, zs, std::move(ids));
}

inline LabeledDataset read_dataset(const std::string& path) {
  auto in = text::open_input(path);
  return read_dataset(in);
}

/// Writes `inputs` (original coordinates) with the dataset's ids and labels.
/// Values use 17 significant digits so they survive a round trip exactly.
inline void write_dataset(std::ostream& out, const LabeledDataset& ds, const Matrix& inputs) {
  require(inputs.rows() == ds.size(), "row count does not match dataset");
  out << "id\ty\tz";
  for (Index j = 0; j < inputs.cols(); ++j) out << "\tx_" << j;
  out << '\n';
  for (Index i = 0; i < inputs.rows(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    out << ds.ids[u] << '\t' << ds.task_levels[static_cast<std::size_t>(ds.task_labels[u])] << '\t'
        << ds.attribute_levels[static_cast<std::size_t>(ds.attribute_labels[u])];
    for (Index j = 0; j < inputs.cols(); ++j) out << '\t' << text::format_double(inputs(i, j), 17);
    out << '\n';
  }
}

/// Writes the dataset in original (uncentered) coordinates.
inline void write_dataset(std::ostream& out, const LabeledDataset& ds) {
  Matrix x = ds.inputs;
  x.rowwise() += ds.input_mean.transpose();
  write_dataset(out, ds, x);
}

inline void write_dataset(const std::string& path, const LabeledDataset& ds, const Matrix& inputs) {
  auto out = text::open_output(path);
  write_dataset(out, ds, inputs);
  if (!out) throw Error("write to '" + path + "' failed");
}

inline void write_dataset(const std::string& path, const LabeledDataset& ds) {
  auto out = text::open_output(path);
  write_dataset(out, ds);
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace salkit
