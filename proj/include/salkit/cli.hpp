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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "salkit/dataset_io.hpp"
#include "salkit/embeddings.hpp"
#include "salkit/evaluation.hpp"
#include "salkit/serialize.hpp"

namespace salkit::cli {

/// Exit codes are a stable scripting contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

struct FitOptions {
  std::string method;
  std::string data;
  std::string out;
  bool force = false;
  double alpha = 2.0;
  std::optional<Index> k;
  std::string kernel = "rbf";
  double gamma = 0.1;
  std::string guarded_encoding = "dataset";
  int iterations = 10;
  Index kernel_cap = 20000;
  ProbeConfig probe{};
};

struct TransformOptions {
  std::string eraser;
  std::string data;
  std::string embeddings;
  std::string out;
  bool force = false;
  double lambda = 1.0;
  bool reduce = false;
};

struct EvalOptions {
  std::string data;
  std::string out;
  bool force = false;
  std::string method = "sal";
  std::string eraser;
  double alpha = 2.0;
  std::optional<Index> k;
  std::optional<Index> sweep_k;
  int iterations = 10;
  std::string kernel = "rbf";
  double gamma = 0.1;
  std::string guarded_encoding = "dataset";
  std::string kernel_probe;
  std::optional<double> debias_fraction;
  double train_fraction = 0.7;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  Index kernel_cap = 20000;
  ProbeConfig probe{};
  // Embedding mode: similarity correlation and neighbor lists before/after.
  std::string embeddings;
  std::string pairs;
  std::vector<std::string> neighbors;
  std::size_t top = 10;
};

struct BenchCliOptions {
  BenchOptions bench{};
  std::string out;
  bool force = false;
};

struct SynthOptions {
  SyntheticSpec spec{};
  std::string out;
  bool force = false;
};

namespace detail {

inline void require_readable(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (path.empty() || !in) throw ContractError(std::string(what) + " '" + path + "' is not readable");
}

inline void require_writable(const std::string& path, bool force) {
  namespace fs = std::filesystem;
  if (path.empty()) throw ContractError("output path is empty");
  if (fs::exists(path) && !force) throw ContractError("'" + path + "' exists; pass --force to overwrite");
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) throw ContractError("directory '" + parent.string() + "' does not exist");
}

inline GuardedEncoding parse_encoding(const std::string& s) {
  if (s == "dataset") return GuardedEncoding::dataset;
  if (s == "indicator") return GuardedEncoding::indicator;
  throw ContractError("unknown guarded encoding '" + s + "' (expected dataset or indicator)");
}

inline KernelSpec kernel_spec(const std::string& family, double gamma) {
  KernelSpec spec{parse_kernel_family(family), gamma};
  spec.check();
  return spec;
}

inline void check_kernel_cap(Index n, Index cap) {
  if (n > cap)
    throw ContractError("kernel methods are limited to n <= " + std::to_string(cap) + " samples (got " + std::to_string(n) +
                        "); raise --kernel-cap to override");
}

inline std::string cell(const std::optional<double>& v) { return v ? text::format_double(*v, 6) : "NA"; }

}  // namespace detail

/// Fits an eraser and writes it; prints the spectrum and chosen k as TSV.
inline void cmd_fit(const FitOptions& o, std::ostream& out) {
  detail::require_readable(o.data, "dataset");
  detail::require_writable(o.out, o.force);
  const LabeledDataset ds = center(read_dataset(o.data));
  if (o.method == "sal") {
    const SalEraser e = fit_sal(ds, o.alpha, o.k);
    save_eraser(o.out, AnyEraser(e));
    out << "index\tsigma\n";
    for (Index i = 0; i < e.sigma.size(); ++i) out << i + 1 << '\t' << text::format_double(e.sigma(i), 17) << '\n';
    out << "k\t" << e.k << '\n';
  } else if (o.method == "ksal") {
    if (!o.k) throw ContractError("--method ksal requires --k");
    detail::check_kernel_cap(ds.size(), o.kernel_cap);
    KsalOptions ko;
    ko.encoding = detail::parse_encoding(o.guarded_encoding);
    const KsalEraser e = fit_ksal(ds, detail::kernel_spec(o.kernel, o.gamma), *o.k, ko);
    save_eraser(o.out, AnyEraser(e));
    out << "index\teigenvalue\n";
    for (Index i = 0; i < e.eigenvalues.size(); ++i) out << i + 1 << '\t' << text::format_double(e.eigenvalues(i), 17) << '\n';
    out << "k\t" << e.k << '\n';
  } else if (o.method == "inlp") {
    const InlpEraser e = fit_inlp(ds, o.iterations, o.probe);
    save_eraser(o.out, AnyEraser(e));
    out << "iterations\t" << e.iterations << '\n';
    out << "k\t" << e.directions.size() << '\n';
  } else {
    throw ContractError("unknown method '" + o.method + "' (expected sal, ksal or inlp)");
  }
}

/// Applies an eraser to a dataset TSV or an embedding file, writing the
/// same format. Kernel erasers emit reduced kernel values against their
/// training points as the feature columns.
inline void cmd_transform(const TransformOptions& o) {
  if (o.data.empty() == o.embeddings.empty()) throw ContractError("pass exactly one of --data or --embeddings");
  if (o.eraser.empty()) throw ContractError("--eraser is required");
  detail::require_readable(o.eraser, "eraser");
  detail::require_readable(o.data.empty() ? o.embeddings : o.data, "input");
  detail::require_writable(o.out, o.force);
  require(o.lambda >= 0.0 && o.lambda <= 1.0, "--lambda must lie in [0, 1]");
  const AnyEraser eraser = load_eraser(o.eraser);

  auto transform = [&](const Matrix& x) -> Matrix {
    if (const auto* sal = std::get_if<SalEraser>(&eraser)) {
      if (o.reduce) {
        require(o.lambda == 1.0, "--reduce cannot be combined with --lambda");
        return reduce_rows(*sal, x);
      }
      return transform_rows(*sal, x, o.lambda);
    }
    require(!o.reduce, "--reduce is only defined for SAL erasers");
    if (const auto* inlp = std::get_if<InlpEraser>(&eraser)) return apply_eraser(LinearEraser(*inlp), x, o.lambda);
    require(o.lambda == 1.0, "--lambda is not defined for kernel erasers");
    return reduced_cross_gram(std::get<KsalEraser>(eraser), x);
  };

  if (!o.data.empty()) {
    const LabeledDataset ds = read_dataset(o.data);
    write_dataset(o.out, ds, transform(ds.inputs));
  } else {
    EmbeddingTable table = read_embeddings(o.embeddings);
    table.vectors = transform(table.vectors);
    write_embeddings(o.out, table);
  }
}

namespace detail {

struct EvalRow {
  Index setting = 0;
  EvalReport report;
};

inline void write_report_header(std::ostream& out, const EvalOptions& o, const std::string& method) {
  out << "# salkit eval\n";
  out << "# data=" << o.data << '\n';
  out << "# method=" << method << '\n';
  if (!o.eraser.empty()) out << "# eraser=" << o.eraser << '\n';
  out << "# alpha=" << text::format_shortest(o.alpha) << '\n';
  out << "# k=" << (o.k ? std::to_string(*o.k) : "auto") << '\n';
  out << "# sweep_k=" << (o.sweep_k ? std::to_string(*o.sweep_k) : "none") << '\n';
  out << "# iterations=" << o.iterations << '\n';
  out << "# kernel=" << o.kernel << '\n';
  out << "# gamma=" << text::format_shortest(o.gamma) << '\n';
  out << "# guarded_encoding=" << o.guarded_encoding << '\n';
  out << "# kernel_probe=" << (o.kernel_probe.empty() ? "none" : o.kernel_probe) << '\n';
  out << "# debias_fraction=" << (o.debias_fraction ? text::format_shortest(*o.debias_fraction) : "1") << '\n';
  out << "# train_fraction=" << text::format_shortest(o.train_fraction) << '\n';
  out << "# lambda=" << text::format_shortest(o.lambda) << '\n';
  out << "# seed=" << o.seed << '\n';
  out << "# probe_learning_rate=" << text::format_shortest(o.probe.learning_rate) << '\n';
  out << "# probe_epochs=" << o.probe.epochs << '\n';
  out << "# probe_l2=" << text::format_shortest(o.probe.l2) << '\n';
  out << "# probe_seed=" << o.probe.seed << '\n';
}

inline void write_rows(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << "k\ttask_accuracy\tattribute_accuracy_linear\tattribute_accuracy_kernel\ttpr_gap\ttpr_rms\tdeviation_ratio\n";
  for (const auto& r : rows) {
    const EvalReport& e = r.report;
    out << r.setting << '\t' << text::format_double(e.task_accuracy, 6) << '\t' << text::format_double(e.attribute_accuracy, 6)
        << '\t' << cell(e.attribute_accuracy_kernel) << '\t' << cell(e.tpr_gap) << '\t' << cell(e.tpr_rms) << '\t'
        << cell(e.deviation_ratio) << '\n';
  }
}

inline void eval_embeddings(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  if (o.eraser.empty()) throw ContractError("embedding evaluation needs --eraser");
  detail::require_readable(o.embeddings, "embeddings");
  detail::require_readable(o.eraser, "eraser");
  const AnyEraser any = load_eraser(o.eraser);
  EmbeddingTable before = read_embeddings(o.embeddings);
  EmbeddingTable after = before;
  if (const auto* sal = std::get_if<SalEraser>(&any)) after.vectors = transform_rows(*sal, before.vectors, o.lambda);
  else if (const auto* inlp = std::get_if<InlpEraser>(&any)) after.vectors = apply_eraser(LinearEraser(*inlp), before.vectors, o.lambda);
  else throw ContractError("embedding evaluation needs a linear (sal or inlp) eraser");

  out << "# salkit eval embeddings\n# embeddings=" << o.embeddings << "\n# eraser=" << o.eraser
      << "\n# lambda=" << text::format_shortest(o.lambda) << '\n';
  if (!o.pairs.empty()) {
    detail::require_readable(o.pairs, "word pairs");
    const auto pairs = read_word_pairs(o.pairs);
    const SimilarityCorrelation b = similarity_correlation(before, pairs);
    const SimilarityCorrelation a = similarity_correlation(after, pairs);
    out << "measure\tbefore\tafter\n";
    out << "spearman\t" << text::format_double(b.spearman, 6) << '\t' << text::format_double(a.spearman, 6) << '\n';
    out << "pearson\t" << text::format_double(b.pearson, 6) << '\t' << text::format_double(a.pearson, 6) << '\n';
    out << "pairs_used\t" << b.used << '\t' << a.used << '\n';
    if (b.skipped) err << "note: " << b.skipped << " out-of-vocabulary pair(s) skipped\n";
  }
  if (!o.neighbors.empty()) {
    out << "word\trank\tbefore\tafter\n";
    for (const auto& w : o.neighbors) {
      const auto nb = nearest_neighbors(before, w, o.top);
      const auto na = nearest_neighbors(after, w, o.top);
      for (std::size_t i = 0; i < o.top; ++i) out << w << '\t' << i + 1 << '\t' << nb[i] << '\t' << na[i] << '\n';
    }
  }
}

}  // namespace detail

/// Fits (or loads) an eraser on the training split and reports probe
/// accuracies and fairness gaps on the held-out split, optionally per k.
inline void cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  if (!o.embeddings.empty()) {
    detail::eval_embeddings(o, out, err);
    return;
  }
  detail::require_readable(o.data, "dataset");
  const std::string method = o.eraser.empty() ? o.method : "loaded";
  if (method != "loaded" && method != "none" && method != "sal" && method != "inlp" && method != "ksal")
    throw ContractError("unknown method '" + method + "' (expected none, sal, inlp or ksal)");
  if (!o.eraser.empty()) detail::require_readable(o.eraser, "eraser");

  const LabeledDataset all = read_dataset(o.data);
  const Split split = train_test_split(all.size(), o.train_fraction, o.seed);
  const LabeledDataset train = subset(all, split.train);
  const LabeledDataset test = subset(all, split.test);
  std::vector<Index> fit_rows(static_cast<std::size_t>(train.size()));
  std::iota(fit_rows.begin(), fit_rows.end(), Index{0});
  if (o.debias_fraction) fit_rows = subsample(train.size(), *o.debias_fraction, o.seed);
  const LabeledDataset fit_ds = center(subset(train, fit_rows));

  ProbeSuite suite;
  suite.config = o.probe;
  if (!o.kernel_probe.empty()) {
    suite.kernel_probe = detail::kernel_spec(o.kernel_probe, o.gamma);
    detail::check_kernel_cap(train.size(), o.kernel_cap);
  }

  std::vector<detail::EvalRow> rows;
  auto linear_row = [&](Index setting, const LinearEraser& e) {
    rows.push_back({setting, evaluate_representations(apply_eraser(e, train.inputs, o.lambda), train,
                                                      apply_eraser(e, test.inputs, o.lambda), test, suite)});
  };

  if (method == "none") {
    rows.push_back({0, evaluate_representations(train.inputs, train, test.inputs, test, suite)});
  } else if (method == "loaded") {
    const AnyEraser any = load_eraser(o.eraser);
    if (const auto* sal = std::get_if<SalEraser>(&any)) linear_row(sal->k, *sal);
    else if (const auto* inlp = std::get_if<InlpEraser>(&any)) linear_row(inlp->iterations, *inlp);
    else throw ContractError("kernel erasers are evaluated with --method ksal (training labels are not stored)");
  } else if (method == "sal") {
    const SalEraser base = fit_sal(fit_ds, o.alpha, o.sweep_k ? std::nullopt : o.k);
    if (o.sweep_k) {
      Index top = *o.sweep_k;
      if (top > base.rank()) {
        err << "note: sweep clipped to rank " << base.rank() << '\n';
        top = base.rank();
      }
      for (Index k = 0; k <= top; ++k) linear_row(k, with_k(base, k));
    } else {
      linear_row(base.k, base);
    }
  } else if (method == "inlp") {
    const int top = o.sweep_k ? static_cast<int>(*o.sweep_k) : o.iterations;
    const int first = o.sweep_k ? 0 : top;
    for (int it = first; it <= top; ++it) linear_row(it, fit_inlp(fit_ds, it, o.probe));
  } else {
    require(o.lambda == 1.0, "--lambda is not defined for kernel erasers");
    detail::check_kernel_cap(fit_ds.size(), o.kernel_cap);
    if (!o.k && !o.sweep_k) throw ContractError("--method ksal requires --k or --sweep-k");
    KsalOptions ko;
    ko.encoding = detail::parse_encoding(o.guarded_encoding);
    const KernelSpec spec = detail::kernel_spec(o.kernel, o.gamma);
    const Index top = o.sweep_k ? *o.sweep_k : *o.k;
    const Index first = o.sweep_k ? 0 : top;
    for (Index k = first; k <= top; ++k)
      rows.push_back({k, evaluate_ksal(fit_ksal(fit_ds, spec, k, ko), fit_ds, test.inputs, test, o.probe)});
  }

  detail::write_report_header(out, o, method);
  detail::write_rows(out, rows);
  for (const auto& r : rows)
    for (const auto& note : r.report.notes) err << "note: k=" << r.setting << ": " << note << '\n';
}

inline void cmd_bench(const BenchCliOptions& o, std::ostream& out) {
  const BenchResult r = run_benchmark(o.bench);
  const BenchOptions& b = o.bench;
  out << "# salkit bench n=" << b.n << " d=" << b.d << " d_prime=" << b.guarded_dim << " runs=" << b.runs
      << " inlp_iterations=" << b.inlp_iterations << " alpha=" << text::format_shortest(b.alpha) << " seed=" << b.seed
      << " probe_epochs=" << b.probe.epochs << '\n';
  out << "method\tmedian_seconds";
  for (int i = 0; i < b.runs; ++i) out << "\trun_" << i + 1;
  out << '\n';
  out << "sal\t" << text::format_double(r.sal_median, 6);
  for (double t : r.sal_seconds) out << '\t' << text::format_double(t, 6);
  out << "\ninlp\t" << text::format_double(r.inlp_median, 6);
  for (double t : r.inlp_seconds) out << '\t' << text::format_double(t, 6);
  out << "\n# inlp_over_sal=" << text::format_double(r.sal_median > 0 ? r.inlp_median / r.sal_median : 0.0, 6)
      << " sal_k=" << r.sal_k << " inlp_directions=" << r.inlp_directions << '\n';
}

inline void cmd_synth(const SynthOptions& o) {
  detail::require_writable(o.out, o.force);
  write_dataset(o.out, generate_synthetic(o.spec));
}

namespace detail {

// Writes to a file when a path is given, otherwise to `fallback`.
template <class Fn>
void with_output(const std::string& path, bool force, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  require_writable(path, force);
  std::ostringstream buf;
  fn(buf);
  auto file = text::open_output(path);
  file << buf.str();
  if (!file) throw Error("write to '" + path + "' failed");
}

inline void add_probe_flags(CLI::App* app, ProbeConfig& p) {
  app->add_option("--lr", p.learning_rate, "Probe learning rate")->capture_default_str();
  app->add_option("--epochs", p.epochs, "Probe training epochs")->capture_default_str();
  app->add_option("--l2", p.l2, "Probe L2 strength")->capture_default_str();
  app->add_option("--probe-seed", p.seed, "Probe initialization seed")->capture_default_str();
}

}  // namespace detail

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"salkit: spectral removal of guarded attributes from vector representations"};
  app.require_subcommand(1);

  FitOptions fit;
  std::optional<Index> fit_k;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an eraser (sal, ksal or inlp) and write it to a file");
  fit_cmd->add_option("--method", fit.method, "sal, ksal or inlp")->required()->check(CLI::IsMember({"sal", "ksal", "inlp"}));
  fit_cmd->add_option("--data", fit.data, "Dataset TSV")->required();
  fit_cmd->add_option("--out", fit.out, "Eraser output path")->required();
  fit_cmd->add_flag("--force", fit.force, "Overwrite existing output");
  fit_cmd->add_option("--alpha", fit.alpha, "Singular-value ratio threshold for choosing k")->capture_default_str();
  fit_cmd->add_option("--k", fit_k, "Number of directions to remove (overrides --alpha; required for ksal)");
  fit_cmd->add_option("--kernel", fit.kernel, "linear, poly2 or rbf")->capture_default_str();
  fit_cmd->add_option("--gamma", fit.gamma, "RBF gamma")->capture_default_str();
  fit_cmd->add_option("--guarded-encoding", fit.guarded_encoding, "dataset or indicator (ksal)")->capture_default_str();
  fit_cmd->add_option("--iterations", fit.iterations, "INLP iterations")->capture_default_str();
  fit_cmd->add_option("--kernel-cap", fit.kernel_cap, "Largest n accepted by kernel methods")->capture_default_str();
  detail::add_probe_flags(fit_cmd, fit.probe);

  TransformOptions tr;
  auto* tr_cmd = app.add_subcommand("transform", "Apply an eraser to a dataset or embedding file");
  tr_cmd->add_option("--eraser", tr.eraser, "Eraser file")->required();
  auto* tr_data = tr_cmd->add_option("--data", tr.data, "Dataset TSV");
  auto* tr_emb = tr_cmd->add_option("--embeddings", tr.embeddings, "Embedding text file");
  tr_data->excludes(tr_emb);
  tr_cmd->add_option("--out", tr.out, "Output path")->required();
  tr_cmd->add_flag("--force", tr.force, "Overwrite existing output");
  tr_cmd->add_option("--lambda", tr.lambda, "Blend of projector and identity in [0, 1]")->capture_default_str();
  tr_cmd->add_flag("--reduce", tr.reduce, "Emit the (d-k)-dimensional reduced coordinates (sal only)");

  EvalOptions ev;
  std::optional<Index> ev_k, ev_sweep;
  std::optional<double> ev_fraction;
  std::string neighbor_list;
  auto* ev_cmd = app.add_subcommand("eval", "Probe accuracies and fairness gaps before/after removal");
  auto* ev_data = ev_cmd->add_option("--data", ev.data, "Dataset TSV");
  auto* ev_emb = ev_cmd->add_option("--embeddings", ev.embeddings, "Embedding text file (similarity / neighbor mode)");
  ev_data->excludes(ev_emb);
  ev_cmd->add_option("--out", ev.out, "Report path (default: standard output)");
  ev_cmd->add_flag("--force", ev.force, "Overwrite existing output");
  auto* ev_method = ev_cmd->add_option("--method", ev.method, "none, sal, inlp or ksal")
                        ->check(CLI::IsMember({"none", "sal", "inlp", "ksal"}))
                        ->capture_default_str();
  auto* ev_eraser = ev_cmd->add_option("--eraser", ev.eraser, "Evaluate a saved eraser instead of fitting");
  ev_method->excludes(ev_eraser);
  ev_cmd->add_option("--alpha", ev.alpha, "Singular-value ratio threshold")->capture_default_str();
  ev_cmd->add_option("--k", ev_k, "Directions to remove");
  ev_cmd->add_option("--sweep-k", ev_sweep, "Report every k (or INLP iteration count) from 0 to this value");
  ev_cmd->add_option("--iterations", ev.iterations, "INLP iterations")->capture_default_str();
  ev_cmd->add_option("--kernel", ev.kernel, "Kernel for ksal: linear, poly2 or rbf")->capture_default_str();
  ev_cmd->add_option("--gamma", ev.gamma, "RBF gamma")->capture_default_str();
  ev_cmd->add_option("--guarded-encoding", ev.guarded_encoding, "dataset or indicator (ksal)")->capture_default_str();
  ev_cmd->add_option("--kernel-probe", ev.kernel_probe, "Also report a kernel attribute probe: linear, poly2 or rbf");
  ev_cmd->add_option("--debias-fraction", ev_fraction, "Fit the eraser on a seeded subsample of the training split");
  ev_cmd->add_option("--train-fraction", ev.train_fraction, "Training share of the split")->capture_default_str();
  ev_cmd->add_option("--lambda", ev.lambda, "Blend of projector and identity in [0, 1]")->capture_default_str();
  ev_cmd->add_option("--seed", ev.seed, "Split and subsample seed")->capture_default_str();
  ev_cmd->add_option("--kernel-cap", ev.kernel_cap, "Largest n accepted by kernel methods")->capture_default_str();
  ev_cmd->add_option("--pairs", ev.pairs, "Word-pair score file (embedding mode)");
  ev_cmd->add_option("--neighbors", neighbor_list, "Comma-separated query words (embedding mode)");
  ev_cmd->add_option("--top", ev.top, "Neighbors per query word")->capture_default_str();
  detail::add_probe_flags(ev_cmd, ev.probe);

  BenchCliOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time SAL and INLP fits on synthetic data");
  bench_cmd->add_option("--n", bench.bench.n, "Samples")->capture_default_str();
  bench_cmd->add_option("--d", bench.bench.d, "Input dimension")->capture_default_str();
  bench_cmd->add_option("--d-prime", bench.bench.guarded_dim, "Guarded dimension (planted bias rank)")->capture_default_str();
  bench_cmd->add_option("--runs", bench.bench.runs, "Repetitions (median reported)")->capture_default_str();
  bench_cmd->add_option("--inlp-iterations", bench.bench.inlp_iterations, "INLP iterations")->capture_default_str();
  bench_cmd->add_option("--alpha", bench.bench.alpha, "SAL alpha")->capture_default_str();
  bench_cmd->add_option("--seed", bench.bench.seed, "Generator seed")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Report path (default: standard output)");
  bench_cmd->add_flag("--force", bench.force, "Overwrite existing output");
  detail::add_probe_flags(bench_cmd, bench.bench.probe);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a planted-signal synthetic dataset");
  synth_cmd->add_option("--n", synth.spec.n, "Samples")->capture_default_str();
  synth_cmd->add_option("--d", synth.spec.d, "Input dimension")->capture_default_str();
  synth_cmd->add_option("--bias-rank", synth.spec.bias_rank, "Rank of the planted cross-covariance")->capture_default_str();
  synth_cmd->add_option("--bias-strength", synth.spec.bias_strength, "Attribute signal scale")->capture_default_str();
  synth_cmd->add_option("--task-strength", synth.spec.task_strength, "Task signal scale")->capture_default_str();
  synth_cmd->add_flag("--nonlinear", synth.spec.nonlinear, "XOR-style attribute (product of two coordinates)");
  synth_cmd->add_option("--seed", synth.spec.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Dataset TSV path")->required();
  synth_cmd->add_flag("--force", synth.force, "Overwrite existing output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    for (auto* sub : app.get_subcommands()) out << sub->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*fit_cmd) {
      fit.k = fit_k;
      cmd_fit(fit, out);
    } else if (*tr_cmd) {
      cmd_transform(tr);
    } else if (*ev_cmd) {
      if (ev.data.empty() && ev.embeddings.empty()) throw ContractError("eval needs --data or --embeddings");
      ev.k = ev_k;
      ev.sweep_k = ev_sweep;
      ev.debias_fraction = ev_fraction;
      std::stringstream words(neighbor_list);
      for (std::string w; std::getline(words, w, ',');)
        if (!w.empty()) ev.neighbors.push_back(w);
      detail::with_output(ev.out, ev.force, out, [&](std::ostream& o) { cmd_eval(ev, o, err); });
    } else if (*bench_cmd) {
      detail::with_output(bench.out, bench.force, out, [&](std::ostream& o) { cmd_bench(bench, o); });
    } else if (*synth_cmd) {
      cmd_synth(synth);
    }
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace salkit::cli
