// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

// Experiment catalog and the run harness that turns a pair of HPD sequences
// into spectra, statistics and plot data.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gltmean/glt_build.hpp"
#include "gltmean/spectra.hpp"
#include "gltmean/symbol.hpp"

namespace gltmean {

struct ExperimentSpec {
  ExperimentSpec(std::string id, SequenceExpr a, SequenceExpr b);

  std::string id;
  std::string description;
  SequenceExpr a;
  SequenceExpr b;
  /// Closed-form expected symbol. Without one, the candidate symbol of the
  /// GLT symbols of `a` and `b` is used.
  std::optional<SymbolFunction> symbol;
  /// Catalog id whose closed-form symbol `symbol` is (for serialization).
  std::string symbol_catalog;
  /// Exact measure of the expected symbol's zero set, when known.
  std::optional<double> exact_target;
  std::vector<long> n_list{40, 80, 160, 320};
  double threshold = 0.1;
  SymbolGrid grid;
  long double candidate_tol = 1e-8L;
  Precision precision = Precision::standard;

  int levels() const { return a.levels(); }
  int block_size() const { return a.block_size(); }

  /// Throws Errc::config on inconsistent shapes or parameters.
  void validate() const;
};

const std::vector<std::string>& catalog_ids();
std::vector<ExperimentSpec> catalog();
/// Throws Errc::invalid_argument for unknown ids.
ExperimentSpec catalog_entry(const std::string& id);

template <class Real>
std::pair<BasicHermitianMatrix<Real>, BasicHermitianMatrix<Real>> build_pair(
    const ExperimentSpec& spec, long n);

SymbolFunction expected_symbol(const ExperimentSpec& spec);

struct ReportRow {
  long n = 0;
  long d_n = 0;
  double lambda_min = 0;
  double lambda_max = 0;
  double cond2 = 0;
  double zero_fraction = 0;
  double sup_dist = 0;
  double mean_abs_dist = 0;
};

struct ExperimentReport {
  std::string id;
  std::string description;
  Precision precision = Precision::standard;
  double threshold = 0.1;
  std::vector<ReportRow> rows;
  std::vector<double> alpha;  // decay exponents of the lambda_min column
  double target_measure = 0;  // zero_measure of the expected symbol on the grid
  std::optional<double> exact_target;
  double symbol_min = 0;
  double symbol_max = 0;
  QuantileCurve curve;
  std::vector<SpectrumSample> spectra;  // one per n, in n order
  std::vector<std::filesystem::path> files;
};

struct RunOptions {
  std::filesystem::path out_dir;  // empty: no files written
  bool svg = false;
  int threads = 1;
};

/// Errors carry the failing n and stage ("build", "mean", "spectrum",
/// "statistics", "symbol", "output").
ExperimentReport run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

// Report serialization (report_io.cpp).

std::string report_csv(const ExperimentReport& r);
std::string alpha_csv(const ExperimentReport& r);
std::string quantiles_csv(const SpectrumSample& s);
std::string symbol_csv(const QuantileCurve& c);
std::string overlay_svg(const ExperimentReport& r, std::size_t index);
/// Plain-text tables in the layout n | tau_j | alpha_j and the extremal columns.
std::string format_report(const ExperimentReport& r);
/// Writes every artifact into `dir`; returns the paths. Throws Errc::io.
std::vector<std::filesystem::path> write_report_files(const ExperimentReport& r,
                                                      const std::filesystem::path& dir, bool svg);

}  // namespace gltmean
