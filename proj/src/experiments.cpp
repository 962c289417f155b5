// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include "gltmean/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "parallel.hpp"

namespace gltmean {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

Block small(std::initializer_list<std::initializer_list<long double>> rows) {
  const Eigen::Index r = Eigen::Index(rows.size());
  Block b(r, r);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (long double v : row) b(i, j++) = v;
    ++i;
  }
  return b;
}

Block scalar_block() { return Block::Identity(1, 1); }

SequenceExpr toeplitz_of(GeneratingFunction f, Block block) {
  return SequenceExpr::toeplitz(
      std::make_shared<SeparableProvider>(std::vector<GeneratingFunction>{std::move(f)},
                                          std::move(block)));
}

SequenceExpr diag_of(ScalarWeight w, Block block) {
  return SequenceExpr::diag(WeightFunction({std::move(w)}, std::move(block)));
}

SequenceExpr shifted(SequenceExpr m, ScaleRule rule, int r) {
  return m + SequenceExpr::scale(rule, SequenceExpr::identity(1, r));
}

SequenceExpr hpd(SequenceExpr e, const char* label) {
  return e.with_label(label).declared_hpd();
}

// Step weight of the first two examples: 0 on [0, 1/2), 1 on [1/2, 1].
StepWeight half_step() { return StepWeight{0.5L, 0, 1}; }

Block geometric_mean_c() {
  // G([[2,1],[1,2]], [[3,1],[1,1]]) in closed form.
  const long double s2 = std::sqrt(2.0L), s3 = std::sqrt(3.0L);
  const long double c = 1 / (std::pow(6.0L, 0.25L) * std::sqrt(2 + std::sqrt(6.0L)));
  return c * small({{2 * s2 + 3 * s3, s2 + s3}, {s2 + s3, 2 * s2 + s3}});
}

ExperimentSpec make_ex1() {
  const ScaleRule n4{1, 1, -4};
  ExperimentSpec s("ex1", hpd(shifted(diag_of(half_step(), scalar_block()), n4, 1), "A"),
                   hpd(toeplitz_of(cosine_polynomial({3, 2}), scalar_block()), "B"));
  s.description = "commuting symbols: D_n(a) + n^-4 I and T_n(3 + 2cos), a the step at 1/2";
  s.symbol = SymbolFunction(
      1, 1,
      [](std::span<const long double> x, std::span<const long double> theta) {
        const long double a = x[0] < 0.5L ? 0 : 1;
        return Block::Constant(1, 1, std::sqrt(a * (3 + 2 * std::cos(theta[0]))));
      },
      "sqrt(a(x)(3 + 2cos(theta)))");
  s.symbol_catalog = "ex1";
  s.exact_target = 0.5;
  s.precision = Precision::extended;
  return s;
}

ExperimentSpec make_ex2() {
  const ScaleRule n4{1, 1, -4};
  const SequenceExpr a = shifted(diag_of(half_step(), scalar_block()), n4, 1);
  const SequenceExpr one_minus_a = shifted(diag_of(StepWeight{0.5L, 1, 0}, scalar_block()), n4, 1);
  const SequenceExpr t = toeplitz_of(cosine_polynomial({3, 2}), scalar_block());
  ExperimentSpec s("ex2", hpd(a, "A"), hpd(SequenceExpr::congruence(t, one_minus_a), "B"));
  s.description = "zero symbol: B_n = (D_n(1-a) + n^-4 I) T_n(3 + 2cos) (D_n(1-a) + n^-4 I)";
  s.symbol = SymbolFunction::zero(1, 1);
  s.symbol_catalog = "ex2";
  s.exact_target = 1.0;
  s.precision = Precision::extended;
  return s;
}

ExperimentSpec make_case1ex1() {
  const ScaleRule n3{1, 1, -3};
  const Block a0 = small({{2, 1}, {1, 2}});
  const Block b0 = small({{3, 1}, {1, 1}});
  ExperimentSpec s("case1ex1", hpd(shifted(toeplitz_of(RampFunction{false}, a0), n3, 2), "A"),
                   hpd(shifted(toeplitz_of(RampFunction{true}, b0), n3, 2), "B"));
  s.description = "disjoint supports: ramp f and its reflection, 2x2 blocks, + n^-3 I";
  s.symbol = SymbolFunction::zero(1, 2);
  s.symbol_catalog = "case1ex1";
  s.exact_target = 1.0;
  s.precision = Precision::extended;
  return s;
}

ExperimentSpec make_case1ex2() {
  const ScaleRule n3{1, 1, -3};
  const Block a0 = small({{2, 1}, {1, 2}});
  const Block b0 = small({{3, 1}, {1, 1}});
  ExperimentSpec s("case1ex2",
                   hpd(shifted(toeplitz_of(IndicatorFunction{0.5L}, a0), n3, 2), "A"),
                   hpd(shifted(toeplitz_of(IndicatorFunction{0.25L}, b0), n3, 2), "B"));
  s.description = "overlapping supports: chi[-1/2,1/2] and chi[-1/4,1/4], 2x2 blocks, + n^-3 I";
  const Block c = geometric_mean_c();
  s.symbol = SymbolFunction(
      1, 2,
      [c](auto, std::span<const long double> theta) {
        return std::abs(theta[0]) <= 0.25L ? c : Block(Block::Zero(2, 2));
      },
      "chi[-1/4,1/4](theta) C");
  s.symbol_catalog = "case1ex2";
  s.exact_target = double(1 - 1 / (4 * kPi));
  s.precision = Precision::extended;
  return s;
}

ExperimentSpec make_case2ex1() {
  const ScaleRule n2{1, 1, -2};
  const Block p = small({{1, 1}, {1, 1}});
  const Block q = small({{1, 2}, {2, 4}});
  const SequenceExpr a = shifted(toeplitz_of(cosine_polynomial({2, -1}), p), n2, 2);
  const SequenceExpr b =
      toeplitz_of(cosine_polynomial({3, 1}), q) +
      SequenceExpr::scale(n2, diag_of(AffineWeight{1, 1}, Block::Identity(2, 2)));
  ExperimentSpec s("case2ex1", hpd(a, "A"), hpd(b, "B"));
  s.description = "rank-one blocks with trivially intersecting ranges, 2x2, + n^-2 shifts";
  s.symbol = SymbolFunction::zero(1, 2);
  s.symbol_catalog = "case2ex1";
  s.exact_target = 1.0;
  return s;
}

ExperimentSpec make_case2ex2() {
  const ScaleRule shift{1, 5, -1};
  const Block a0 = small({{2, 0, 1}, {0, 2, 1}, {1, 1, 1}});
  const Block b0 = small({{2, 1, 0}, {1, 1, 1}, {0, 1, 2}});
  const PiecewiseLinearWeight a_w{{{0, 1}, {0.5L, 0}, {1, 0}}};
  const PiecewiseLinearWeight b_w{
      {{0, 0}, {1.0L / 3, 0}, {0.5L, 1.0L / 6}, {2.0L / 3, 0}, {1, 0}}};
  const Block i3 = Block::Identity(3, 3);
  const SequenceExpr da = SequenceExpr::power(diag_of(a_w, i3), 0.5L);
  const SequenceExpr db = SequenceExpr::power(diag_of(b_w, i3), 0.5L);
  const SequenceExpr a =
      shifted(SequenceExpr::congruence(toeplitz_of(cosine_polynomial({2, 1}), a0), da), shift, 3);
  const SequenceExpr b =
      shifted(SequenceExpr::congruence(toeplitz_of(cosine_polynomial({3, 1}), b0), db), shift, 3);
  ExperimentSpec s("case2ex2", hpd(a, "A"), hpd(b, "B"));
  s.description = "rank-two 3x3 blocks with weights a, b, ranges meeting in span(1,1,1), + (5n)^-1 I";
  s.exact_target = 17.0 / 18.0;
  return s;
}

using Factory = ExperimentSpec (*)();

const std::vector<std::pair<std::string, Factory>>& factories() {
  static const std::vector<std::pair<std::string, Factory>> f{
      {"ex1", make_ex1},           {"ex2", make_ex2},           {"case1ex1", make_case1ex1},
      {"case1ex2", make_case1ex2}, {"case2ex1", make_case2ex1}, {"case2ex2", make_case2ex2},
  };
  return f;
}

[[noreturn]] void rethrow_with_stage(const std::string& id, long n, const char* stage) {
  std::ostringstream os;
  os << id;
  if (n > 0) os << " at n=" << n;
  os << " (" << stage << "): ";
  try {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), os.str() + e.what());
  } catch (const std::exception& e) {
    throw Error(Errc::construction, os.str() + e.what());
  }
}

}  // namespace

ExperimentSpec::ExperimentSpec(std::string id_, SequenceExpr a_, SequenceExpr b_)
    : id(std::move(id_)), a(std::move(a_)), b(std::move(b_)) {}

void ExperimentSpec::validate() const {
  auto fail = [this](const std::string& msg) {
    throw Error(Errc::config, "experiment '" + id + "': " + msg);
  };
  if (id.empty()) fail("empty id");
  try {
    a.check();
    b.check();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (a.levels() != b.levels() || a.block_size() != b.block_size())
    fail("A and B have different levels or block sizes");
  if (symbol && (symbol->levels() != a.levels() || symbol->block_size() != a.block_size()))
    fail("expected symbol shape differs from the sequences");
  if (n_list.empty()) fail("empty n_list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) fail("n_list entries must be >= 2");
    if (i > 0 && n_list[i] <= n_list[i - 1]) fail("n_list must be strictly increasing");
  }
  if (!(threshold >= 0)) fail("threshold must be >= 0");
  if (grid.mx < 1 || grid.mtheta < 1) fail("grid sizes must be >= 1");
  if (!(candidate_tol > 0)) fail("candidate tolerance must be positive");
}

const std::vector<std::string>& catalog_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, f] : factories()) v.push_back(id);
    return v;
  }();
  return ids;
}

std::vector<ExperimentSpec> catalog() {
  std::vector<ExperimentSpec> out;
  for (const auto& [id, f] : factories()) out.push_back(f());
  return out;
}

ExperimentSpec catalog_entry(const std::string& id) {
  for (const auto& [key, f] : factories())
    if (key == id) return f();
  throw Error(Errc::invalid_argument, "unknown experiment id '" + id + "'");
}

template <class Real>
std::pair<BasicHermitianMatrix<Real>, BasicHermitianMatrix<Real>> build_pair(
    const ExperimentSpec& spec, long n) {
  if (n < 2) throw Error(Errc::invalid_argument, "build_pair: n must be >= 2");
  const std::vector<long> idx(static_cast<std::size_t>(spec.levels()), n);
  auto a = evaluate_sequence<Real>(spec.a, idx);
  auto b = evaluate_sequence<Real>(spec.b, idx);
  a.certify_hpd();
  b.certify_hpd();
  if (a.size() != b.size()) throw Error(Errc::size_mismatch, "build_pair: A and B differ in size");
  return {std::move(a), std::move(b)};
}

template std::pair<BasicHermitianMatrix<double>, BasicHermitianMatrix<double>> build_pair<double>(
    const ExperimentSpec&, long);
template std::pair<BasicHermitianMatrix<long double>, BasicHermitianMatrix<long double>>
build_pair<long double>(const ExperimentSpec&, long);

SymbolFunction expected_symbol(const ExperimentSpec& spec) {
  if (spec.symbol) return *spec.symbol;
  return candidate_symbol(symbol_of(spec.a), symbol_of(spec.b), spec.candidate_tol);
}

namespace {

template <class Real>
SpectrumSample mean_spectrum(const ExperimentSpec& spec, long n) {
  std::pair<BasicHermitianMatrix<Real>, BasicHermitianMatrix<Real>> pair;
  try {
    pair = build_pair<Real>(spec, n);
  } catch (...) {
    rethrow_with_stage(spec.id, n, "build");
  }
  BasicHermitianMatrix<Real> g;
  try {
    g = geometric_mean(pair.first, pair.second);
  } catch (...) {
    rethrow_with_stage(spec.id, n, "mean");
  }
  try {
    return spectrum_of(g, n, spec.id);
  } catch (...) {
    rethrow_with_stage(spec.id, n, "spectrum");
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  ExperimentReport report;
  report.id = spec.id;
  report.description = spec.description;
  report.precision = spec.precision;
  report.threshold = spec.threshold;
  report.exact_target = spec.exact_target;

  try {
    const SymbolFunction sym = expected_symbol(spec);
    report.curve = rearranged_quantile(sym, spec.grid, options.threads);
    report.target_measure = zero_measure(report.curve, spec.threshold);
    report.symbol_min = report.curve.values.front();
    report.symbol_max = report.curve.values.back();
  } catch (...) {
    rethrow_with_stage(spec.id, 0, "symbol");
  }

  report.spectra.resize(spec.n_list.size());
  detail::parallel_for(long(spec.n_list.size()), options.threads, [&](long i) {
    const long n = spec.n_list[std::size_t(i)];
    report.spectra[std::size_t(i)] = spec.precision == Precision::extended
                                         ? mean_spectrum<long double>(spec, n)
                                         : mean_spectrum<double>(spec, n);
  });

  std::vector<double> tau;
  for (const auto& s : report.spectra) {
    try {
      const ExtremalStats e = extremal_stats(s);
      const QuantileDistance q = quantile_distance(s, report.curve);
      report.rows.push_back(ReportRow{s.n, s.d_n, e.lambda_min, e.lambda_max, e.cond2,
                                      zero_fraction(s, spec.threshold), q.sup_dist,
                                      q.mean_abs_dist});
      tau.push_back(e.lambda_min);
    } catch (...) {
      rethrow_with_stage(spec.id, s.n, "statistics");
    }
  }
  report.alpha = decay_exponents(tau);

  if (!options.out_dir.empty()) {
    try {
      report.files = write_report_files(report, options.out_dir, options.svg);
    } catch (...) {
      rethrow_with_stage(spec.id, 0, "output");
    }
  }
  return report;
}

}  // namespace gltmean
