// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gltmean/experiments.hpp"
#include "test_util.hpp"

using namespace gltmean;
using namespace gltmean::test;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("gltmean_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("catalog lists the six experiments") {
  const auto& ids = catalog_ids();
  CHECK(ids == std::vector<std::string>{"ex1", "ex2", "case1ex1", "case1ex2", "case2ex1", "case2ex2"});
  for (const auto& spec : catalog()) {
    CHECK_NOTHROW(spec.validate());
    CHECK(!spec.description.empty());
    CHECK(spec.exact_target.has_value());
    CHECK(spec.n_list == std::vector<long>{40, 80, 160, 320});
    CHECK(spec.threshold == 0.1);
  }
  CHECK_THROWS_AS((void)catalog_entry("nope"), Error);
}

TEST_CASE("build_pair: examples") {
  {
    const auto [a, b] = build_pair<double>(catalog_entry("ex1"), 2);
    CHECK((a.matrix() - CMat::Identity(2, 2) * (17.0 / 16)).norm() < 1e-15);
    CMat tb(2, 2);
    tb << 3, 1, 1, 3;
    CHECK((b.matrix() - tb).norm() == 0);
    CHECK(a.hpd_certified());
    CHECK(b.hpd_certified());
  }
  {
    const auto [a, b] = build_pair<double>(catalog_entry("case1ex1"), 40);
    CHECK(a.size() == 80);
    CHECK(b.size() == 80);
    CHECK(hermitian_eigenvalues(a)(0) >= std::pow(40.0, -3) * (1 - 1e-10));
  }
  {
    const auto [a, b] = build_pair<double>(catalog_entry("case2ex2"), 40);
    CHECK(a.size() == 120);
    CHECK(hermitian_eigenvalues(a)(0) >= (1.0 / 200) * (1 - 1e-10));
  }
  CHECK_THROWS_AS((void)build_pair<double>(catalog_entry("ex1"), 1), Error);
}

TEST_CASE("build_pair: every catalog entry is HPD in both precisions") {
  for (const auto& spec : catalog()) {
    INFO(spec.id);
    const auto [a, b] = build_pair<double>(spec, 12);
    CHECK(a.size() == b.size());
    CHECK(a.size() == 12 * spec.block_size());
    const auto [la, lb] = build_pair<long double>(spec, 12);
    CHECK((la.matrix().cast<cd>() - a.matrix()).norm() < 1e-13 * a.matrix().norm());
  }
}

TEST_CASE("expected_symbol: examples") {
  const long double x[] = {0.75L}, th0[] = {0.0L}, th1[] = {1.3L};
  const auto s1 = expected_symbol(catalog_entry("ex1"));
  CHECK(double(s1(x, th0)(0, 0).real()) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));

  const auto s2 = expected_symbol(catalog_entry("ex2"));
  CHECK(double(s2(x, th1).norm()) == 0.0);

  const auto c = expected_symbol(catalog_entry("case1ex2"));
  const double s2r = std::sqrt(2.0), s3 = std::sqrt(3.0);
  const double scale = 1.0 / (std::pow(6.0, 0.25) * std::sqrt(2.0 + std::sqrt(6.0)));
  CMat cc(2, 2);
  cc << 2 * s2r + 3 * s3, s2r + s3, s2r + s3, 2 * s2r + s3;
  CHECK((c(x, th0).cast<cd>() - scale * cc).norm() < 1e-15);
  CHECK(double(c(x, th1).norm()) == 0.0);

  for (const char* id : {"case1ex1", "case2ex1"}) {
    const auto z = expected_symbol(catalog_entry(id));
    CHECK(z.block_size() == 2);
    CHECK(double(z(x, th1).norm()) == 0.0);
  }

  // No closed form: the candidate symbol is computed from the GLT symbols.
  const auto spec = catalog_entry("case2ex2");
  CHECK(!spec.symbol);
  const auto cand = expected_symbol(spec);
  CHECK(cand.block_size() == 3);
  const long double x_low[] = {0.1L}, x_high[] = {0.9L};
  CHECK(double(cand(x_high, th0).norm()) < 1e-8);  // a and b vanish
  // At x = 0.1 only a is positive, so the candidate is zero as well.
  CHECK(double(cand(x_low, th0).norm()) < 1e-6);
}

TEST_CASE("run_experiment: small run, files and determinism") {
  auto spec = catalog_entry("case2ex1");
  spec.n_list = {8, 16, 32};
  const auto dir1 = temp_dir("det1"), dir2 = temp_dir("det2");
  const auto r1 = run_experiment(spec, {dir1, true, 1});
  const auto r2 = run_experiment(spec, {dir2, false, 3});
  REQUIRE(r1.rows.size() == 3);
  CHECK(r1.alpha.size() == 2);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r1.rows[i].n == spec.n_list[i]);
    CHECK(r1.rows[i].d_n == 2 * spec.n_list[i]);
    CHECK(r1.spectra[i].values.size() == std::size_t(r1.rows[i].d_n));
  }
  for (const char* f : {"report_case2ex1.csv", "alpha_case2ex1.csv", "symbol_case2ex1.csv",
                        "quantiles_case2ex1_8.csv", "quantiles_case2ex1_32.csv"}) {
    INFO(f);
    CHECK(std::filesystem::exists(dir1 / f));
    CHECK(slurp(dir1 / f) == slurp(dir2 / f));
  }
  CHECK(std::filesystem::exists(dir1 / "overlay_case2ex1_16.svg"));
  CHECK(!std::filesystem::exists(dir2 / "overlay_case2ex1_16.svg"));
  CHECK(r1.files.size() == 3 + 3 + 3);

  const std::string csv = slurp(dir1 / "report_case2ex1.csv");
  CHECK(csv.rfind("n,d_n,lambda_min,lambda_max,cond2,zero_fraction,sup_dist,mean_abs_dist\n", 0) == 0);
  CHECK(slurp(dir1 / "alpha_case2ex1.csv").rfind("j,alpha_j\n", 0) == 0);
  CHECK(slurp(dir1 / "symbol_case2ex1.csv").rfind("t,value\n", 0) == 0);
  CHECK(slurp(dir1 / "quantiles_case2ex1_8.csv").rfind("t,lambda\n", 0) == 0);
  CHECK(csv.find(';') == std::string::npos);

  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("run_experiment: failures name the stage and n") {
  // A non-HPD B declared HPD fails at build time.
  const auto bad_b = SequenceExpr::toeplitz(std::make_shared<SeparableProvider>(
                                                std::vector<GeneratingFunction>{cosine_polynomial({0, 2})},
                                                Block::Identity(1, 1)))
                         .with_label("B")
                         .declared_hpd();
  ExperimentSpec spec("broken", catalog_entry("ex1").a, bad_b);
  spec.symbol = SymbolFunction::zero(1, 1);
  spec.n_list = {6};
  try {
    (void)run_experiment(spec);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("n=6") != std::string::npos);
    CHECK(what.find("build") != std::string::npos);
  }

  spec = catalog_entry("ex1");
  spec.n_list = {4};
  try {
    (void)run_experiment(spec, {"/proc/gltmean-unwritable", false, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
    CHECK(std::string(e.what()).find("output") != std::string::npos);
  }
}

TEST_CASE("ExperimentSpec::validate rejects bad parameters") {
  auto spec = catalog_entry("ex1");
  spec.n_list = {80, 40};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.n_list = {1, 4};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = catalog_entry("ex1");
  spec.grid = {0, 5};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = catalog_entry("ex1");
  spec.symbol = SymbolFunction::zero(1, 2);
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("zero-distributed diagnostic on the zero-symbol example") {
  auto spec = catalog_entry("ex2");
  spec.n_list = {20, 40, 80, 160};
  const auto r = run_experiment(spec);
  const auto d = zero_distribution_diagnostic(r.spectra, 1);
  REQUIRE(d.size() == 4);
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i].value < d[i - 1].value);
}

TEST_CASE("geometric and inversion-free means agree in distribution at n = 160") {
  for (const std::string id : {"ex1", "ex2"}) {
    INFO(id);
    const auto spec = catalog_entry(id);
    const auto [a, b] = build_pair<long double>(spec, 160);
    const auto g = spectrum_of(geometric_mean(a, b));
    const auto alt = spectrum_of(alt_mean(a, b));
    const auto curve = rearranged_quantile(expected_symbol(spec), spec.grid);
    const double between = quantile_distance(g, QuantileCurve{alt.values}).sup_dist;
    const double g_sym = quantile_distance(g, curve).sup_dist;
    const double alt_sym = quantile_distance(alt, curve).sup_dist;
    MESSAGE(id << ": between " << between << ", G-symbol " << g_sym << ", alt-symbol " << alt_sym);
    CHECK(between < std::min(g_sym, alt_sym));
  }
}
