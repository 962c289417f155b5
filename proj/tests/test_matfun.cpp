// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "gltmean/matfun.hpp"
#include "test_util.hpp"

using namespace gltmean;
using namespace gltmean::test;

namespace {

constexpr int kTrials = 200;

CMat c2(double a, double b, double c, double d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

// Closed-form geometric mean of [[2,1],[1,2]] and [[3,1],[1,1]].
CMat closed_form_c() {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  const double scale = 1.0 / (std::pow(6.0, 0.25) * std::sqrt(2.0 + s6));
  return scale * c2(2 * s2 + 3 * s3, s2 + s3, s2 + s3, 2 * s2 + s3);
}

double log_det(const HermitianMatrix& m) {
  const auto ev = hermitian_eigenvalues(m);
  double s = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::log(ev(i));
  return s;
}

}  // namespace

TEST_CASE("hermitian_eig: closed-form spectra") {
  auto e = hermitian_eig(herm(c2(2, 1, 1, 2)));
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-14));

  e = hermitian_eig(HermitianMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(e.eigenvalues(i) == doctest::Approx(1.0));
  CHECK((e.eigenvectors.adjoint() * e.eigenvectors - CMat::Identity(3, 3)).norm() < 1e-14);

  e = hermitian_eig(herm(c2(3, 1, 1, 1)));
  CHECK(e.eigenvalues(0) == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(e.eigenvalues(1) == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("hermitian_eig: orthonormality and reconstruction on random input") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 12;
    CMat m = random_complex(rng, n, n);
    m = (m + m.adjoint()).eval();
    const auto e = hermitian_eig(herm(m));
    for (Eigen::Index i = 1; i < n; ++i) CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
    const CMat& v = e.eigenvectors;
    CHECK((v.adjoint() * v - CMat::Identity(n, n)).norm() <= 1e-10 * double(n));
    const CMat rec = v * e.eigenvalues.cast<cd>().asDiagonal() * v.adjoint();
    CHECK((rec - m).norm() <= 1e-10 * m.norm());
  }
}

TEST_CASE("hermitian_eig: rejects non-finite entries and stores the Hermitian part") {
  CMat m = c2(1, 0, 0, std::numeric_limits<double>::quiet_NaN());
  try {
    (void)hermitian_eig(herm(m));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_finite);
  }
  const HermitianMatrix h(c2(1, 2, 0, 1));
  CHECK(h(0, 1) == cd(1, 0));
  CHECK(h(1, 0) == cd(1, 0));
}

TEST_CASE("hpd_function: examples") {
  const double d49[] = {4, 9};
  auto r = hpd_function(HermitianMatrix::diagonal(d49), std::function<double(double)>(
                                                           [](double z) { return std::sqrt(z); }),
                        Domain::nonnegative);
  CHECK(rel_diff(r.matrix(), c2(2, 0, 0, 3)) < 1e-14);

  r = matrix_power(HermitianMatrix::identity(5), 0.25);
  CHECK(rel_diff(r.matrix(), CMat::Identity(5, 5)) < 1e-14);

  r = matrix_power(herm(c2(2, 1, 1, 2)), 0.5);
  const double s3 = std::sqrt(3.0);
  CHECK(rel_diff(r.matrix(), 0.5 * c2(s3 + 1, s3 - 1, s3 - 1, s3 + 1)) < 1e-14);
  CHECK(rel_diff(r.matrix() * r.matrix(), c2(2, 1, 1, 2)) < 1e-14);
}

TEST_CASE("hpd_function: floor violations raise not-HPD with the eigenvalue") {
  const double d[] = {1, -1};
  try {
    (void)matrix_power(HermitianMatrix::diagonal(d), 0.5);
    FAIL("expected NotHpdError");
  } catch (const NotHpdError& e) {
    CHECK(e.code() == Errc::not_hpd);
    CHECK(double(e.eigenvalue()) == doctest::Approx(-1.0));
  }
  const double tiny[] = {1e-20, 1};
  CHECK_THROWS_AS((void)matrix_power(HermitianMatrix::diagonal(tiny), -0.5), NotHpdError);
  // Positive integer powers are defined everywhere.
  CHECK_NOTHROW((void)matrix_power(HermitianMatrix::diagonal(d), 2.0));
}

TEST_CASE("hpd_function: eigenvalues map through f") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 10;
    const HermitianMatrix m = herm(random_hpd(rng, n));
    const auto ev = hermitian_eigenvalues(m);
    const auto fv = hermitian_eigenvalues(
        hpd_function(m, std::function<double(double)>([](double z) { return std::log(z); }),
                     Domain::positive));
    for (Eigen::Index i = 0; i < n; ++i)
      CHECK(fv(i) == doctest::Approx(std::log(ev(i))).epsilon(1e-10));
  }
}

TEST_CASE("geometric_mean: examples") {
  std::mt19937_64 rng(3);
  const CMat b = random_hpd(rng, 4);
  const auto g = geometric_mean(HermitianMatrix::identity(4), herm(b));
  CHECK(rel_diff(g.matrix(), matrix_power(herm(b), 0.5).matrix()) < 1e-12);

  const double a14[] = {1, 4}, b916[] = {9, 16};
  CHECK(rel_diff(geometric_mean(HermitianMatrix::diagonal(a14), HermitianMatrix::diagonal(b916)).matrix(),
                 c2(3, 0, 0, 8)) < 1e-14);

  const auto c = geometric_mean(herm(c2(2, 1, 1, 2)), herm(c2(3, 1, 1, 1)));
  CHECK(rel_diff(c.matrix(), closed_form_c()) < 1e-13);
  CHECK(hermitian_eigenvalues(c)(0) > 0);
}

TEST_CASE("geometric_mean: errors") {
  CHECK_THROWS_AS((void)geometric_mean(HermitianMatrix::identity(2), HermitianMatrix::identity(3)),
                  Error);
  const double d[] = {1, -2};
  try {
    (void)geometric_mean(HermitianMatrix::identity(2), HermitianMatrix::diagonal(d));
    FAIL("expected NotHpdError");
  } catch (const NotHpdError& e) {
    CHECK(e.code() == Errc::not_hpd);
  }
}

TEST_CASE("geometric_mean_polar agrees with the eigen-based mean") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 8;
    const auto a = herm(random_hpd(rng, n)), b = herm(random_hpd(rng, n));
    CHECK(rel_diff(geometric_mean_polar(a, b).matrix(), geometric_mean(a, b).matrix()) < 1e-12);
  }
  CHECK(rel_diff(geometric_mean_polar(herm(c2(2, 1, 1, 2)), herm(c2(3, 1, 1, 1))).matrix(),
                 closed_form_c()) < 1e-14);
}

TEST_CASE("alt_mean: examples") {
  const double a14[] = {1, 4}, b916[] = {9, 16};
  CHECK(rel_diff(alt_mean(HermitianMatrix::diagonal(a14), HermitianMatrix::diagonal(b916)).matrix(),
                 c2(3, 0, 0, 8)) < 1e-13);

  std::mt19937_64 rng(4);
  const CMat b = random_hpd(rng, 5);
  CHECK(rel_diff(alt_mean(HermitianMatrix::identity(5), herm(b)).matrix(),
                 matrix_power(herm(b), 0.5).matrix()) < 1e-12);

  // Non-commuting inputs: independent dense evaluation of (A B^2 A)^{1/4}.
  const CMat a = c2(2, 1, 1, 2), bb = c2(3, 1, 1, 1);
  const CMat inner = a * bb * bb * a;
  Eigen::SelfAdjointEigenSolver<CMat> es(inner);
  const Eigen::VectorXd q = es.eigenvalues().array().pow(0.25);
  const CMat oracle = es.eigenvectors() * q.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
  const auto alt = alt_mean(herm(a), herm(bb));
  CHECK(rel_diff(alt.matrix(), oracle) < 1e-13);
  CHECK(rel_diff(alt.matrix(), closed_form_c()) > 1e-3);
}

TEST_CASE("schatten_norm: examples and errors") {
  const double d13[] = {1, 3}, d123[] = {1, 2, 3};
  CHECK(schatten_norm(HermitianMatrix::diagonal(d13), std::numeric_limits<double>::infinity()) ==
        doctest::Approx(3.0));
  CHECK(schatten_norm(HermitianMatrix::diagonal(d123), 1.0) == doctest::Approx(6.0));
  CHECK(schatten_norm(herm(c2(0, 1, 1, 0)), 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS((void)schatten_norm(HermitianMatrix::identity(2), 0.5), Error);
  const double neg[] = {-2, 1};
  CHECK(schatten_norm(HermitianMatrix::diagonal(neg), 1.0) == doctest::Approx(3.0));
}

// Randomized axiom suites: 200 trials each, sizes 1..12.

TEST_CASE("property: symmetry G(A,B) = G(B,A)") {
  std::mt19937_64 rng(101);
  int failures = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 1 + t % 12;
    const auto a = herm(random_hpd(rng, n)), b = herm(random_hpd(rng, n));
    const CMat gab = geometric_mean(a, b).matrix(), gba = geometric_mean(b, a).matrix();
    if ((gab - gba).norm() > 1e-10 * gab.norm()) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: det G = sqrt(det A det B)") {
  std::mt19937_64 rng(102);
  int failures = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 1 + t % 12;
    const auto a = herm(random_hpd(rng, n)), b = herm(random_hpd(rng, n));
    const double lhs = log_det(geometric_mean(a, b));
    const double rhs = 0.5 * (log_det(a) + log_det(b));
    // Relative determinant error |exp(lhs - rhs) - 1|.
    if (std::abs(std::expm1(lhs - rhs)) > 1e-8) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: congruence invariance") {
  std::mt19937_64 rng(103);
  int failures = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 1 + t % 12;
    const CMat a = random_hpd(rng, n), b = random_hpd(rng, n);
    const CMat m = random_complex(rng, n, n) + 3.0 * CMat::Identity(n, n);
    const CMat lhs = geometric_mean(herm(m * a * m.adjoint()), herm(m * b * m.adjoint())).matrix();
    const CMat rhs = m * geometric_mean(herm(a), herm(b)).matrix() * m.adjoint();
    if (rel_diff(lhs, rhs) > 1e-8) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: commuting collapse") {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  int failures = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 1 + t % 12;
    const CMat q = random_unitary(rng, n);
    Eigen::VectorXd da(n), db(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      da(i) = u(rng);
      db(i) = u(rng);
    }
    const CMat a = q * da.asDiagonal() * q.adjoint(), b = q * db.asDiagonal() * q.adjoint();
    const CMat g = geometric_mean(herm(a), herm(b)).matrix();
    const CMat alt = alt_mean(herm(a), herm(b)).matrix();
    const CMat root = matrix_power(herm(a * b), 0.5).matrix();
    if (rel_diff(g, alt) > 1e-9 || rel_diff(g, root) > 1e-9 || rel_diff(alt, root) > 1e-9) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: monotone regularization") {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 1 + t % 12;
    const CMat a = random_hpd(rng, n, 1e-3, 5.0), b = random_hpd(rng, n, 1e-3, 5.0);
    double e1 = u(rng), e2 = u(rng);
    if (e1 > e2) std::swap(e1, e2);
    if (e1 == e2) e2 += 1e-3;
    const CMat id = CMat::Identity(n, n);
    const auto l1 = hermitian_eigenvalues(geometric_mean(herm(a + e1 * id), herm(b)));
    const auto l2 = hermitian_eigenvalues(geometric_mean(herm(a + e2 * id), herm(b)));
    for (Eigen::Index i = 0; i < n; ++i)
      if (l1(i) > l2(i) * (1 + 1e-12)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("property: sqrt squared reproduces the matrix") {
  std::mt19937_64 rng(106);
  int failures = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::Index n = 1 + t % 12;
    const CMat m = random_hpd(rng, n);
    const CMat r = matrix_power(herm(m), 0.5).matrix();
    if (rel_diff(r * r, m) > 1e-9) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("long double instantiation") {
  using LMat = ComplexMatrix<long double>;
  LMat a(2, 2), b(2, 2);
  a << 2, 1, 1, 2;
  b << 3, 1, 1, 1;
  const auto g = geometric_mean(BasicHermitianMatrix<long double>(a), BasicHermitianMatrix<long double>(b));
  const CMat gd = g.matrix().cast<cd>();
  CHECK(rel_diff(gd, closed_form_c()) < 1e-15);
}
