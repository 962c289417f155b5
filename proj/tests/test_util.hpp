// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the unit tests: random Hermitian matrices and norms.

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "gltmean/matfun.hpp"

namespace gltmean::test {

using CMat = ComplexMatrix<double>;
using cd = std::complex<double>;

inline CMat random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cd(g(rng), g(rng));
  return m;
}

/// Random unitary from the QR factor of a Gaussian matrix.
inline CMat random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<CMat> qr(random_complex(rng, n, n));
  return qr.householderQ() * CMat::Identity(n, n);
}

/// Q diag(lambda) Q* with eigenvalues uniform in [lo, hi].
inline CMat random_hpd(std::mt19937_64& rng, Eigen::Index n, double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  const CMat q = random_unitary(rng, n);
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = u(rng);
  return q * d.asDiagonal() * q.adjoint();
}

inline double rel_diff(const CMat& a, const CMat& b) { return (a - b).norm() / b.norm(); }

inline HermitianMatrix herm(const CMat& m) { return HermitianMatrix(m); }

}  // namespace gltmean::test
