// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

// Dense Hermitian matrix functions: eigendecomposition, functional calculus,
// the two-matrix geometric mean and Schatten norms.
//
// Everything is templated on the real type. `double` is the working
// precision; `long double` is used where an experiment needs eigenvalues
// far below eps * ||M|| (shifted near-singular Toeplitz pencils).

#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>

#include <Eigen/Dense>

#include "gltmean/error.hpp"

namespace gltmean {

enum class Precision { standard, extended };

const char* precision_name(Precision p) noexcept;

template <class Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Fractional and negative powers need lambda_min > kHpdFloor * lambda_max.
inline constexpr double kHpdFloor = 1e-14;

/// Dense complex matrix stored as (M + M*) / 2.
template <class Real>
class BasicHermitianMatrix {
 public:
  using real_type = Real;
  using matrix_type = ComplexMatrix<Real>;

  BasicHermitianMatrix() = default;
  explicit BasicHermitianMatrix(const matrix_type& m);
  explicit BasicHermitianMatrix(const RealMatrix<Real>& m);

  static BasicHermitianMatrix identity(Eigen::Index n);
  static BasicHermitianMatrix diagonal(std::span<const Real> d);

  Eigen::Index size() const noexcept { return m_.rows(); }
  const matrix_type& matrix() const noexcept { return m_; }
  const std::complex<Real>& operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// True when every imaginary part is exactly zero; kernels then run in
  /// real arithmetic.
  bool is_real() const noexcept { return real_; }
  RealMatrix<Real> real_part() const { return m_.real(); }

  bool hpd_certified() const noexcept { return hpd_; }

  /// Cholesky-based positive-definiteness check. Throws NotHpdError.
  BasicHermitianMatrix& certify_hpd();

  /// Reciprocal condition estimate from the Cholesky factor; 0 if not PD.
  Real rcond() const;

  template <class Other>
  BasicHermitianMatrix<Other> cast() const {
    BasicHermitianMatrix<Other> out(m_.template cast<std::complex<Other>>().eval());
    return out;
  }

 private:
  matrix_type m_;
  bool real_ = true;
  bool hpd_ = false;
};

using HermitianMatrix = BasicHermitianMatrix<double>;

/// Largest |M(i,j) - conj(M(j,i))|.
template <class Real>
Real hermitian_residue(const ComplexMatrix<Real>& m);

template <class Real>
struct BasicEigDecomposition {
  RealVector<Real> eigenvalues;       // ascending
  ComplexMatrix<Real> eigenvectors;   // column i pairs with eigenvalue i
};

using EigDecomposition = BasicEigDecomposition<double>;

template <class Real>
BasicEigDecomposition<Real> hermitian_eig(const BasicHermitianMatrix<Real>& m);

/// Ascending eigenvalues only.
template <class Real>
RealVector<Real> hermitian_eigenvalues(const BasicHermitianMatrix<Real>& m);

/// Where a scalar function is defined; decides the eigenvalue checks done by
/// hpd_function.
enum class Domain {
  real_line,    // any eigenvalue
  nonnegative,  // eigenvalues >= -kHpdFloor * lambda_max, negatives mapped to 0
  positive,     // eigenvalues > kHpdFloor * lambda_max
};

/// f(M) = V f(Lambda) V*.
template <class Real>
BasicHermitianMatrix<Real> hpd_function(const BasicHermitianMatrix<Real>& m,
                                        const std::function<Real(Real)>& f,
                                        Domain domain = Domain::real_line);

/// M^p. Negative p needs Domain::positive, non-integer p Domain::nonnegative.
template <class Real>
BasicHermitianMatrix<Real> matrix_power(const BasicHermitianMatrix<Real>& m, Real p);

/// A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}. Inputs that are not yet
/// certified are certified here.
template <class Real>
BasicHermitianMatrix<Real> geometric_mean(const BasicHermitianMatrix<Real>& a,
                                          const BasicHermitianMatrix<Real>& b);

/// Same mean through Cholesky factors and a polar decomposition (SVD).
/// Accurate for nearly singular inputs; meant for small blocks.
template <class Real>
BasicHermitianMatrix<Real> geometric_mean_polar(const BasicHermitianMatrix<Real>& a,
                                                const BasicHermitianMatrix<Real>& b);

/// (A B^2 A)^{1/4}; needs no inverse. Equals geometric_mean when AB = BA.
template <class Real>
BasicHermitianMatrix<Real> alt_mean(const BasicHermitianMatrix<Real>& a,
                                    const BasicHermitianMatrix<Real>& b);

/// l^p norm of the singular values, p in [1, inf].
template <class Real>
Real schatten_norm(const BasicHermitianMatrix<Real>& m, double p);

/// Schatten norm from a precomputed eigenvalue list.
double schatten_norm_of_eigenvalues(std::span<const double> eigenvalues, double p);

}  // namespace gltmean
