// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include "gltmean/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gltmean {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::size_mismatch: return "size_mismatch";
    case Errc::non_finite: return "non_finite";
    case Errc::not_hpd: return "not_hpd";
    case Errc::non_convergence: return "non_convergence";
    case Errc::construction: return "construction";
    case Errc::config: return "config";
    case Errc::io: return "io";
  }
  return "unknown";
}

const char* precision_name(Precision p) noexcept {
  return p == Precision::extended ? "extended" : "standard";
}

namespace {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
using RealOf = typename Eigen::NumTraits<S>::Real;

template <class S>
struct Spectral {
  RealVector<RealOf<S>> w;
  Mat<S> v;
};

template <class S>
Spectral<S> eig_of(const Mat<S>& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Mat<S>> es(
      m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(Errc::non_convergence, "hermitian eigensolver did not converge");
  Spectral<S> out;
  out.w = es.eigenvalues();
  if (vectors) out.v = es.eigenvectors();
  return out;
}

template <class S>
Mat<S> reconstruct(const Mat<S>& v, const RealVector<RealOf<S>>& fw) {
  Mat<S> scaled = v * fw.template cast<S>().asDiagonal();
  return scaled * v.adjoint();
}

template <class S>
Mat<S> symmetrized(const Mat<S>& m) {
  return (m + m.adjoint()) / RealOf<S>(2);
}

template <class Real>
std::string describe(long double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Eigenvalue checks for Domain. Returns the scale used for the floor.
template <class Real>
void check_domain(const RealVector<Real>& w, Domain domain, const char* context) {
  if (domain == Domain::real_line || w.size() == 0) return;
  const Real lo = w.minCoeff();
  const Real scale = std::max(std::abs(lo), std::abs(w.maxCoeff()));
  const Real floor = Real(kHpdFloor) * scale;
  if (domain == Domain::positive && !(lo > floor)) {
    throw NotHpdError(std::string(context) + ": matrix is not HPD (eigenvalue " +
                          describe<Real>(lo) + " is not above the floor " +
                          describe<Real>(floor) + ")",
                      lo);
  }
  if (domain == Domain::nonnegative && lo < -floor) {
    throw NotHpdError(std::string(context) + ": matrix is not positive semidefinite (eigenvalue " +
                          describe<Real>(lo) + ")",
                      lo);
  }
}

template <class S>
Mat<S> apply_function(const Mat<S>& m, const std::function<RealOf<S>(RealOf<S>)>& f, Domain domain,
                      const char* context) {
  using Real = RealOf<S>;
  auto sp = eig_of<S>(m, true);
  check_domain<Real>(sp.w, domain, context);
  RealVector<Real> fw(sp.w.size());
  for (Eigen::Index i = 0; i < sp.w.size(); ++i) {
    Real x = sp.w(i);
    if (domain == Domain::nonnegative && x < Real(0)) x = Real(0);
    fw(i) = f(x);
  }
  return symmetrized<S>(reconstruct<S>(sp.v, fw));
}

template <class Real>
std::function<Real(Real)> power_function(Real p) {
  if (p == Real(0.5)) return [](Real x) { return std::sqrt(x); };
  if (p == Real(-0.5)) return [](Real x) { return Real(1) / std::sqrt(x); };
  if (p == Real(0.25)) return [](Real x) { return std::sqrt(std::sqrt(x)); };
  if (p == Real(1)) return [](Real x) { return x; };
  return [p](Real x) { return std::pow(x, p); };
}

template <class Real>
Domain power_domain(Real p) {
  if (p < Real(0)) return Domain::positive;
  if (p != std::floor(p)) return Domain::nonnegative;
  return Domain::real_line;
}

template <class S>
Mat<S> geometric_mean_kernel(const Mat<S>& a, const Mat<S>& b) {
  using Real = RealOf<S>;
  auto sa = eig_of<S>(a, true);
  check_domain<Real>(sa.w, Domain::positive, "geometric_mean");
  RealVector<Real> root = sa.w.cwiseSqrt();
  RealVector<Real> inv_root = root.cwiseInverse();
  const Mat<S> a_half = reconstruct<S>(sa.v, root);
  const Mat<S> a_inv_half = reconstruct<S>(sa.v, inv_root);
  const Mat<S> middle = symmetrized<S>(a_inv_half * b * a_inv_half);
  const Mat<S> middle_root =
      apply_function<S>(middle, power_function<Real>(Real(0.5)), Domain::nonnegative,
                        "geometric_mean (inner square root)");
  return symmetrized<S>(a_half * middle_root * a_half);
}

template <class S>
Mat<S> alt_mean_kernel(const Mat<S>& a, const Mat<S>& b) {
  using Real = RealOf<S>;
  const Mat<S> ba = b * a;
  const Mat<S> x = symmetrized<S>(ba.adjoint() * ba);  // A B^2 A
  return apply_function<S>(x, power_function<Real>(Real(0.25)), Domain::nonnegative, "alt_mean");
}

template <class Real>
void require_same_size(const BasicHermitianMatrix<Real>& a, const BasicHermitianMatrix<Real>& b,
                       const char* context) {
  if (a.size() != b.size()) {
    throw Error(Errc::size_mismatch, std::string(context) + ": sizes differ (" +
                                         std::to_string(a.size()) + " vs " +
                                         std::to_string(b.size()) + ")");
  }
}

template <class Real>
BasicHermitianMatrix<Real> certified_copy(const BasicHermitianMatrix<Real>& m, const char* which) {
  if (m.hpd_certified()) return m;
  BasicHermitianMatrix<Real> c = m;
  try {
    c.certify_hpd();
  } catch (const NotHpdError& e) {
    throw NotHpdError(std::string(which) + ": " + e.what(), e.eigenvalue());
  }
  return c;
}

template <class Real>
void require_finite(const BasicHermitianMatrix<Real>& m) {
  if (!m.matrix().allFinite())
    throw Error(Errc::non_finite, "matrix has non-finite entries");
}

}  // namespace

// ---------------------------------------------------------------------------

template <class Real>
BasicHermitianMatrix<Real>::BasicHermitianMatrix(const matrix_type& m) {
  if (m.rows() != m.cols())
    throw Error(Errc::size_mismatch, "Hermitian matrix must be square (got " +
                                         std::to_string(m.rows()) + "x" +
                                         std::to_string(m.cols()) + ")");
  m_ = (m + m.adjoint()) / Real(2);
  real_ = (m_.imag().array() == Real(0)).all();
}

template <class Real>
BasicHermitianMatrix<Real>::BasicHermitianMatrix(const RealMatrix<Real>& m)
    : BasicHermitianMatrix(matrix_type(m.template cast<std::complex<Real>>())) {}

template <class Real>
BasicHermitianMatrix<Real> BasicHermitianMatrix<Real>::identity(Eigen::Index n) {
  return BasicHermitianMatrix(matrix_type(matrix_type::Identity(n, n)));
}

template <class Real>
BasicHermitianMatrix<Real> BasicHermitianMatrix<Real>::diagonal(std::span<const Real> d) {
  matrix_type m = matrix_type::Zero(Eigen::Index(d.size()), Eigen::Index(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = d[i];
  return BasicHermitianMatrix(m);
}

template <class Real>
BasicHermitianMatrix<Real>& BasicHermitianMatrix<Real>::certify_hpd() {
  require_finite(*this);
  bool ok;
  if (real_) {
    Eigen::LLT<RealMatrix<Real>> llt(m_.real());
    ok = llt.info() == Eigen::Success;
  } else {
    Eigen::LLT<matrix_type> llt(m_);
    ok = llt.info() == Eigen::Success;
  }
  if (!ok || size() == 0) {
    const Real lo = size() == 0 ? Real(0) : hermitian_eigenvalues(*this).minCoeff();
    throw NotHpdError("matrix is not HPD (Cholesky failed, smallest eigenvalue " +
                          describe<Real>(lo) + ")",
                      lo);
  }
  hpd_ = true;
  return *this;
}

template <class Real>
Real BasicHermitianMatrix<Real>::rcond() const {
  if (real_) {
    Eigen::LLT<RealMatrix<Real>> llt(m_.real());
    return llt.info() == Eigen::Success ? llt.rcond() : Real(0);
  }
  Eigen::LLT<matrix_type> llt(m_);
  return llt.info() == Eigen::Success ? llt.rcond() : Real(0);
}

template <class Real>
Real hermitian_residue(const ComplexMatrix<Real>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<Real>::infinity();
  Real worst = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j; i < m.rows(); ++i)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

template <class Real>
BasicEigDecomposition<Real> hermitian_eig(const BasicHermitianMatrix<Real>& m) {
  require_finite(m);
  BasicEigDecomposition<Real> out;
  if (m.is_real()) {
    auto sp = eig_of<Real>(m.real_part(), true);
    out.eigenvalues = std::move(sp.w);
    out.eigenvectors = sp.v.template cast<std::complex<Real>>();
  } else {
    auto sp = eig_of<std::complex<Real>>(m.matrix(), true);
    out.eigenvalues = std::move(sp.w);
    out.eigenvectors = std::move(sp.v);
  }
  return out;
}

template <class Real>
RealVector<Real> hermitian_eigenvalues(const BasicHermitianMatrix<Real>& m) {
  require_finite(m);
  if (m.is_real()) return eig_of<Real>(m.real_part(), false).w;
  return eig_of<std::complex<Real>>(m.matrix(), false).w;
}

template <class Real>
BasicHermitianMatrix<Real> hpd_function(const BasicHermitianMatrix<Real>& m,
                                        const std::function<Real(Real)>& f, Domain domain) {
  require_finite(m);
  if (m.is_real()) {
    return BasicHermitianMatrix<Real>(
        RealMatrix<Real>(apply_function<Real>(m.real_part(), f, domain, "hpd_function")));
  }
  return BasicHermitianMatrix<Real>(
      apply_function<std::complex<Real>>(m.matrix(), f, domain, "hpd_function"));
}

template <class Real>
BasicHermitianMatrix<Real> matrix_power(const BasicHermitianMatrix<Real>& m, Real p) {
  return hpd_function<Real>(m, power_function<Real>(p), power_domain<Real>(p));
}

template <class Real>
BasicHermitianMatrix<Real> geometric_mean(const BasicHermitianMatrix<Real>& a,
                                          const BasicHermitianMatrix<Real>& b) {
  require_same_size(a, b, "geometric_mean");
  auto ca = certified_copy(a, "geometric_mean (first argument)");
  auto cb = certified_copy(b, "geometric_mean (second argument)");
  // G(A,B) = G(B,A); invert whichever argument is better conditioned.
  const BasicHermitianMatrix<Real>* outer = &ca;
  const BasicHermitianMatrix<Real>* inner = &cb;
  if (cb.rcond() > ca.rcond()) std::swap(outer, inner);

  if (outer->is_real() && inner->is_real()) {
    return BasicHermitianMatrix<Real>(RealMatrix<Real>(
        geometric_mean_kernel<Real>(outer->real_part(), inner->real_part())));
  }
  return BasicHermitianMatrix<Real>(
      geometric_mean_kernel<std::complex<Real>>(outer->matrix(), inner->matrix()));
}

template <class Real>
BasicHermitianMatrix<Real> geometric_mean_polar(const BasicHermitianMatrix<Real>& a,
                                                const BasicHermitianMatrix<Real>& b) {
  require_same_size(a, b, "geometric_mean_polar");
  using M = ComplexMatrix<Real>;
  Eigen::LLT<M> la(a.matrix()), lb(b.matrix());
  if (la.info() != Eigen::Success)
    throw NotHpdError("geometric_mean_polar (first argument): Cholesky failed", 0);
  if (lb.info() != Eigen::Success)
    throw NotHpdError("geometric_mean_polar (second argument): Cholesky failed", 0);
  // A = L L*, B = K K*. With U the unitary polar factor of K* L^{-*},
  // G = L U* K*.
  const M l = la.matrixL();
  const M k = lb.matrixL();
  const M x = l.template triangularView<Eigen::Lower>().solve(k);  // (K* L^{-*})*
  Eigen::JacobiSVD<M> svd(x.adjoint(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (!svd.matrixU().allFinite() || !svd.matrixV().allFinite())
    throw Error(Errc::non_convergence, "geometric_mean_polar: SVD failed");
  const M g = l * (svd.matrixV() * svd.matrixU().adjoint()) * k.adjoint();
  return BasicHermitianMatrix<Real>(g);
}

template <class Real>
BasicHermitianMatrix<Real> alt_mean(const BasicHermitianMatrix<Real>& a,
                                    const BasicHermitianMatrix<Real>& b) {
  require_same_size(a, b, "alt_mean");
  auto ca = certified_copy(a, "alt_mean (first argument)");
  auto cb = certified_copy(b, "alt_mean (second argument)");
  if (ca.is_real() && cb.is_real()) {
    return BasicHermitianMatrix<Real>(
        RealMatrix<Real>(alt_mean_kernel<Real>(ca.real_part(), cb.real_part())));
  }
  return BasicHermitianMatrix<Real>(alt_mean_kernel<std::complex<Real>>(ca.matrix(), cb.matrix()));
}

namespace {

template <class Real>
Real schatten_of(std::span<const Real> eig, double p) {
  if (!(p >= 1.0))
    throw Error(Errc::invalid_argument, "Schatten norm needs p >= 1 (got " + std::to_string(p) + ")");
  Real largest = 0;
  for (Real x : eig) largest = std::max(largest, std::abs(x));
  if (std::isinf(p) || largest == Real(0)) return largest;
  // Scale by the largest singular value so the p-th powers stay in range.
  Real acc = 0;
  for (Real x : eig) acc += std::pow(std::abs(x) / largest, Real(p));
  return largest * std::pow(acc, Real(1) / Real(p));
}

}  // namespace

template <class Real>
Real schatten_norm(const BasicHermitianMatrix<Real>& m, double p) {
  if (!(p >= 1.0))
    throw Error(Errc::invalid_argument, "Schatten norm needs p >= 1 (got " + std::to_string(p) + ")");
  const RealVector<Real> w = hermitian_eigenvalues(m);
  return schatten_of<Real>(std::span<const Real>(w.data(), std::size_t(w.size())), p);
}

double schatten_norm_of_eigenvalues(std::span<const double> eigenvalues, double p) {
  return schatten_of<double>(eigenvalues, p);
}

#define GLTMEAN_INSTANTIATE(Real)                                                              \
  template class BasicHermitianMatrix<Real>;                                                   \
  template Real hermitian_residue<Real>(const ComplexMatrix<Real>&);                           \
  template BasicEigDecomposition<Real> hermitian_eig<Real>(const BasicHermitianMatrix<Real>&); \
  template RealVector<Real> hermitian_eigenvalues<Real>(const BasicHermitianMatrix<Real>&);    \
  template BasicHermitianMatrix<Real> hpd_function<Real>(                                      \
      const BasicHermitianMatrix<Real>&, const std::function<Real(Real)>&, Domain);            \
  template BasicHermitianMatrix<Real> matrix_power<Real>(const BasicHermitianMatrix<Real>&,    \
                                                         Real);                                \
  template BasicHermitianMatrix<Real> geometric_mean<Real>(const BasicHermitianMatrix<Real>&,  \
                                                           const BasicHermitianMatrix<Real>&); \
  template BasicHermitianMatrix<Real> geometric_mean_polar<Real>(                              \
      const BasicHermitianMatrix<Real>&, const BasicHermitianMatrix<Real>&);                   \
  template BasicHermitianMatrix<Real> alt_mean<Real>(const BasicHermitianMatrix<Real>&,        \
                                                     const BasicHermitianMatrix<Real>&);       \
  template Real schatten_norm<Real>(const BasicHermitianMatrix<Real>&, double);

GLTMEAN_INSTANTIATE(double)
GLTMEAN_INSTANTIATE(long double)

#undef GLTMEAN_INSTANTIATE

}  // namespace gltmean
