// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

// Builders for the matrix families used by the experiments: Fourier
// coefficients of generating functions, multilevel block Toeplitz matrices,
// diagonal sampling matrices and composite sequence expressions.
//
// Multi-indices are ordered lexicographically with the last level fastest,
// which is the ordering produced by J^{(k1)} (x) ... (x) J^{(kd)} (x) f_k.

#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gltmean/matfun.hpp"

namespace gltmean {

/// r x r block used by coefficient providers and weight functions. Always
/// held in long double; assembly casts to the working precision.
using Block = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
using MultiIndex = std::vector<long>;

long multi_index_volume(std::span<const long> n);

// ---------------------------------------------------------------------------
// Scalar generating functions on [-pi, pi]

struct ConstantFunction {
  long double value = 0;
};

/// f(theta) = sum_k c_k e^{i k theta}, finitely many nonzero c_k.
struct TrigPolynomial {
  std::map<long, std::complex<long double>> coefficients;
};

/// Characteristic function of [-half_width, half_width], 0 < half_width < pi.
struct IndicatorFunction {
  long double half_width = 0;
};

/// 0 on [-pi, 0], theta on (0, pi]. The reflected variant is theta -> f(-theta).
struct RampFunction {
  bool reflected = false;
};

using GeneratingFunction =
    std::variant<ConstantFunction, TrigPolynomial, IndicatorFunction, RampFunction>;

/// a0 + a1 cos(theta) + a2 cos(2 theta) + ...
GeneratingFunction cosine_polynomial(std::vector<long double> a);

/// Closed-form f_k = (2 pi)^{-1} int f(theta) e^{-i k theta} dtheta.
std::complex<long double> fourier_coefficient(const GeneratingFunction& f, long k);

std::complex<long double> evaluate(const GeneratingFunction& f, long double theta);

/// Points in (-pi, pi) where f or f' jumps; used to split quadrature.
std::vector<long double> breakpoints(const GeneratingFunction& f);

std::string describe(const GeneratingFunction& f);

/// Composite Simpson rule on the pieces of [-pi, pi] cut at `cuts`, about
/// `samples` nodes in total. Needs samples >= 2 (|k| + 1).
std::complex<long double> fourier_coefficient_quadrature(
    const std::function<std::complex<long double>(long double)>& f, long k, long samples,
    std::span<const long double> cuts = {});

// ---------------------------------------------------------------------------
// Coefficient providers: k in Z^d -> r x r block

enum class CoefficientKind { closed_form, quadrature };

class CoefficientProvider {
 public:
  virtual ~CoefficientProvider() = default;
  virtual int levels() const = 0;
  virtual int block_size() const = 0;
  virtual CoefficientKind kind() const = 0;
  virtual Block coeff(std::span<const long> k) const = 0;
  /// The generating function itself, f(theta).
  virtual Block symbol(std::span<const long double> theta) const = 0;
};

using ProviderPtr = std::shared_ptr<const CoefficientProvider>;

/// f_1(theta_1) ... f_d(theta_d) (x) block, with closed-form coefficients.
class SeparableProvider final : public CoefficientProvider {
 public:
  SeparableProvider(std::vector<GeneratingFunction> factors, Block block);

  int levels() const override { return int(factors_.size()); }
  int block_size() const override { return int(block_.rows()); }
  CoefficientKind kind() const override { return CoefficientKind::closed_form; }
  Block coeff(std::span<const long> k) const override;
  Block symbol(std::span<const long double> theta) const override;

  const std::vector<GeneratingFunction>& factors() const { return factors_; }
  const Block& block() const { return block_; }

 private:
  std::vector<GeneratingFunction> factors_;
  Block block_;
};

/// Explicit finite table of coefficients; missing indices are zero.
class TableProvider final : public CoefficientProvider {
 public:
  TableProvider(int levels, int block_size, std::map<MultiIndex, Block> table);

  int levels() const override { return levels_; }
  int block_size() const override { return block_size_; }
  CoefficientKind kind() const override { return CoefficientKind::closed_form; }
  Block coeff(std::span<const long> k) const override;
  Block symbol(std::span<const long double> theta) const override;

  const std::map<MultiIndex, Block>& table() const { return table_; }

 private:
  int levels_;
  int block_size_;
  std::map<MultiIndex, Block> table_;
};

/// Coefficients of an evaluable function by tensor-product composite Simpson
/// quadrature. Function values at the nodes are computed once.
class QuadratureProvider final : public CoefficientProvider {
 public:
  using Function = std::function<Block(std::span<const long double>)>;

  /// `cuts[l]` lists the breakpoints of level l (may be empty).
  QuadratureProvider(int levels, int block_size, Function f, long samples_per_level,
                     std::vector<std::vector<long double>> cuts = {});

  int levels() const override { return levels_; }
  int block_size() const override { return block_size_; }
  CoefficientKind kind() const override { return CoefficientKind::quadrature; }
  Block coeff(std::span<const long> k) const override;
  Block symbol(std::span<const long double> theta) const override { return f_(theta); }

  long samples_per_level() const { return samples_; }

 private:
  int levels_;
  int block_size_;
  Function f_;
  long samples_;
  std::vector<std::vector<long double>> nodes_;    // per level
  std::vector<std::vector<long double>> weights_;  // per level
  std::vector<Block> values_;                      // f at every tensor node
};

/// Multilevel block Toeplitz matrix: block (i, j) = coeff(i - j).
template <class Real>
ComplexMatrix<Real> toeplitz(const CoefficientProvider& provider, std::span<const long> n);

// ---------------------------------------------------------------------------
// Weight functions on [0, 1]^d and diagonal sampling

struct ConstantWeight {
  long double value = 0;
};

/// offset + slope * x
struct AffineWeight {
  long double offset = 0;
  long double slope = 0;
};

/// `below` on [0, at), `above` on [at, 1].
struct StepWeight {
  long double at = 0.5L;
  long double below = 0;
  long double above = 1;
};

/// Continuous piecewise-linear interpolant through (x, y) knots, x ascending,
/// constant beyond the end knots.
struct PiecewiseLinearWeight {
  std::vector<std::pair<long double, long double>> knots;
};

using ScalarWeight = std::variant<ConstantWeight, AffineWeight, StepWeight, PiecewiseLinearWeight>;

long double evaluate(const ScalarWeight& w, long double x);
std::string describe(const ScalarWeight& w);

/// a(x) = a_1(x_1) ... a_d(x_d) (x) block, or an arbitrary evaluable function.
class WeightFunction {
 public:
  using Function = std::function<Block(std::span<const long double>)>;

  WeightFunction(std::vector<ScalarWeight> factors, Block block);
  WeightFunction(int levels, int block_size, Function f);

  int levels() const { return levels_; }
  int block_size() const { return block_size_; }
  Block eval(std::span<const long double> x) const;

  /// Null for function-backed weights.
  const std::vector<ScalarWeight>* factors() const { return separable_ ? &factors_ : nullptr; }
  const Block& block() const { return block_; }

 private:
  int levels_;
  int block_size_;
  bool separable_;
  std::vector<ScalarWeight> factors_;
  Block block_;
  Function f_;
};

/// Block diagonal of a(i/n), i = 1..n per level.
template <class Real>
ComplexMatrix<Real> diag_sampling(const WeightFunction& a, std::span<const long> n);

// ---------------------------------------------------------------------------
// Sequence expressions

/// c(n) = num / den * n^exponent, n the largest component of the multi-index.
struct ScaleRule {
  long num = 1;
  long den = 1;
  int exponent = 0;

  template <class Real>
  Real at(long n) const;
  /// Limit as n -> infinity (0 for negative exponents).
  long double limit() const;
};

class SequenceExpr {
 public:
  enum class Kind { toeplitz, diag_sampling, identity, sum, product, scale, congruence, power };

  static SequenceExpr toeplitz(ProviderPtr provider);
  static SequenceExpr diag(WeightFunction weight);
  static SequenceExpr identity(int levels, int block_size);
  static SequenceExpr sum(std::vector<SequenceExpr> terms);
  static SequenceExpr product(std::vector<SequenceExpr> factors);
  static SequenceExpr scale(ScaleRule rule, SequenceExpr operand);
  /// outer * inner * outer^*
  static SequenceExpr congruence(SequenceExpr inner, SequenceExpr outer);
  static SequenceExpr power(SequenceExpr operand, long double p);

  SequenceExpr with_label(std::string label) const;
  SequenceExpr declared_hpd(bool hpd = true) const;

  Kind kind() const;
  const std::string& label() const;
  bool hpd_declared() const;
  int levels() const;
  int block_size() const;

  const ProviderPtr& provider() const;   // toeplitz
  const WeightFunction& weight() const;  // diag_sampling
  const std::vector<SequenceExpr>& children() const;
  const ScaleRule& rule() const;         // scale
  long double exponent() const;          // power

  /// Validates levels and block sizes recursively; throws Errc::construction
  /// naming the offending node.
  void check() const;

 private:
  struct Node;
  explicit SequenceExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

SequenceExpr operator+(const SequenceExpr& a, const SequenceExpr& b);
SequenceExpr operator*(const SequenceExpr& a, const SequenceExpr& b);

const char* kind_name(SequenceExpr::Kind k);

/// Evaluates the expression at n. Nodes declared HPD are certified and the
/// result carries the root's certification.
template <class Real>
BasicHermitianMatrix<Real> evaluate_sequence(const SequenceExpr& expr, std::span<const long> n);

}  // namespace gltmean
