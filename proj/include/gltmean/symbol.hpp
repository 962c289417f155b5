// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

// Matrix-valued symbols on [0,1]^d x [-pi,pi]^d, the epsilon-regularized
// candidate symbol, and sampled rearrangements (quantile curves).

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gltmean/glt_build.hpp"

namespace gltmean {

class SymbolFunction {
 public:
  using Function =
      std::function<Block(std::span<const long double> x, std::span<const long double> theta)>;

  SymbolFunction(int levels, int block_size, Function f, std::string description);

  static SymbolFunction zero(int levels, int block_size);
  static SymbolFunction constant(int levels, Block value, std::string description);

  int levels() const { return levels_; }
  int block_size() const { return block_size_; }
  const std::string& description() const { return description_; }

  /// Evaluates and checks the block size; throws Errc::invalid_argument.
  Block operator()(std::span<const long double> x, std::span<const long double> theta) const;

 private:
  int levels_;
  int block_size_;
  Function f_;
  std::string description_;
};

/// Symbol of a sequence expression by the GLT calculus: Toeplitz -> f(theta),
/// diagonal sampling -> a(x), identity -> I, scale -> lim c(n) times operand,
/// sums, products, congruences and powers pointwise.
SymbolFunction symbol_of(const SequenceExpr& expr);

struct CandidateResult {
  Block value;
  int steps = 0;              // schedule entries used
  long double last_gap = 0;   // Frobenius gap between the last two estimates
};

/// lim_{eps -> 0} G(kappa + eps I, xi + eps I) on the schedule eps_k = 10^-k,
/// k = 1..12, accelerated by Richardson extrapolation in sqrt(eps). Returns
/// once two consecutive estimates differ by less than `tol` (Frobenius);
/// throws Errc::non_convergence with the final gap otherwise. The result is
/// projected onto the PSD cone.
CandidateResult candidate_point_detailed(const Block& kappa, const Block& xi,
                                         long double tol = 1e-8L);

inline Block candidate_point(const Block& kappa, const Block& xi, long double tol = 1e-8L) {
  return candidate_point_detailed(kappa, xi, tol).value;
}

/// Pointwise candidate symbol of two symbols.
SymbolFunction candidate_symbol(const SymbolFunction& kappa, const SymbolFunction& xi,
                                long double tol = 1e-8L);

struct SymbolGrid {
  long mx = 40;
  long mtheta = 50;
};

/// Midpoint nodes x_j = (j - 1/2)/mx and theta_i = -pi + (i - 1/2) 2 pi / mtheta.
std::vector<long double> grid_x(long mx);
std::vector<long double> grid_theta(long mtheta);

/// Sorted samples of the rearranged symbol, interpreted at t_i = (i - 1/2)/N.
struct QuantileCurve {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  /// Piecewise-linear interpolation at t in [0, 1], constant beyond the end nodes.
  double at(double t) const;
};

/// Eigenvalues of every grid node, merged and sorted. Values in [-1e-10, 0)
/// are clamped to 0; anything lower raises an error naming the node.
QuantileCurve rearranged_quantile(const SymbolFunction& sym, SymbolGrid grid = {},
                                  int threads = 1);

/// Fraction of (node, eigenvalue) pairs with eigenvalue <= threshold.
double zero_measure(const SymbolFunction& sym, double threshold, SymbolGrid grid = {},
                    int threads = 1);

/// Fraction of curve samples <= threshold.
double zero_measure(const QuantileCurve& curve, double threshold);

}  // namespace gltmean
