// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include "gltmean/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"

namespace gltmean {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr long double kNegativeClamp = 1e-10L;

using HermL = BasicHermitianMatrix<long double>;

std::string coordinates(std::span<const long double> x, std::span<const long double> theta) {
  std::ostringstream os;
  os.precision(6);
  os << "(x=";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << double(x[i]);
  os << ", theta=";
  for (std::size_t i = 0; i < theta.size(); ++i) os << (i ? "," : "") << double(theta[i]);
  os << ")";
  return os.str();
}

Block psd_projection(const Block& m) {
  auto eig = hermitian_eig(HermL(m));
  RealVector<long double> w = eig.eigenvalues.cwiseMax(0.0L);
  return eig.eigenvectors * w.cast<std::complex<long double>>().asDiagonal() *
         eig.eigenvectors.adjoint();
}

Block block_power(const Block& m, long double p) {
  auto eig = hermitian_eig(HermL(m));
  RealVector<long double> w = eig.eigenvalues;
  const long double scale = std::max(std::abs(w.minCoeff()), std::abs(w.maxCoeff()));
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    long double v = w(i);
    if (v < 0 && v >= -kNegativeClamp * std::max(1.0L, scale)) v = 0;
    if (v < 0) throw NotHpdError("symbol power of an indefinite block", w(i));
    if (p < 0 && v == 0) throw NotHpdError("negative power of a singular symbol block", v);
    w(i) = std::pow(v, p);
  }
  return eig.eigenvectors * w.cast<std::complex<long double>>().asDiagonal() *
         eig.eigenvectors.adjoint();
}

}  // namespace

SymbolFunction::SymbolFunction(int levels, int block_size, Function f, std::string description)
    : levels_(levels), block_size_(block_size), f_(std::move(f)), description_(std::move(description)) {
  if (levels_ < 1 || block_size_ < 1)
    throw Error(Errc::invalid_argument, "symbol needs positive levels and block size");
  if (!f_) throw Error(Errc::invalid_argument, "symbol without an evaluator");
}

SymbolFunction SymbolFunction::zero(int levels, int block_size) {
  return constant(levels, Block::Zero(block_size, block_size), "0");
}

SymbolFunction SymbolFunction::constant(int levels, Block value, std::string description) {
  const int r = int(value.rows());
  return SymbolFunction(
      levels, r, [v = std::move(value)](auto, auto) { return v; }, std::move(description));
}

Block SymbolFunction::operator()(std::span<const long double> x,
                                 std::span<const long double> theta) const {
  if (long(x.size()) != levels_ || long(theta.size()) != levels_)
    throw Error(Errc::size_mismatch, "symbol evaluated with the wrong number of coordinates");
  Block b = f_(x, theta);
  if (b.rows() != block_size_ || b.cols() != block_size_)
    throw Error(Errc::size_mismatch, "symbol returned a block of wrong size");
  return b;
}

// ---------------------------------------------------------------------------

SymbolFunction symbol_of(const SequenceExpr& expr) {
  expr.check();
  const int d = expr.levels();
  const int r = expr.block_size();
  using K = SequenceExpr::Kind;
  switch (expr.kind()) {
    case K::toeplitz: {
      ProviderPtr p = expr.provider();
      return SymbolFunction(
          d, r, [p](auto, std::span<const long double> theta) { return p->symbol(theta); },
          "toeplitz");
    }
    case K::diag_sampling: {
      WeightFunction w = expr.weight();
      return SymbolFunction(
          d, r, [w](std::span<const long double> x, auto) { return w.eval(x); }, "diag");
    }
    case K::identity:
      return SymbolFunction::constant(d, Block::Identity(r, r), "I");
    case K::sum:
    case K::product: {
      std::vector<SymbolFunction> parts;
      for (const auto& c : expr.children()) parts.push_back(symbol_of(c));
      const bool is_sum = expr.kind() == K::sum;
      return SymbolFunction(
          d, r,
          [parts, is_sum](std::span<const long double> x, std::span<const long double> theta) {
            Block acc = parts[0](x, theta);
            for (std::size_t i = 1; i < parts.size(); ++i)
              acc = is_sum ? Block(acc + parts[i](x, theta)) : Block(acc * parts[i](x, theta));
            return acc;
          },
          is_sum ? "sum" : "product");
    }
    case K::scale: {
      const long double c = expr.rule().limit();
      if (c == 0) return SymbolFunction::zero(d, r);
      SymbolFunction inner = symbol_of(expr.children()[0]);
      return SymbolFunction(
          d, r,
          [inner, c](std::span<const long double> x, std::span<const long double> theta) {
            return Block(c * inner(x, theta));
          },
          "scale");
    }
    case K::congruence: {
      SymbolFunction inner = symbol_of(expr.children()[0]);
      SymbolFunction outer = symbol_of(expr.children()[1]);
      return SymbolFunction(
          d, r,
          [inner, outer](std::span<const long double> x, std::span<const long double> theta) {
            const Block m = outer(x, theta);
            return Block(m * inner(x, theta) * m.adjoint());
          },
          "congruence");
    }
    case K::power: {
      SymbolFunction inner = symbol_of(expr.children()[0]);
      const long double p = expr.exponent();
      return SymbolFunction(
          d, r,
          [inner, p](std::span<const long double> x, std::span<const long double> theta) {
            return block_power(inner(x, theta), p);
          },
          "power");
    }
  }
  throw Error(Errc::construction, "unknown expression node");
}

// ---------------------------------------------------------------------------

CandidateResult candidate_point_detailed(const Block& kappa, const Block& xi, long double tol) {
  if (kappa.rows() != kappa.cols() || xi.rows() != xi.cols() || kappa.rows() != xi.rows())
    throw Error(Errc::size_mismatch, "candidate_point: inputs must be square of equal size");
  if (!(tol > 0)) throw Error(Errc::invalid_argument, "candidate_point: tol must be positive");
  const Eigen::Index r = kappa.rows();
  CandidateResult out;
  if (kappa.isZero(0) || xi.isZero(0)) {
    // G(eps I, xi + eps I) = sqrt(eps) (xi + eps I)^{1/2} -> 0.
    out.value = Block::Zero(r, r);
    return out;
  }

  constexpr int kSchedule = 12;
  constexpr int kLevels = 3;
  const long double rho = std::sqrt(10.0L);
  const Block id = Block::Identity(r, r);

  std::vector<Block> prev_row;
  Block prev_estimate;
  long double gap = std::numeric_limits<long double>::infinity();
  long double eps = 1;
  for (int k = 1; k <= kSchedule; ++k) {
    eps /= 10;
    Block g;
    try {
      g = geometric_mean_polar(HermL(Block(kappa + eps * id)), HermL(Block(xi + eps * id))).matrix();
    } catch (const NotHpdError&) {
      break;  // shift fell below roundoff of the inputs; judge what we have
    }
    std::vector<Block> row{g};
    for (int j = 1; j <= std::min<int>(kLevels, int(prev_row.size())); ++j) {
      const long double f = std::pow(rho, static_cast<long double>(j));
      row.push_back((f * row[std::size_t(j - 1)] - prev_row[std::size_t(j - 1)]) / (f - 1));
    }
    const Block& estimate = row.back();
    out.steps = k;
    if (k > 1) {
      gap = (estimate - prev_estimate).norm();
      out.last_gap = gap;
      if (gap < tol) {
        out.value = psd_projection(estimate);
        return out;
      }
    }
    prev_estimate = estimate;
    prev_row = std::move(row);
  }
  std::ostringstream os;
  os << "candidate_point: no convergence after " << out.steps
     << " schedule steps; last gap " << double(gap);
  throw Error(Errc::non_convergence, os.str());
}

SymbolFunction candidate_symbol(const SymbolFunction& kappa, const SymbolFunction& xi,
                                long double tol) {
  if (kappa.levels() != xi.levels() || kappa.block_size() != xi.block_size())
    throw Error(Errc::size_mismatch, "candidate_symbol: symbols of different shape");
  return SymbolFunction(
      kappa.levels(), kappa.block_size(),
      [kappa, xi, tol](std::span<const long double> x, std::span<const long double> theta) {
        return candidate_point(kappa(x, theta), xi(x, theta), tol);
      },
      "candidate(" + kappa.description() + ", " + xi.description() + ")");
}

// ---------------------------------------------------------------------------

std::vector<long double> grid_x(long mx) {
  if (mx < 1) throw Error(Errc::invalid_argument, "grid: Mx must be >= 1");
  std::vector<long double> g(static_cast<std::size_t>(mx));
  for (long j = 0; j < mx; ++j) g[std::size_t(j)] = (j + 0.5L) / mx;
  return g;
}

std::vector<long double> grid_theta(long mtheta) {
  if (mtheta < 1) throw Error(Errc::invalid_argument, "grid: Mtheta must be >= 1");
  std::vector<long double> g(static_cast<std::size_t>(mtheta));
  for (long i = 0; i < mtheta; ++i) g[std::size_t(i)] = -kPi + (i + 0.5L) * 2 * kPi / mtheta;
  return g;
}

double QuantileCurve::at(double t) const {
  if (values.empty()) throw Error(Errc::invalid_argument, "empty quantile curve");
  const double n = double(values.size());
  const double pos = t * n - 0.5;
  if (pos <= 0) return values.front();
  if (pos >= n - 1) return values.back();
  const auto j = std::size_t(pos);
  const double f = pos - double(j);
  return values[j] + (values[j + 1] - values[j]) * f;
}

QuantileCurve rearranged_quantile(const SymbolFunction& sym, SymbolGrid grid, int threads) {
  const auto gx = grid_x(grid.mx);
  const auto gt = grid_theta(grid.mtheta);
  const int d = sym.levels();
  const int r = sym.block_size();
  long nodes_x = 1, nodes_t = 1;
  for (int l = 0; l < d; ++l) {
    nodes_x *= grid.mx;
    nodes_t *= grid.mtheta;
  }
  const long nodes = nodes_x * nodes_t;
  std::vector<double> values(static_cast<std::size_t>(nodes * r));
  detail::parallel_for(nodes, threads, [&](long node) {
    std::vector<long double> x(static_cast<std::size_t>(d)), theta(static_cast<std::size_t>(d));
    long ix = node / nodes_t, it = node % nodes_t;
    for (int l = d; l-- > 0;) {
      x[std::size_t(l)] = gx[std::size_t(ix % grid.mx)];
      theta[std::size_t(l)] = gt[std::size_t(it % grid.mtheta)];
      ix /= grid.mx;
      it /= grid.mtheta;
    }
    RealVector<long double> w;
    try {
      w = hermitian_eigenvalues(HermL(sym(x, theta)));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " at " + coordinates(x, theta));
    }
    for (int i = 0; i < r; ++i) {
      long double v = w(i);
      if (!std::isfinite(double(v)))
        throw Error(Errc::non_finite, "non-finite symbol eigenvalue at " + coordinates(x, theta));
      if (v < 0) {
        if (v < -kNegativeClamp) {
          std::ostringstream os;
          os << "symbol eigenvalue " << double(v) << " below -1e-10 at " << coordinates(x, theta);
          throw Error(Errc::not_hpd, os.str());
        }
        v = 0;
      }
      values[std::size_t(node * r + i)] = double(v);
    }
  });
  std::sort(values.begin(), values.end());
  return QuantileCurve{std::move(values)};
}

double zero_measure(const QuantileCurve& curve, double threshold) {
  if (threshold < 0) throw Error(Errc::invalid_argument, "zero_measure: threshold must be >= 0");
  if (curve.values.empty()) return 0;
  const auto it = std::upper_bound(curve.values.begin(), curve.values.end(), threshold);
  return double(it - curve.values.begin()) / double(curve.values.size());
}

double zero_measure(const SymbolFunction& sym, double threshold, SymbolGrid grid, int threads) {
  if (threshold < 0) throw Error(Errc::invalid_argument, "zero_measure: threshold must be >= 0");
  return zero_measure(rearranged_quantile(sym, grid, threads), threshold);
}

}  // namespace gltmean
