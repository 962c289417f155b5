// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include "gltmean/glt_build.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace gltmean {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

std::string number(long double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void require_levels(std::span<const long> n, int levels, const char* context) {
  if (long(n.size()) != levels) {
    throw Error(Errc::size_mismatch, std::string(context) + ": expected a " +
                                         std::to_string(levels) + "-level multi-index, got " +
                                         std::to_string(n.size()) + " components");
  }
  for (long v : n)
    if (v < 1)
      throw Error(Errc::invalid_argument,
                  std::string(context) + ": multi-index components must be >= 1");
}

// Lexicographic decomposition, last level fastest.
std::vector<MultiIndex> enumerate(std::span<const long> n) {
  const long total = multi_index_volume(n);
  std::vector<MultiIndex> out(std::size_t(total), MultiIndex(n.size()));
  for (long lin = 0; lin < total; ++lin) {
    long rest = lin;
    for (std::size_t l = n.size(); l-- > 0;) {
      out[std::size_t(lin)][l] = rest % n[l];
      rest /= n[l];
    }
  }
  return out;
}

}  // namespace

long multi_index_volume(std::span<const long> n) {
  long v = 1;
  for (long x : n) v *= x;
  return v;
}

// ---------------------------------------------------------------------------
// Generating functions

GeneratingFunction cosine_polynomial(std::vector<long double> a) {
  TrigPolynomial p;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0) continue;
    if (k == 0) {
      p.coefficients[0] = a[0];
    } else {
      p.coefficients[long(k)] = a[k] / 2;
      p.coefficients[-long(k)] = a[k] / 2;
    }
  }
  return p;
}

std::complex<long double> fourier_coefficient(const GeneratingFunction& f, long k) {
  using C = std::complex<long double>;
  return std::visit(
      [k](const auto& g) -> C {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConstantFunction>) {
          return k == 0 ? C(g.value) : C(0);
        } else if constexpr (std::is_same_v<T, TrigPolynomial>) {
          auto it = g.coefficients.find(k);
          return it == g.coefficients.end() ? C(0) : it->second;
        } else if constexpr (std::is_same_v<T, IndicatorFunction>) {
          if (k == 0) return C(g.half_width / kPi);
          return C(std::sin(k * g.half_width) / (kPi * k));
        } else {
          // int_0^pi theta e^{-i k theta} dtheta / (2 pi)
          const long m = g.reflected ? -k : k;
          if (m == 0) return C(kPi / 4);
          const long double sign = (m % 2 == 0) ? 1.0L : -1.0L;
          const long double md = static_cast<long double>(m);
          return C((sign - 1) / (2 * kPi * md * md), sign / (2 * md));
        }
      },
      f);
}

std::complex<long double> evaluate(const GeneratingFunction& f, long double theta) {
  using C = std::complex<long double>;
  return std::visit(
      [theta](const auto& g) -> C {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConstantFunction>) {
          return C(g.value);
        } else if constexpr (std::is_same_v<T, TrigPolynomial>) {
          C acc = 0;
          for (const auto& [k, c] : g.coefficients) acc += c * std::polar(1.0L, k * theta);
          return acc;
        } else if constexpr (std::is_same_v<T, IndicatorFunction>) {
          return C(std::abs(theta) <= g.half_width ? 1 : 0);
        } else {
          const long double t = g.reflected ? -theta : theta;
          return C(t > 0 ? t : 0);
        }
      },
      f);
}

std::vector<long double> breakpoints(const GeneratingFunction& f) {
  if (auto* ind = std::get_if<IndicatorFunction>(&f)) return {-ind->half_width, ind->half_width};
  if (std::holds_alternative<RampFunction>(f)) return {0.0L};
  return {};
}

std::string describe(const GeneratingFunction& f) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConstantFunction>) {
          return number(g.value);
        } else if constexpr (std::is_same_v<T, TrigPolynomial>) {
          std::string s = "trig{";
          bool first = true;
          for (const auto& [k, c] : g.coefficients) {
            if (!first) s += ", ";
            first = false;
            s += std::to_string(k) + ": " + number(c.real());
            if (c.imag() != 0) s += (c.imag() > 0 ? "+" : "") + number(c.imag()) + "i";
          }
          return s + "}";
        } else if constexpr (std::is_same_v<T, IndicatorFunction>) {
          return "chi[-" + number(g.half_width) + "," + number(g.half_width) + "]";
        } else {
          return g.reflected ? "ramp(-theta)" : "ramp(theta)";
        }
      },
      f);
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

struct Rule {
  std::vector<long double> nodes;
  std::vector<long double> weights;
};

// Composite Simpson on each piece of [-pi, pi] cut at `cuts`. Piece end
// nodes are nudged one ulp inward so that jumps are sampled from the side
// the piece owns.
Rule simpson_rule(long samples, std::span<const long double> cuts) {
  std::vector<long double> edges{-kPi};
  std::vector<long double> inner(cuts.begin(), cuts.end());
  std::sort(inner.begin(), inner.end());
  for (long double c : inner)
    if (c > edges.back() && c < kPi) edges.push_back(c);
  edges.push_back(kPi);

  Rule rule;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const long double lo = edges[p];
    const long double hi = edges[p + 1];
    long panels = std::lround(static_cast<long double>(samples) * (hi - lo) / (2 * kPi));
    panels = std::max(2L, panels + (panels % 2));
    const long double h = (hi - lo) / panels;
    for (long j = 0; j <= panels; ++j) {
      long double x = lo + j * h;
      if (j == 0) x = std::nextafter(lo, hi);
      if (j == panels) x = std::nextafter(hi, lo);
      const long double w = (j == 0 || j == panels) ? 1 : (j % 2 ? 4 : 2);
      rule.nodes.push_back(x);
      rule.weights.push_back(w * h / 3);
    }
  }
  return rule;
}

void require_resolution(long samples, long k, const char* context) {
  if (samples < 2 * (std::abs(k) + 1)) {
    throw Error(Errc::invalid_argument,
                std::string(context) + ": quadrature resolution " + std::to_string(samples) +
                    " is below 2(|k|+1) = " + std::to_string(2 * (std::abs(k) + 1)));
  }
}

}  // namespace

std::complex<long double> fourier_coefficient_quadrature(
    const std::function<std::complex<long double>(long double)>& f, long k, long samples,
    std::span<const long double> cuts) {
  require_resolution(samples, k, "fourier_coefficient_quadrature");
  const Rule rule = simpson_rule(samples, cuts);
  std::complex<long double> acc = 0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j)
    acc += rule.weights[j] * f(rule.nodes[j]) * std::polar(1.0L, -k * rule.nodes[j]);
  return acc / (2 * kPi);
}

// ---------------------------------------------------------------------------
// Providers

SeparableProvider::SeparableProvider(std::vector<GeneratingFunction> factors, Block block)
    : factors_(std::move(factors)), block_(std::move(block)) {
  if (factors_.empty())
    throw Error(Errc::invalid_argument, "separable provider needs at least one level");
  if (block_.rows() < 1 || block_.rows() != block_.cols())
    throw Error(Errc::size_mismatch, "provider block must be square and non-empty");
}

Block SeparableProvider::coeff(std::span<const long> k) const {
  if (k.size() != factors_.size()) throw Error(Errc::size_mismatch, "coeff: wrong number of levels");
  std::complex<long double> c = 1;
  for (std::size_t l = 0; l < factors_.size(); ++l) c *= fourier_coefficient(factors_[l], k[l]);
  return c * block_;
}

Block SeparableProvider::symbol(std::span<const long double> theta) const {
  if (theta.size() != factors_.size())
    throw Error(Errc::size_mismatch, "symbol: wrong number of angles");
  std::complex<long double> c = 1;
  for (std::size_t l = 0; l < factors_.size(); ++l) c *= evaluate(factors_[l], theta[l]);
  return c * block_;
}

TableProvider::TableProvider(int levels, int block_size, std::map<MultiIndex, Block> table)
    : levels_(levels), block_size_(block_size), table_(std::move(table)) {
  if (levels_ < 1 || block_size_ < 1)
    throw Error(Errc::invalid_argument, "table provider needs positive levels and block size");
  for (const auto& [k, b] : table_) {
    if (long(k.size()) != levels_)
      throw Error(Errc::size_mismatch, "table provider: index with wrong number of levels");
    if (b.rows() != block_size_ || b.cols() != block_size_)
      throw Error(Errc::size_mismatch, "table provider: block of wrong size");
  }
}

Block TableProvider::coeff(std::span<const long> k) const {
  if (long(k.size()) != levels_)
    throw Error(Errc::size_mismatch, "coeff: wrong number of levels");
  auto it = table_.find(MultiIndex(k.begin(), k.end()));
  if (it == table_.end()) return Block::Zero(block_size_, block_size_);
  return it->second;
}

Block TableProvider::symbol(std::span<const long double> theta) const {
  if (long(theta.size()) != levels_)
    throw Error(Errc::size_mismatch, "symbol: wrong number of angles");
  Block acc = Block::Zero(block_size_, block_size_);
  for (const auto& [k, b] : table_) {
    long double phase = 0;
    for (int l = 0; l < levels_; ++l) phase += k[std::size_t(l)] * theta[std::size_t(l)];
    acc += std::polar(1.0L, phase) * b;
  }
  return acc;
}

QuadratureProvider::QuadratureProvider(int levels, int block_size, Function f,
                                       long samples_per_level,
                                       std::vector<std::vector<long double>> cuts)
    : levels_(levels), block_size_(block_size), f_(std::move(f)), samples_(samples_per_level) {
  if (levels_ < 1 || block_size_ < 1)
    throw Error(Errc::invalid_argument, "quadrature provider needs positive levels and block size");
  if (samples_ < 2)
    throw Error(Errc::invalid_argument, "quadrature provider needs at least 2 samples per level");
  cuts.resize(std::size_t(levels_));
  for (int l = 0; l < levels_; ++l) {
    Rule r = simpson_rule(samples_, cuts[std::size_t(l)]);
    nodes_.push_back(std::move(r.nodes));
    weights_.push_back(std::move(r.weights));
  }
  std::vector<long> dims;
  for (const auto& nd : nodes_) dims.push_back(long(nd.size()));
  const auto all = enumerate(dims);
  values_.reserve(all.size());
  std::vector<long double> theta(static_cast<std::size_t>(levels_));
  for (const auto& idx : all) {
    for (int l = 0; l < levels_; ++l)
      theta[std::size_t(l)] = nodes_[std::size_t(l)][std::size_t(idx[std::size_t(l)])];
    Block v = f_(theta);
    if (v.rows() != block_size_ || v.cols() != block_size_)
      throw Error(Errc::size_mismatch, "quadrature provider: function returned a block of wrong size");
    values_.push_back(std::move(v));
  }
}

Block QuadratureProvider::coeff(std::span<const long> k) const {
  if (long(k.size()) != levels_)
    throw Error(Errc::size_mismatch, "coeff: wrong number of levels");
  for (long kl : k) require_resolution(samples_, kl, "quadrature provider");
  // Per-level weighted phases w_j e^{-i k theta_j}.
  std::vector<std::vector<std::complex<long double>>> phase(static_cast<std::size_t>(levels_));
  for (int l = 0; l < levels_; ++l) {
    const auto& nd = nodes_[std::size_t(l)];
    const auto& wt = weights_[std::size_t(l)];
    auto& ph = phase[std::size_t(l)];
    ph.resize(nd.size());
    for (std::size_t j = 0; j < nd.size(); ++j)
      ph[j] = wt[j] * std::polar(1.0L, -k[std::size_t(l)] * nd[j]);
  }
  Block acc = Block::Zero(block_size_, block_size_);
  std::vector<std::size_t> idx(std::size_t(levels_), 0);
  for (const Block& v : values_) {
    std::complex<long double> w = 1;
    for (int l = 0; l < levels_; ++l) w *= phase[std::size_t(l)][idx[std::size_t(l)]];
    acc += w * v;
    for (std::size_t l = idx.size(); l-- > 0;) {
      if (++idx[l] < nodes_[l].size()) break;
      idx[l] = 0;
    }
  }
  return acc / std::pow(2 * kPi, static_cast<long double>(levels_));
}

// ---------------------------------------------------------------------------
// Toeplitz assembly

template <class Real>
ComplexMatrix<Real> toeplitz(const CoefficientProvider& provider, std::span<const long> n) {
  require_levels(n, provider.levels(), "toeplitz (provider level/block mismatch)");
  const int d = provider.levels();
  const Eigen::Index r = provider.block_size();
  const long total = multi_index_volume(n);

  // Coefficients for every difference i - j, each level in [-(n_l-1), n_l-1].
  std::vector<long> span_dims;
  for (long nl : n) span_dims.push_back(2 * nl - 1);
  const auto offsets = enumerate(span_dims);
  std::vector<ComplexMatrix<Real>> cache;
  cache.reserve(offsets.size());
  MultiIndex k(static_cast<std::size_t>(d));
  for (const auto& o : offsets) {
    for (int l = 0; l < d; ++l) k[std::size_t(l)] = o[std::size_t(l)] - (n[std::size_t(l)] - 1);
    Block c = provider.coeff(k);
    if (c.rows() != r || c.cols() != r)
      throw Error(Errc::size_mismatch, "toeplitz: provider returned a block of wrong size");
    cache.push_back(c.template cast<std::complex<Real>>());
  }

  const auto idx = enumerate(n);
  ComplexMatrix<Real> out(r * total, r * total);
  for (long i = 0; i < total; ++i) {
    for (long j = 0; j < total; ++j) {
      long lin = 0;
      for (int l = 0; l < d; ++l) {
        const long diff = idx[std::size_t(i)][std::size_t(l)] - idx[std::size_t(j)][std::size_t(l)];
        lin = lin * span_dims[std::size_t(l)] + diff + n[std::size_t(l)] - 1;
      }
      out.block(i * r, j * r, r, r) = cache[std::size_t(lin)];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weights

long double evaluate(const ScalarWeight& w, long double x) {
  return std::visit(
      [x](const auto& g) -> long double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConstantWeight>) {
          return g.value;
        } else if constexpr (std::is_same_v<T, AffineWeight>) {
          return g.offset + g.slope * x;
        } else if constexpr (std::is_same_v<T, StepWeight>) {
          return x < g.at ? g.below : g.above;
        } else {
          const auto& k = g.knots;
          if (k.empty()) return 0;
          if (x <= k.front().first) return k.front().second;
          if (x >= k.back().first) return k.back().second;
          auto hi = std::upper_bound(k.begin(), k.end(), x,
                                     [](long double v, const auto& kn) { return v < kn.first; });
          auto lo = hi - 1;
          const long double t = (x - lo->first) / (hi->first - lo->first);
          return lo->second + (hi->second - lo->second) * t;
        }
      },
      w);
}

std::string describe(const ScalarWeight& w) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConstantWeight>) {
          return number(g.value);
        } else if constexpr (std::is_same_v<T, AffineWeight>) {
          return number(g.offset) + " + " + number(g.slope) + "x";
        } else if constexpr (std::is_same_v<T, StepWeight>) {
          return "step(" + number(g.below) + " on [0," + number(g.at) + "), " + number(g.above) +
                 " on [" + number(g.at) + ",1])";
        } else {
          std::string s = "pwlinear{";
          for (const auto& [x, y] : g.knots) s += "(" + number(x) + "," + number(y) + ")";
          return s + "}";
        }
      },
      w);
}

WeightFunction::WeightFunction(std::vector<ScalarWeight> factors, Block block)
    : levels_(int(factors.size())),
      block_size_(int(block.rows())),
      separable_(true),
      factors_(std::move(factors)),
      block_(std::move(block)) {
  if (levels_ < 1) throw Error(Errc::invalid_argument, "weight function needs at least one level");
  if (block_.rows() < 1 || block_.rows() != block_.cols())
    throw Error(Errc::size_mismatch, "weight block must be square and non-empty");
  for (const auto& f : factors_) {
    if (auto* p = std::get_if<PiecewiseLinearWeight>(&f)) {
      for (std::size_t i = 1; i < p->knots.size(); ++i)
        if (!(p->knots[i].first > p->knots[i - 1].first))
          throw Error(Errc::invalid_argument, "piecewise-linear weight knots must increase");
    }
  }
}

WeightFunction::WeightFunction(int levels, int block_size, Function f)
    : levels_(levels), block_size_(block_size), separable_(false), f_(std::move(f)) {
  if (levels_ < 1 || block_size_ < 1)
    throw Error(Errc::invalid_argument, "weight function needs positive levels and block size");
}

Block WeightFunction::eval(std::span<const long double> x) const {
  if (long(x.size()) != levels_)
    throw Error(Errc::size_mismatch, "weight: wrong number of coordinates");
  if (!separable_) {
    Block b = f_(x);
    if (b.rows() != block_size_ || b.cols() != block_size_)
      throw Error(Errc::size_mismatch, "weight: function returned a block of wrong size");
    return b;
  }
  long double c = 1;
  for (std::size_t l = 0; l < factors_.size(); ++l) c *= evaluate(factors_[l], x[l]);
  return std::complex<long double>(c) * block_;
}

namespace {

template <class Real>
std::vector<ComplexMatrix<Real>> sampled_blocks(const WeightFunction& a, std::span<const long> n) {
  require_levels(n, a.levels(), "diag_sampling");
  const auto idx = enumerate(n);
  std::vector<ComplexMatrix<Real>> blocks;
  blocks.reserve(idx.size());
  std::vector<long double> x(n.size());
  for (const auto& i : idx) {
    for (std::size_t l = 0; l < n.size(); ++l)
      x[l] = static_cast<long double>(i[l] + 1) / static_cast<long double>(n[l]);
    Block b = a.eval(x);
    if (!b.allFinite()) throw Error(Errc::non_finite, "diag_sampling: weight is not finite");
    blocks.push_back(b.template cast<std::complex<Real>>());
  }
  return blocks;
}

}  // namespace

template <class Real>
ComplexMatrix<Real> diag_sampling(const WeightFunction& a, std::span<const long> n) {
  const auto blocks = sampled_blocks<Real>(a, n);
  const Eigen::Index r = a.block_size();
  const Eigen::Index total = Eigen::Index(blocks.size());
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(r * total, r * total);
  for (Eigen::Index i = 0; i < total; ++i) out.block(i * r, i * r, r, r) = blocks[std::size_t(i)];
  return out;
}

// ---------------------------------------------------------------------------
// Scale rules

template <class Real>
Real ScaleRule::at(long n) const {
  if (den == 0) throw Error(Errc::invalid_argument, "scale rule with zero denominator");
  Real p = 1;
  for (int i = 0; i < std::abs(exponent); ++i) p *= Real(n);
  if (exponent < 0) return Real(num) / (Real(den) * p);
  return Real(num) * p / Real(den);
}

long double ScaleRule::limit() const {
  if (exponent < 0) return 0;
  if (exponent == 0) return static_cast<long double>(num) / static_cast<long double>(den);
  throw Error(Errc::construction, "scale rule grows with n; no bounded limit");
}

template double ScaleRule::at<double>(long) const;
template long double ScaleRule::at<long double>(long) const;

// ---------------------------------------------------------------------------
// Sequence expressions

struct SequenceExpr::Node {
  Kind kind = Kind::identity;
  std::string label;
  bool hpd = false;
  int levels = 0;
  int block = 0;
  ProviderPtr provider;
  std::optional<WeightFunction> weight;
  std::vector<SequenceExpr> children;
  ScaleRule rule;
  long double exponent = 1;
};

const char* kind_name(SequenceExpr::Kind k) {
  switch (k) {
    case SequenceExpr::Kind::toeplitz: return "toeplitz";
    case SequenceExpr::Kind::diag_sampling: return "diag";
    case SequenceExpr::Kind::identity: return "identity";
    case SequenceExpr::Kind::sum: return "sum";
    case SequenceExpr::Kind::product: return "product";
    case SequenceExpr::Kind::scale: return "scale";
    case SequenceExpr::Kind::congruence: return "congruence";
    case SequenceExpr::Kind::power: return "power";
  }
  return "?";
}

namespace {

void require_compatible(const std::vector<SequenceExpr>& ops, const char* what) {
  if (ops.empty()) throw Error(Errc::construction, std::string(what) + " needs at least one operand");
  for (std::size_t i = 1; i < ops.size(); ++i) {
    if (ops[i].levels() != ops[0].levels())
      throw Error(Errc::construction, std::string(what) + ": operand " + std::to_string(i) +
                                          " has " + std::to_string(ops[i].levels()) +
                                          " levels, expected " + std::to_string(ops[0].levels()));
    if (ops[i].block_size() != ops[0].block_size())
      throw Error(Errc::construction,
                  std::string(what) + ": operand " + std::to_string(i) + " has block size " +
                      std::to_string(ops[i].block_size()) + ", expected " +
                      std::to_string(ops[0].block_size()));
  }
}

}  // namespace

SequenceExpr SequenceExpr::toeplitz(ProviderPtr provider) {
  if (!provider) throw Error(Errc::construction, "toeplitz: null provider");
  auto n = std::make_shared<Node>();
  n->kind = Kind::toeplitz;
  n->levels = provider->levels();
  n->block = provider->block_size();
  n->provider = std::move(provider);
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::diag(WeightFunction weight) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::diag_sampling;
  n->levels = weight.levels();
  n->block = weight.block_size();
  n->weight = std::move(weight);
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::identity(int levels, int block_size) {
  if (levels < 1 || block_size < 1)
    throw Error(Errc::construction, "identity: levels and block size must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::identity;
  n->levels = levels;
  n->block = block_size;
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::sum(std::vector<SequenceExpr> terms) {
  require_compatible(terms, "sum");
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->levels = terms[0].levels();
  n->block = terms[0].block_size();
  n->children = std::move(terms);
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::product(std::vector<SequenceExpr> factors) {
  require_compatible(factors, "product");
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->levels = factors[0].levels();
  n->block = factors[0].block_size();
  n->children = std::move(factors);
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::scale(ScaleRule rule, SequenceExpr operand) {
  if (rule.den == 0) throw Error(Errc::construction, "scale: zero denominator");
  auto n = std::make_shared<Node>();
  n->kind = Kind::scale;
  n->levels = operand.levels();
  n->block = operand.block_size();
  n->rule = rule;
  n->children = {std::move(operand)};
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::congruence(SequenceExpr inner, SequenceExpr outer) {
  std::vector<SequenceExpr> ops{std::move(inner), std::move(outer)};
  require_compatible(ops, "congruence");
  auto n = std::make_shared<Node>();
  n->kind = Kind::congruence;
  n->levels = ops[0].levels();
  n->block = ops[0].block_size();
  n->children = std::move(ops);
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::power(SequenceExpr operand, long double p) {
  if (!std::isfinite(static_cast<double>(p)))
    throw Error(Errc::construction, "power: exponent must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::power;
  n->levels = operand.levels();
  n->block = operand.block_size();
  n->exponent = p;
  n->children = {std::move(operand)};
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::with_label(std::string label) const {
  auto n = std::make_shared<Node>(*node_);
  n->label = std::move(label);
  return SequenceExpr(std::move(n));
}

SequenceExpr SequenceExpr::declared_hpd(bool hpd) const {
  auto n = std::make_shared<Node>(*node_);
  n->hpd = hpd;
  return SequenceExpr(std::move(n));
}

SequenceExpr::Kind SequenceExpr::kind() const { return node_->kind; }
const std::string& SequenceExpr::label() const { return node_->label; }
bool SequenceExpr::hpd_declared() const { return node_->hpd; }
int SequenceExpr::levels() const { return node_->levels; }
int SequenceExpr::block_size() const { return node_->block; }
const ProviderPtr& SequenceExpr::provider() const { return node_->provider; }

const WeightFunction& SequenceExpr::weight() const {
  if (!node_->weight) throw Error(Errc::construction, "expression node has no weight");
  return *node_->weight;
}

const std::vector<SequenceExpr>& SequenceExpr::children() const { return node_->children; }
const ScaleRule& SequenceExpr::rule() const { return node_->rule; }
long double SequenceExpr::exponent() const { return node_->exponent; }

void SequenceExpr::check() const {
  for (const auto& c : node_->children) c.check();
  switch (node_->kind) {
    case Kind::sum:
    case Kind::product:
    case Kind::congruence: require_compatible(node_->children, kind_name(node_->kind)); break;
    default: break;
  }
}

SequenceExpr operator+(const SequenceExpr& a, const SequenceExpr& b) {
  return SequenceExpr::sum({a, b});
}

SequenceExpr operator*(const SequenceExpr& a, const SequenceExpr& b) {
  return SequenceExpr::product({a, b});
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// Intermediate value: block diagonal (kept as blocks) or dense.
template <class Real>
struct Operand {
  using Mat = ComplexMatrix<Real>;
  bool diagonal = false;
  Eigen::Index r = 1;
  std::vector<Mat> blocks;
  Mat dense;

  Eigen::Index size() const { return diagonal ? r * Eigen::Index(blocks.size()) : dense.rows(); }

  Mat to_dense() const {
    if (!diagonal) return dense;
    Mat out = Mat::Zero(size(), size());
    for (std::size_t i = 0; i < blocks.size(); ++i)
      out.block(Eigen::Index(i) * r, Eigen::Index(i) * r, r, r) = blocks[i];
    return out;
  }
};

template <class Real>
Operand<Real> make_dense(ComplexMatrix<Real> m, Eigen::Index r) {
  Operand<Real> o;
  o.r = r;
  o.dense = std::move(m);
  return o;
}

template <class Real>
Operand<Real> add(Operand<Real> a, const Operand<Real>& b) {
  if (a.diagonal && b.diagonal) {
    for (std::size_t i = 0; i < a.blocks.size(); ++i) a.blocks[i] += b.blocks[i];
    return a;
  }
  if (b.diagonal) {
    for (std::size_t i = 0; i < b.blocks.size(); ++i)
      a.dense.block(Eigen::Index(i) * b.r, Eigen::Index(i) * b.r, b.r, b.r) += b.blocks[i];
    return a;
  }
  if (a.diagonal) return add(b, a);
  a.dense += b.dense;
  return a;
}

template <class Real>
Operand<Real> multiply(const Operand<Real>& a, const Operand<Real>& b) {
  const Eigen::Index r = a.r;
  if (a.diagonal && b.diagonal) {
    Operand<Real> o = a;
    for (std::size_t i = 0; i < o.blocks.size(); ++i) o.blocks[i] = a.blocks[i] * b.blocks[i];
    return o;
  }
  if (a.diagonal) {
    Operand<Real> o = b;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
      auto rows = o.dense.middleRows(Eigen::Index(i) * r, r);
      rows = (a.blocks[i] * rows).eval();
    }
    return o;
  }
  if (b.diagonal) {
    Operand<Real> o = a;
    for (std::size_t i = 0; i < b.blocks.size(); ++i) {
      auto cols = o.dense.middleCols(Eigen::Index(i) * r, r);
      cols = (cols * b.blocks[i]).eval();
    }
    return o;
  }
  return make_dense<Real>(a.dense * b.dense, r);
}

template <class Real>
Operand<Real> adjoint(Operand<Real> a) {
  if (a.diagonal) {
    for (auto& b : a.blocks) b = b.adjoint().eval();
  } else {
    a.dense = a.dense.adjoint().eval();
  }
  return a;
}

template <class Real>
Operand<Real> power(const Operand<Real>& a, Real p) {
  if (!a.diagonal) {
    return make_dense<Real>(matrix_power<Real>(BasicHermitianMatrix<Real>(a.dense), p).matrix(),
                            a.r);
  }
  // Block diagonal: one small eigenproblem per block, floor taken globally.
  std::vector<BasicEigDecomposition<Real>> parts;
  parts.reserve(a.blocks.size());
  Real lo = std::numeric_limits<Real>::infinity();
  Real scale = 0;
  for (const auto& b : a.blocks) {
    parts.push_back(hermitian_eig(BasicHermitianMatrix<Real>(b)));
    lo = std::min(lo, parts.back().eigenvalues.minCoeff());
    scale = std::max({scale, std::abs(parts.back().eigenvalues.minCoeff()),
                      std::abs(parts.back().eigenvalues.maxCoeff())});
  }
  const Real floor = Real(kHpdFloor) * scale;
  const bool negative = p < 0;
  const bool fractional = p != std::floor(p);
  if (negative && !(lo > floor))
    throw NotHpdError("power: block diagonal operand is not HPD", lo);
  if (fractional && lo < -floor)
    throw NotHpdError("power: block diagonal operand is not positive semidefinite", lo);
  Operand<Real> o = a;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    RealVector<Real> w = parts[i].eigenvalues;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      Real x = w(j);
      if (fractional && x < 0) x = 0;
      w(j) = (p == Real(0.5)) ? std::sqrt(x) : std::pow(x, p);
    }
    const auto& v = parts[i].eigenvectors;
    o.blocks[i] = v * w.template cast<std::complex<Real>>().asDiagonal() * v.adjoint();
  }
  return o;
}

template <class Real>
void certify_operand(const Operand<Real>& o, const std::string& name) {
  try {
    if (o.diagonal) {
      for (const auto& b : o.blocks) BasicHermitianMatrix<Real>(b).certify_hpd();
    } else {
      BasicHermitianMatrix<Real>(o.dense).certify_hpd();
    }
  } catch (const NotHpdError& e) {
    throw Error(Errc::construction, "node '" + name + "' is declared HPD but " + e.what());
  }
}

template <class Real>
Operand<Real> eval_node(const SequenceExpr& e, std::span<const long> n, const std::string& path) {
  const std::string name = e.label().empty() ? path : e.label();
  const Eigen::Index r = e.block_size();
  const long big_n = *std::max_element(n.begin(), n.end());
  Operand<Real> out;
  try {
    switch (e.kind()) {
      case SequenceExpr::Kind::toeplitz:
        out = make_dense<Real>(toeplitz<Real>(*e.provider(), n), r);
        break;
      case SequenceExpr::Kind::diag_sampling:
        out.diagonal = true;
        out.r = r;
        out.blocks = sampled_blocks<Real>(e.weight(), n);
        break;
      case SequenceExpr::Kind::identity:
        out.diagonal = true;
        out.r = r;
        out.blocks.assign(std::size_t(multi_index_volume(n)), ComplexMatrix<Real>::Identity(r, r));
        break;
      case SequenceExpr::Kind::sum: {
        const auto& c = e.children();
        out = eval_node<Real>(c[0], n, path + ".sum[0]");
        for (std::size_t i = 1; i < c.size(); ++i)
          out = add(std::move(out), eval_node<Real>(c[i], n, path + ".sum[" + std::to_string(i) + "]"));
        break;
      }
      case SequenceExpr::Kind::product: {
        const auto& c = e.children();
        out = eval_node<Real>(c[0], n, path + ".product[0]");
        for (std::size_t i = 1; i < c.size(); ++i)
          out = multiply(out, eval_node<Real>(c[i], n, path + ".product[" + std::to_string(i) + "]"));
        break;
      }
      case SequenceExpr::Kind::scale: {
        out = eval_node<Real>(e.children()[0], n, path + ".scale");
        const Real c = e.rule().template at<Real>(big_n);
        if (out.diagonal) {
          for (auto& b : out.blocks) b *= c;
        } else {
          out.dense *= c;
        }
        break;
      }
      case SequenceExpr::Kind::congruence: {
        const auto inner = eval_node<Real>(e.children()[0], n, path + ".congruence.inner");
        const auto outer = eval_node<Real>(e.children()[1], n, path + ".congruence.outer");
        out = multiply(multiply(outer, inner), adjoint(outer));
        break;
      }
      case SequenceExpr::Kind::power:
        out = power(eval_node<Real>(e.children()[0], n, path + ".power"), Real(e.exponent()));
        break;
    }
  } catch (const NotHpdError& err) {
    throw Error(Errc::construction, "node '" + name + "': " + err.what());
  }
  if (e.hpd_declared()) certify_operand(out, name);
  return out;
}

}  // namespace

template <class Real>
BasicHermitianMatrix<Real> evaluate_sequence(const SequenceExpr& expr, std::span<const long> n) {
  require_levels(n, expr.levels(), "evaluate_sequence");
  expr.check();
  auto op = eval_node<Real>(expr, n, "root");
  BasicHermitianMatrix<Real> m(op.to_dense());
  if (expr.hpd_declared()) m.certify_hpd();
  return m;
}

template ComplexMatrix<double> toeplitz<double>(const CoefficientProvider&, std::span<const long>);
template ComplexMatrix<long double> toeplitz<long double>(const CoefficientProvider&,
                                                          std::span<const long>);
template ComplexMatrix<double> diag_sampling<double>(const WeightFunction&, std::span<const long>);
template ComplexMatrix<long double> diag_sampling<long double>(const WeightFunction&,
                                                              std::span<const long>);
template BasicHermitianMatrix<double> evaluate_sequence<double>(const SequenceExpr&,
                                                                std::span<const long>);
template BasicHermitianMatrix<long double> evaluate_sequence<long double>(const SequenceExpr&,
                                                                          std::span<const long>);

}  // namespace gltmean
