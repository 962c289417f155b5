// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include "gltmean/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gltmean {

template <class Real>
SpectrumSample spectrum_of(const BasicHermitianMatrix<Real>& m, long n, std::string experiment_id) {
  const RealVector<Real> w = hermitian_eigenvalues(m);
  SpectrumSample s;
  s.values.resize(std::size_t(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) s.values[std::size_t(i)] = double(w(i));
  std::sort(s.values.begin(), s.values.end());
  s.n = n;
  s.d_n = long(w.size());
  s.experiment_id = std::move(experiment_id);
  return s;
}

template SpectrumSample spectrum_of<double>(const BasicHermitianMatrix<double>&, long, std::string);
template SpectrumSample spectrum_of<long double>(const BasicHermitianMatrix<long double>&, long,
                                                 std::string);

SpectrumSample make_spectrum(std::vector<double> values, long n, std::string experiment_id) {
  for (double v : values)
    if (!std::isfinite(v)) throw Error(Errc::non_finite, "spectrum contains a non-finite value");
  std::sort(values.begin(), values.end());
  SpectrumSample s;
  s.d_n = long(values.size());
  s.values = std::move(values);
  s.n = n;
  s.experiment_id = std::move(experiment_id);
  return s;
}

QuantileDistance quantile_distance(const SpectrumSample& s, const QuantileCurve& q) {
  if (s.values.empty() || q.values.empty())
    throw Error(Errc::invalid_argument, "quantile_distance: empty input");
  const long dn = long(s.values.size());
  const long m = long(q.values.size());
  QuantileDistance out;
  double total = 0;
  for (long i = 1; i <= dn; ++i) {
    // Curve node j (0-based) sits at (j + 1/2)/m; t_i = (i - 1/2)/dn maps to
    // position ((2i - 1) m - dn) / (2 dn).
    const long num = (2 * i - 1) * m - dn;
    const long den = 2 * dn;
    double value;
    if (num <= 0) {
      value = q.values.front();
    } else if (num >= (m - 1) * den) {
      value = q.values.back();
    } else {
      const long j = num / den;
      const long rem = num % den;
      value = rem == 0 ? q.values[std::size_t(j)]
                       : q.values[std::size_t(j)] + (q.values[std::size_t(j + 1)] -
                                                     q.values[std::size_t(j)]) *
                                                        (double(rem) / double(den));
    }
    const double diff = std::abs(s.values[std::size_t(i - 1)] - value);
    out.sup_dist = std::max(out.sup_dist, diff);
    total += diff;
  }
  out.mean_abs_dist = total / double(dn);
  return out;
}

ExtremalStats extremal_stats(const SpectrumSample& s) {
  if (s.values.empty()) throw Error(Errc::invalid_argument, "extremal_stats: empty spectrum");
  ExtremalStats e;
  e.lambda_min = s.values.front();
  e.lambda_max = s.values.back();
  if (!(e.lambda_min > 0)) {
    std::ostringstream os;
    os << "extremal_stats: lambda_min = " << e.lambda_min << " is not positive";
    throw NotHpdError(os.str(), e.lambda_min);
  }
  e.cond2 = e.lambda_max / e.lambda_min;
  return e;
}

std::vector<double> decay_exponents(const std::vector<double>& tau) {
  for (double t : tau)
    if (!(t > 0)) throw Error(Errc::invalid_argument, "decay_exponents: entries must be positive");
  std::vector<double> alpha;
  for (std::size_t j = 0; j + 1 < tau.size(); ++j) alpha.push_back(std::log2(tau[j] / tau[j + 1]));
  return alpha;
}

double zero_fraction(const SpectrumSample& s, double threshold) {
  if (threshold < 0) throw Error(Errc::invalid_argument, "zero_fraction: threshold must be >= 0");
  if (s.values.empty()) return 0;
  const auto count = std::count_if(s.values.begin(), s.values.end(),
                                   [threshold](double v) { return v <= threshold; });
  return double(count) / double(s.values.size());
}

std::vector<SchattenPoint> zero_distribution_diagnostic(const std::vector<SpectrumSample>& series,
                                                        double p) {
  if (series.empty()) throw Error(Errc::invalid_argument, "zero_distribution_diagnostic: empty series");
  std::vector<SchattenPoint> out;
  for (const auto& s : series) {
    const double norm = schatten_norm_of_eigenvalues(s.values, p);
    const double dn = double(s.values.size());
    const double scale = std::isinf(p) ? 1.0 : std::pow(dn, 1.0 / p);
    out.push_back({s.n, norm / scale});
  }
  return out;
}

}  // namespace gltmean
