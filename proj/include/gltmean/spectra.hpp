// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

// Sorted spectra and the statistics computed from them.

#pragma once

#include <string>
#include <vector>

#include "gltmean/matfun.hpp"
#include "gltmean/symbol.hpp"

namespace gltmean {

struct SpectrumSample {
  std::vector<double> values;  // ascending
  long n = 0;
  long d_n = 0;
  std::string experiment_id;
};

template <class Real>
SpectrumSample spectrum_of(const BasicHermitianMatrix<Real>& m, long n = 0,
                           std::string experiment_id = {});

/// Wraps an existing eigenvalue list; sorts it.
SpectrumSample make_spectrum(std::vector<double> values, long n = 0, std::string experiment_id = {});

struct QuantileDistance {
  double sup_dist = 0;
  double mean_abs_dist = 0;
};

/// Compares sorted eigenvalues with the curve interpolated at t_i = (i - 1/2)/d_n.
/// Interpolation positions are computed in integer arithmetic, so equal-length
/// inputs line up exactly.
QuantileDistance quantile_distance(const SpectrumSample& s, const QuantileCurve& q);

struct ExtremalStats {
  double lambda_min = 0;
  double lambda_max = 0;
  double cond2 = 0;
};

/// Throws Errc::not_hpd when lambda_min <= 0.
ExtremalStats extremal_stats(const SpectrumSample& s);

/// alpha_j = log2(tau_j / tau_{j+1}).
std::vector<double> decay_exponents(const std::vector<double>& tau);

/// count(values <= threshold) / d_n.
double zero_fraction(const SpectrumSample& s, double threshold);

struct SchattenPoint {
  long n = 0;
  double value = 0;  // ||A_n||_p / d_n^{1/p}
};

std::vector<SchattenPoint> zero_distribution_diagnostic(const std::vector<SpectrumSample>& series,
                                                        double p);

}  // namespace gltmean
