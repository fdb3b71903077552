#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvlsw/inner_product.hpp"
#include "mvlsw/series.hpp"
#include "mvlsw/spectrum.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

/// d_{j,k}^{(p)} = T^{-1/2} sum_t X_t^{(p)} psi_j(t - k), periodic boundary.
struct EmpiricalCoeffs {
  std::vector<Eigen::MatrixXd> values;  // values[p] is J x T, row j-1
  int levels = 0;
  std::size_t length = 0;
  std::string filter_label;
  /// Factor applied to the unit-norm transform (T^{-1/2}).
  double normalization = 1.0;

  int channels() const { return static_cast<int>(values.size()); }
  double operator()(int p, int j, std::size_t k) const {
    return values[static_cast<std::size_t>(p)](j - 1, static_cast<Eigen::Index>(k));
  }
};

EmpiricalCoeffs empirical_coefficients(const MultichannelSeries& x, const QuadratureMirrorPair& filter,
                                       int levels);

/// I_{jj',k}^{(p,q)} at a fixed coefficient lag delta = k - k'. When `smoothed`
/// the values are rectangular-window averages of half-width `halfwidth`.
struct CrossScalePeriodogram {
  SpectralTensor values;
  int lag = 0;
  bool smoothed = false;
  int halfwidth = 0;
  std::size_t length() const { return values.times(); }
};

/// values(j, j', p, q, k) = d_{j,k}^{(p)} d_{j',k-delta}^{(q)} with circular wrap.
/// The T^{-1/2} normalization of the coefficients is undone here, so the
/// periodogram is on the scale where E[I] = sum A S holds.
CrossScalePeriodogram raw_cross_periodogram(const EmpiricalCoeffs& d, int lag);

/// Rectangular smoother over 2M+1 consecutive k, both coefficient indices
/// shifted together; circular wrap at the ends. Requires 2M+1 <= T.
CrossScalePeriodogram smooth_periodogram(const CrossScalePeriodogram& raw, int halfwidth);

/// S^_{jj'}(k/T) = sum_{l,l'} (A^delta)^{-1}_{ll';jj'} I~_{ll'}(k) for every (p, q, k).
CrossScaleSpectrum bias_correct(const CrossScalePeriodogram& smoothed, const InverseOperator& a_inv);

/// Builds and inverts A^delta for the periodogram's lag; propagates
/// SingularOperatorError.
CrossScaleSpectrum bias_correct(const CrossScalePeriodogram& smoothed, const AutocorrTable& table);

/// Whole estimator: coefficients, raw periodogram at `lag`, smoothing with
/// half-width M, bias correction.
CrossScaleSpectrum estimate_spectrum(const MultichannelSeries& x, const QuadratureMirrorPair& filter,
                                     int levels, int halfwidth, int lag = 0);

/// Asymptotic periodogram expectation sum_{l,l'} A^delta_{ll';jj'} S_{ll'}(u) at
/// every point of the spectrum's grid.
SpectralTensor expected_periodogram(const CrossScaleSpectrum& spectrum, const InnerProductOperator& op);

/// c_{jj'}^{(p,q)}(u, tau) = S_{jj'}^{(p,q)}(u) Psi_{jj'}(tau) for all (j, j', p, q)
/// at the grid point nearest u. Returned tensor has a single time index.
SpectralTensor covariance_from_spectrum(const CrossScaleSpectrum& spectrum, const AutocorrTable& table,
                                        double u, int tau);

/// Per-channel MRA: entries 0..J-1 are details, entry J the smooth.
Subprocesses decompose_channels(const MultichannelSeries& x, const QuadratureMirrorPair& filter, int levels);

}  // namespace mvlsw
