#include "mvlsw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mvlsw/errors.hpp"

namespace mvlsw {

EmpiricalCoeffs empirical_coefficients(const MultichannelSeries& x, const QuadratureMirrorPair& filter,
                                       int levels) {
  const std::size_t n = x.length();
  check_levels(levels, n);
  const DiscreteWaveletSet wavelets = discrete_wavelets(filter, levels);

  EmpiricalCoeffs out;
  out.levels = levels;
  out.length = n;
  out.filter_label = filter.family_label;
  out.normalization = 1.0 / std::sqrt(static_cast<double>(n));
  for (int p = 0; p < x.channels(); ++p) {
    const std::vector<double> series = x.channel(p);
    const Eigen::MatrixXd full = nondecimated_transform(series, wavelets);
    out.values.push_back(full.topRows(levels) * out.normalization);
  }
  return out;
}

CrossScalePeriodogram raw_cross_periodogram(const EmpiricalCoeffs& d, int lag) {
  const std::size_t n = d.length;
  if (static_cast<std::size_t>(std::abs(lag)) >= n) throw ParameterError("|lag| must be smaller than T");
  const int levels = d.levels;
  const int chans = d.channels();
  const double scale = 1.0 / (d.normalization * d.normalization);
  const auto shift = static_cast<std::size_t>((static_cast<long long>(lag) % static_cast<long long>(n) +
                                               static_cast<long long>(n)) %
                                              static_cast<long long>(n));

  CrossScalePeriodogram out{SpectralTensor(levels, chans, n), lag, false, 0};
  for (int j = 1; j <= levels; ++j)
    for (int jp = 1; jp <= levels; ++jp)
      for (int p = 0; p < chans; ++p)
        for (int q = 0; q < chans; ++q) {
          double* dst = out.values.series(j, jp, p, q);
          for (std::size_t k = 0; k < n; ++k) {
            const std::size_t kp = (k + n - shift) % n;
            dst[k] = scale * (d(p, j, k) * d(q, jp, kp));
          }
        }
  return out;
}

CrossScalePeriodogram smooth_periodogram(const CrossScalePeriodogram& raw, int halfwidth) {
  const std::size_t n = raw.length();
  if (halfwidth < 0) throw ParameterError("smoothing half-width must be >= 0");
  if (static_cast<std::size_t>(2 * halfwidth + 1) > n)
    throw ParameterError("smoothing window 2M+1 = " + std::to_string(2 * halfwidth + 1) +
                         " longer than series (T = " + std::to_string(n) + ")");
  if (halfwidth == 0) {
    CrossScalePeriodogram out = raw;
    out.smoothed = true;
    return out;
  }
  const SpectralTensor& in = raw.values;
  CrossScalePeriodogram out{SpectralTensor(in.levels(), in.channels(), n), raw.lag, true, halfwidth};
  const double w = 1.0 / (2.0 * halfwidth + 1.0);
  const auto m = static_cast<std::size_t>(halfwidth);
  for (int j = 1; j <= in.levels(); ++j)
    for (int jp = 1; jp <= in.levels(); ++jp)
      for (int p = 0; p < in.channels(); ++p)
        for (int q = 0; q < in.channels(); ++q) {
          const double* src = in.series(j, jp, p, q);
          double* dst = out.values.series(j, jp, p, q);
          for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            std::size_t idx = (k + n - m % n) % n;
            for (std::size_t i = 0; i <= 2 * m; ++i) {
              acc += src[idx];
              if (++idx == n) idx = 0;
            }
            dst[k] = acc * w;
          }
        }
  return out;
}

CrossScaleSpectrum bias_correct(const CrossScalePeriodogram& smoothed, const InverseOperator& a_inv) {
  const SpectralTensor& in = smoothed.values;
  const int levels = in.levels();
  if (a_inv.levels != levels) throw ParameterError("inverse operator built for a different J");
  if (a_inv.lag != smoothed.lag) throw ParameterError("inverse operator built for a different lag");
  const int chans = in.channels();
  const std::size_t n = in.times();
  const Eigen::MatrixXd& m = a_inv.matrix;

  CrossScaleSpectrum out;
  out.values = SpectralTensor(levels, chans, n);
  out.u_grid = rescaled_grid(n);
  for (int j = 1; j <= levels; ++j)
    for (int jp = 1; jp <= levels; ++jp) {
      const Eigen::Index col = pair_index(j, jp, levels);
      for (int p = 0; p < chans; ++p)
        for (int q = 0; q < chans; ++q) {
          double* dst = out.values.series(j, jp, p, q);
          for (std::size_t k = 0; k < n; ++k) {
            // Summed over unordered {l, l'} so the (j,p) <-> (j',q) transpose
            // reproduces the same floating-point operations.
            double acc = 0.0;
            for (int l = 1; l <= levels; ++l) {
              acc += m(pair_index(l, l, levels), col) * in(l, l, p, q, k);
              for (int lp = l + 1; lp <= levels; ++lp) {
                const double a = m(pair_index(l, lp, levels), col) * in(l, lp, p, q, k);
                const double b = m(pair_index(lp, l, levels), col) * in(lp, l, p, q, k);
                acc += std::min(a, b) + std::max(a, b);
              }
            }
            dst[k] = acc;
          }
        }
    }
  return out;
}

CrossScaleSpectrum bias_correct(const CrossScalePeriodogram& smoothed, const AutocorrTable& table) {
  return bias_correct(smoothed, invert_inner_product(inner_product_operator(table, smoothed.lag)));
}

CrossScaleSpectrum estimate_spectrum(const MultichannelSeries& x, const QuadratureMirrorPair& filter,
                                     int levels, int halfwidth, int lag) {
  const EmpiricalCoeffs d = empirical_coefficients(x, filter, levels);
  const CrossScalePeriodogram smoothed = smooth_periodogram(raw_cross_periodogram(d, lag), halfwidth);
  const AutocorrTable table(discrete_wavelets(filter, levels));
  return bias_correct(smoothed, table);
}

SpectralTensor expected_periodogram(const CrossScaleSpectrum& spectrum, const InnerProductOperator& op) {
  const int levels = spectrum.levels();
  if (op.levels != levels) throw ParameterError("operator built for a different J");
  const int chans = spectrum.channels();
  const std::size_t n = spectrum.values.times();
  SpectralTensor out(levels, chans, n);
  for (int j = 1; j <= levels; ++j)
    for (int jp = 1; jp <= levels; ++jp)
      for (int p = 0; p < chans; ++p)
        for (int q = 0; q < chans; ++q)
          for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int l = 1; l <= levels; ++l)
              for (int lp = 1; lp <= levels; ++lp)
                acc += op.matrix(pair_index(l, lp, levels), pair_index(j, jp, levels)) *
                       spectrum(l, lp, p, q, k);
            out(j, jp, p, q, k) = acc;
          }
  return out;
}

SpectralTensor covariance_from_spectrum(const CrossScaleSpectrum& spectrum, const AutocorrTable& table,
                                        double u, int tau) {
  if (spectrum.u_grid.empty()) throw ParameterError("spectrum has an empty grid");
  if (table.levels() < spectrum.levels()) throw ParameterError("autocorrelation table has too few levels");
  std::size_t best = 0;
  for (std::size_t n = 1; n < spectrum.u_grid.size(); ++n)
    if (std::abs(spectrum.u_grid[n] - u) < std::abs(spectrum.u_grid[best] - u)) best = n;

  const int levels = spectrum.levels();
  const int chans = spectrum.channels();
  SpectralTensor out(levels, chans, 1);
  for (int j = 1; j <= levels; ++j)
    for (int jp = 1; jp <= levels; ++jp)
      for (int p = 0; p < chans; ++p)
        for (int q = 0; q < chans; ++q) out(j, jp, p, q, 0) = spectrum(j, jp, p, q, best) * table(j, jp, tau);
  return out;
}

Subprocesses decompose_channels(const MultichannelSeries& x, const QuadratureMirrorPair& filter, int levels) {
  check_levels(levels, x.length());
  const DiscreteWaveletSet wavelets = discrete_wavelets(filter, levels);
  const auto n = static_cast<Eigen::Index>(x.length());
  Subprocesses out(levels + 1, Eigen::MatrixXd(x.channels(), n));
  for (int p = 0; p < x.channels(); ++p) {
    const Eigen::MatrixXd parts = mra_decompose(x.channel(p), wavelets);
    for (int j = 0; j <= levels; ++j) out[j].row(p) = parts.row(j);
  }
  return out;
}

}  // namespace mvlsw
