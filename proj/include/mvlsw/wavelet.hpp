#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mvlsw {

/// Orthonormal two-channel filter bank. low_pass sums to sqrt(2), high_pass
/// is its quadrature mirror g_k = (-1)^k h_{L-1-k}.
struct QuadratureMirrorPair {
  std::vector<double> low_pass;
  std::vector<double> high_pass;
  int vanishing_moments = 0;
  std::string family_label;

  std::size_t length() const { return low_pass.size(); }
};

/// Daubechies extremal-phase filter with the given number of vanishing
/// moments (1 = Haar), built by spectral factorization of the Daubechies
/// polynomial keeping the zeros inside the unit circle. Supported orders
/// are 1..10; anything else throws ParameterError.
QuadratureMirrorPair build_daubechies_filter(int vanishing_moments);

/// Discrete non-decimated wavelets psi_1..psi_J and the level-J scaling
/// sequence phi_J, each sampled on its support starting at index 0.
///
/// psi_{j,k}(t) = psi_j(t - k): shifts are by single samples.
struct DiscreteWaveletSet {
  int levels = 0;
  std::vector<std::vector<double>> vectors;  // vectors[j-1] = psi_j
  std::vector<double> scaling;               // phi_J
  std::string family_label;

  const std::vector<double>& wavelet(int j) const { return vectors.at(j - 1); }
  std::size_t support_length(int j) const { return wavelet(j).size(); }
};

/// Cascade construction: psi_1 = g, phi_1 = h,
/// psi_{j+1}[n] = sum_k g_k phi_j[n - 2^j k], phi_{j+1}[n] = sum_k h_k phi_j[n - 2^j k].
DiscreteWaveletSet discrete_wavelets(const QuadratureMirrorPair& filter, int levels);

/// Throws ParameterError unless 1 <= levels and 2^levels <= length.
void check_levels(int levels, std::size_t length);

/// Non-decimated transform with periodic boundary. Row j-1 (j = 1..J) holds
/// d_{j,k} = sum_t x_t psi_j(t - k) for k = 0..T-1 (circular correlation with
/// unit-norm psi_j, no 1/sqrt(T) factor); row J holds the smooth
/// coefficients s_{J,k} computed with phi_J.
///
/// Energy identity under this normalization:
///   sum_j 2^{-j} sum_k d_{j,k}^2 + 2^{-J} sum_k s_{J,k}^2 = sum_t x_t^2.
Eigen::MatrixXd nondecimated_transform(std::span<const double> x,
                                       const DiscreteWaveletSet& wavelets);

/// Convenience overload building the wavelets from the filter.
Eigen::MatrixXd nondecimated_transform(std::span<const double> x,
                                       const QuadratureMirrorPair& filter, int levels);

/// Weighted coefficient energy matching the identity above.
double transform_energy(const Eigen::MatrixXd& coefficients);

/// Multiresolution analysis: rows 0..J-1 are the details D_1..D_J, row J is
/// the smooth S_J. The rows sum to x exactly up to rounding.
Eigen::MatrixXd mra_decompose(std::span<const double> x, const DiscreteWaveletSet& wavelets);

Eigen::MatrixXd mra_decompose(std::span<const double> x, const QuadratureMirrorPair& filter,
                              int levels);

namespace detail {
// out[k] = sum_n kernel[n] * x[(k + n) mod T]
void circular_correlate(std::span<const double> x, std::span<const double> kernel,
                        std::span<double> out);
// out[t] = sum_n kernel[n] * x[(t - n) mod T]
void circular_convolve(std::span<const double> x, std::span<const double> kernel,
                       std::span<double> out);
}  // namespace detail

}  // namespace mvlsw
