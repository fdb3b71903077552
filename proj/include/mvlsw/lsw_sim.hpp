#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mvlsw/coherence_surface.hpp"
#include "mvlsw/series.hpp"
#include "mvlsw/spectrum.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

/// V_j(u) for level j (1..J, and J+1 for the optional smooth level).
using TransferFunction = std::function<Eigen::MatrixXd(int level, double u)>;

/// Stacked innovation covariance at rescaled time u: an (L*P) x (L*P)
/// matrix whose (j, j') block of size P x P is Q_{jj'}(u), L = number of
/// process levels.
using InnovationFunction = std::function<Eigen::MatrixXd(double u)>;

/// Multivariate locally stationary wavelet process with cross-scale
/// dependent innovations, truncated at J levels:
///   X_t = sum_{j<=J} sum_k V_j(k/T) psi_j(t - k) z_{j,k},  cov(z_{j,k}, z_{j',k}) = Q_{jj'}(k/T).
///
/// Invariants checked by validate_at(): V_j lower-triangular, Q_jj = I,
/// |Q_{jj'}^{(p,q)}| <= 1, stacked covariance symmetric positive semi-definite.
struct MvLswSpec {
  int channels = 1;
  int levels = 1;
  /// Adds a father-wavelet level (index J+1, built from phi_J) so the
  /// subprocesses form a complete multiresolution split.
  bool include_smooth = false;
  QuadratureMirrorPair filter;
  TransferFunction transfer;
  /// Empty means uncorrelated scales (identity).
  InnovationFunction innovation;

  int process_levels() const { return levels + (include_smooth ? 1 : 0); }
  Eigen::MatrixXd transfer_at(int level, double u) const;
  Eigen::MatrixXd stacked_innovation(double u) const;
  Eigen::MatrixXd innovation_block(int j, int jprime, double u) const;

  /// Throws SpecificationError naming u on the first violated invariant.
  void validate_at(double u) const;
};

/// Q_{jj'} block supplied for j < j'; the (j', j) block is its transpose.
struct InnovationBlock {
  int j = 1;
  int jprime = 2;
  Eigen::MatrixXd matrix;
};

/// Identity diagonal blocks plus the given cross-scale blocks.
Eigen::MatrixXd stack_innovation(int process_levels, int channels,
                                 const std::vector<InnovationBlock>& blocks);

/// Piecewise-constant V and Q in rescaled time. Segment i covers
/// [start_i, start_{i+1}); the first start must be 0.
struct PiecewiseSegment {
  double start = 0.0;
  std::vector<Eigen::MatrixXd> transfer;  // one per process level
  std::vector<InnovationBlock> innovation;
};

MvLswSpec piecewise_spec(int channels, int levels, bool include_smooth,
                         const QuadratureMirrorPair& filter,
                         std::vector<PiecewiseSegment> segments);

/// H0 spec: V_j = I for every level, uncorrelated scales.
MvLswSpec independent_spec(int channels, int levels, const QuadratureMirrorPair& filter);

struct Realization {
  MultichannelSeries series;
  Subprocesses subprocesses;               // X_{j,t}, P x T per level
  std::vector<Eigen::MatrixXd> innovations;  // z_{j,k}, P x T per level
  std::uint64_t seed = 0;
};

/// Draws one realization of length T. Innovations at each k are a zero-mean
/// Gaussian vector over all (level, channel) pairs with the stacked
/// covariance, factored by a symmetric eigendecomposition (semi-definite
/// covariances allowed). Shifts wrap periodically. Deterministic in seed.
Realization simulate_mvlsw(const MvLswSpec& spec, std::size_t length, std::uint64_t seed,
                           double sampling_rate = 1.0);

/// S_{jj'}(u) = V_j(u) Q_{jj'}(u) V_{j'}(u)' on the given grid, for all
/// process levels.
CrossScaleSpectrum true_cross_spectrum(const MvLswSpec& spec, const std::vector<double>& u_grid);

/// Signed coherence S_{jj'}^{(p,q)} / sqrt(S_jj^{(p,p)} S_j'j'^{(q,q)}) for all
/// (j, j', p, q), clamped to [-1, 1]. Non-positive diagonal spectra give an
/// undefined point. The surface time grid is the rescaled grid u.
CoherenceSurface true_coherence(const CrossScaleSpectrum& spectrum);

}  // namespace mvlsw
