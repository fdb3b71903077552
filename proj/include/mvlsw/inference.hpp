#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mvlsw/coherence.hpp"
#include "mvlsw/coherence_surface.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

/// H0 simulation setup. Each replicate is an MvLSW draw with V_j = I and
/// uncorrelated scales, split by MRA into subprocesses, then passed through
/// the windowed (or partial, when controls are given) estimator.
struct NullConfig {
  int levels = 4;
  std::size_t length = 1000;
  int channels = 1;
  int window = kDefaultWindow;
  int step = kDefaultStep;
  int lag = 0;
  int n_sim = 2000;
  std::uint64_t seed = 0;
  QuadratureMirrorPair filter;
  /// Pairs whose values are pooled; empty means every distinct pair of
  /// detail subprocesses.
  std::vector<CoherencePair> pairs;
  std::vector<ControlRef> controls;
  std::vector<double> levels_requested{0.95, 0.99, 0.999};
};

/// Pooled |rho| draws under H0 (pointwise across time, replicates and the
/// configured pairs), sorted ascending.
struct NullDistribution {
  std::vector<double> samples;
  std::map<double, double> quantiles;  // level -> |rho| threshold
  NullConfig meta;

  /// Type-7 (linear interpolation) empirical quantile of |rho|.
  double quantile(double level) const;
  /// Threshold for squared coherence: the |rho| threshold squared.
  double squared_threshold(double level) const { return quantile(level) * quantile(level); }
};

/// Every distinct unordered pair of detail subprocesses, (j,p) < (j',q).
std::vector<CoherencePair> all_distinct_pairs(int levels, int channels);

NullDistribution null_distribution(const NullConfig& config);

/// Pooled |rho| values of one H0 replicate, in pair-then-time order.
std::vector<double> null_replicate(const NullConfig& config, std::uint64_t replicate_seed);

using SignificanceMask = std::map<CoherencePair, std::vector<bool>>;

/// True where |rho| exceeds the threshold at `level`; undefined points are
/// false. Throws ConfigurationError when the surface was produced with a
/// different window, step or lag than the null.
SignificanceMask significance_mask(const CoherenceSurface& surface, const NullDistribution& dist,
                                   double level);

/// Pointwise median over subjects ignoring undefined points; a point is
/// undefined when every input is.
CoherenceCurve median_curve(const std::vector<CoherenceSurface>& group, const CoherencePair& pair);

struct PermutationResult {
  double t_observed = 0.0;
  std::vector<double> t_permuted;
  double p_value = 1.0;
  int n_perm = 0;
  std::uint64_t seed = 0;
  std::size_t skipped_points = 0;  // undefined in either observed median
};

/// T = sum_t (med_A(t) - med_B(t))^2 over points defined in both medians.
double median_contrast(const CoherenceCurve& a, const CoherenceCurve& b, std::size_t* skipped = nullptr);

/// Two-group permutation test of T with group sizes preserved and the
/// add-one p-value. The pooled subjects are put in a canonical order first,
/// so swapping the two groups gives the same p-value.
PermutationResult permutation_test(const std::vector<CoherenceSurface>& group_a,
                                   const std::vector<CoherenceSurface>& group_b, const CoherencePair& pair,
                                   int n_perm, std::uint64_t seed);

}  // namespace mvlsw
