#pragma once

#include <cstdint>
#include <vector>

#include "mvlsw/series.hpp"

namespace mvlsw {

/// Latent AR(2) with a spectral peak at `frequency` (cycles/sample):
///   phi1 = 2 cos(2 pi eta) / M,  phi2 = -1 / M^2,  M > 1.
/// Roots of the characteristic polynomial have modulus M, so the process is
/// causal; M close to 1 gives a sharp peak.
struct Ar2LatentSpec {
  double modulus = 1.05;
  double frequency = 0.25;
  double noise_sd = 1.0;

  double phi1() const;
  double phi2() const;
  void validate() const;
};

/// Samples discarded before the returned series starts.
inline constexpr std::size_t kAr2BurnIn = 500;

/// Zero initial state, iid N(0, noise_sd^2) innovations, burn-in discarded.
std::vector<double> simulate_ar2(const Ar2LatentSpec& spec, std::size_t length, std::uint64_t seed);

/// Channel weights from `start` (sample index) until the next segment.
struct MixingSegment {
  std::size_t start = 0;
  std::vector<double> weights;  // one per latent
};

/// schedule[p] is the segment list for output channel p; segments must start
/// at 0 and be increasing.
using MixingSchedule = std::vector<std::vector<MixingSegment>>;

/// X^(p)_t = sum_i w_{p,i}(t) Z_i(t) with piecewise-constant weights.
MultichannelSeries mix_timevarying(const std::vector<std::vector<double>>& latents,
                                   const MixingSchedule& schedule, double sampling_rate = 1.0);

/// The tri-variate benchmark: three AR(2) latents peaking at 37.5, 19 and
/// 9 Hz (100 Hz sampling, 10 s), mixed with a switch at 5 s.
struct TrivariateDesign {
  std::vector<Ar2LatentSpec> latents;
  MixingSchedule schedule;
  double sampling_rate = 100.0;
  std::size_t length = 1000;
};

TrivariateDesign trivariate_design();

/// Simulates every latent with seeds derived from `seed`, then mixes.
MultichannelSeries simulate_mixture(const std::vector<Ar2LatentSpec>& latents,
                                    const MixingSchedule& schedule, std::size_t length,
                                    double sampling_rate, std::uint64_t seed);

}  // namespace mvlsw
