#pragma once

#include <vector>

#include "mvlsw/coherence_surface.hpp"
#include "mvlsw/series.hpp"
#include "mvlsw/spectrum.hpp"

namespace mvlsw {

/// Relative floor on the estimated diagonal spectra below which coherence
/// is undefined.
inline constexpr double kCoherenceFloor = 1e-12;

/// rho^_{jj'}^{(p,q)}(k/T) = S^_{jj'}^{(p,q)} / sqrt(S^_jj^{(p,p)} S^_j'j'^{(q,q)}) for every
/// (j, j', p, q), clamped to [-1, 1]. A diagonal at or below
/// kCoherenceFloor * (largest diagonal) gives an undefined point; negative
/// diagonals are counted in negative_diagonals.
CoherenceSurface coherence_estimate(const CrossScaleSpectrum& spectrum, int lag = 0);

/// Default moving-window geometry in samples.
inline constexpr int kDefaultWindow = 50;
inline constexpr int kDefaultStep = 10;

/// Moving-window Pearson correlation of X_j^{(p)}(t) and X_j'^{(q)}(t + lag).
/// Windows start at max(0, -lag) and advance by `step` while both windows fit
/// inside the series (no wrap). Time is the window center in samples.
/// Zero-variance windows are undefined.
CoherenceSurface windowed_coherence(const Subprocesses& subprocesses, const std::vector<CoherencePair>& pairs,
                                    int window = kDefaultWindow, int step = kDefaultStep, int lag = 0);

/// A conditioning variable for partial coherence: subprocess `ref` at
/// time t + lag.
struct ControlRef {
  SubprocessRef ref;
  int lag = 0;
};

/// Gaussian partial correlation of the pair given the controls within each
/// window, from the inverse of the window's correlation matrix:
///   -P_ab / sqrt(P_aa P_bb).
/// A singular window system gives an undefined point. With no controls this
/// is exactly windowed_coherence.
CoherenceSurface partial_windowed_coherence(const Subprocesses& subprocesses,
                                            const std::vector<CoherencePair>& pairs,
                                            const std::vector<ControlRef>& controls,
                                            int window = kDefaultWindow, int step = kDefaultStep,
                                            int lag = 0);

/// Window start indices used by the windowed estimators.
std::vector<std::size_t> window_starts(std::size_t length, int window, int step, int max_forward_lag,
                                       int max_backward_lag);

}  // namespace mvlsw
