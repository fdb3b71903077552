#pragma once

#include <cstddef>
#include <vector>

namespace mvlsw {

/// Dense tensor indexed (j, j', p, q, n): scales 1..J, channels 0..P-1,
/// time index 0..N-1. Time is the fastest-varying index.
class SpectralTensor {
 public:
  SpectralTensor() = default;
  SpectralTensor(int levels, int channels, std::size_t times)
      : levels_(levels),
        channels_(channels),
        times_(times),
        data_(static_cast<std::size_t>(levels) * levels * channels * channels * times, 0.0) {}

  int levels() const { return levels_; }
  int channels() const { return channels_; }
  std::size_t times() const { return times_; }

  double& operator()(int j, int jp, int p, int q, std::size_t n) { return data_[index(j, jp, p, q) + n]; }
  double operator()(int j, int jp, int p, int q, std::size_t n) const {
    return data_[index(j, jp, p, q) + n];
  }
  double* series(int j, int jp, int p, int q) { return data_.data() + index(j, jp, p, q); }
  const double* series(int j, int jp, int p, int q) const { return data_.data() + index(j, jp, p, q); }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t index(int j, int jp, int p, int q) const {
    return ((((static_cast<std::size_t>(j - 1) * levels_ + (jp - 1)) * channels_ + p) * channels_ + q) *
            times_);
  }

  int levels_ = 0;
  int channels_ = 0;
  std::size_t times_ = 0;
  std::vector<double> data_;
};

/// S_{jj'}^{(p,q)}(u) on a grid of rescaled times, either the truth implied by
/// a process specification or an estimate.
struct CrossScaleSpectrum {
  SpectralTensor values;
  std::vector<double> u_grid;

  int levels() const { return values.levels(); }
  int channels() const { return values.channels(); }
  double operator()(int j, int jp, int p, int q, std::size_t n) const { return values(j, jp, p, q, n); }
};

/// u = k / T for k = 0..T-1.
inline std::vector<double> rescaled_grid(std::size_t length) {
  std::vector<double> u(length);
  for (std::size_t k = 0; k < length; ++k) u[k] = static_cast<double>(k) / static_cast<double>(length);
  return u;
}

}  // namespace mvlsw
