#include "mvlsw/ar2.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mvlsw/errors.hpp"
#include "mvlsw/random.hpp"

namespace mvlsw {

double Ar2LatentSpec::phi1() const {
  return 2.0 * std::cos(2.0 * std::numbers::pi * frequency) / modulus;
}

double Ar2LatentSpec::phi2() const { return -1.0 / (modulus * modulus); }

void Ar2LatentSpec::validate() const {
  if (!(modulus > 1.0)) throw ParameterError("AR(2) modulus must exceed 1");
  if (!(frequency > 0.0 && frequency < 0.5)) throw ParameterError("AR(2) frequency must be in (0, 0.5)");
  if (!(noise_sd >= 0.0)) throw ParameterError("AR(2) noise_sd must be non-negative");
}

std::vector<double> simulate_ar2(const Ar2LatentSpec& spec, std::size_t length, std::uint64_t seed) {
  spec.validate();
  const double a1 = spec.phi1();
  const double a2 = spec.phi2();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> out(length);
  double z1 = 0.0, z2 = 0.0;  // Z(t-1), Z(t-2)
  for (std::size_t t = 0; t < kAr2BurnIn + length; ++t) {
    const double z = a1 * z1 + a2 * z2 + spec.noise_sd * normal(rng);
    z2 = z1;
    z1 = z;
    if (t >= kAr2BurnIn) out[t - kAr2BurnIn] = z;
  }
  return out;
}

MultichannelSeries mix_timevarying(const std::vector<std::vector<double>>& latents,
                                   const MixingSchedule& schedule, double sampling_rate) {
  if (latents.empty()) throw ConfigurationError("no latent series to mix");
  const std::size_t n = latents.front().size();
  for (const auto& z : latents)
    if (z.size() != n) throw ConfigurationError("latent series have unequal lengths");
  if (schedule.empty()) throw ConfigurationError("mixing schedule has no channels");

  MultichannelSeries out;
  out.sampling_rate = sampling_rate;
  out.data = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(schedule.size()), static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < schedule.size(); ++p) {
    const auto& segs = schedule[p];
    if (segs.empty() || segs.front().start != 0)
      throw ConfigurationError("mixing schedule for channel " + std::to_string(p + 1) + " must start at 0");
    for (std::size_t s = 0; s < segs.size(); ++s) {
      if (segs[s].weights.size() != latents.size())
        throw ConfigurationError("mixing weights do not match the number of latents");
      if (segs[s].start >= n && n > 0)
        throw ConfigurationError("mixing breakpoint beyond series length");
      if (s > 0 && segs[s].start <= segs[s - 1].start)
        throw ConfigurationError("mixing breakpoints must be increasing");
    }
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const std::size_t end = s + 1 < segs.size() ? segs[s + 1].start : n;
      for (std::size_t t = segs[s].start; t < end; ++t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < latents.size(); ++i) acc += segs[s].weights[i] * latents[i][t];
        out.data(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(t)) = acc;
      }
    }
  }
  return out;
}

TrivariateDesign trivariate_design() {
  TrivariateDesign d;
  d.latents = {{1.05, 0.375, 1.0}, {1.01, 0.19, 1.0}, {1.05, 0.09, 1.0}};
  const std::size_t half = 500;
  d.schedule = {
      {{0, {0.5, 0.0, 0.5}}},
      {{0, {0.9, 0.1, 0.0}}, {half, {0.1, 0.9, 0.0}}},
      {{0, {0.1, 0.0, 0.9}}, {half, {0.9, 0.0, 0.1}}},
  };
  return d;
}

MultichannelSeries simulate_mixture(const std::vector<Ar2LatentSpec>& latents,
                                    const MixingSchedule& schedule, std::size_t length,
                                    double sampling_rate, std::uint64_t seed) {
  std::vector<std::vector<double>> z;
  z.reserve(latents.size());
  for (std::size_t i = 0; i < latents.size(); ++i) z.push_back(simulate_ar2(latents[i], length, derive_seed(seed, i)));
  return mix_timevarying(z, schedule, sampling_rate);
}

}  // namespace mvlsw
