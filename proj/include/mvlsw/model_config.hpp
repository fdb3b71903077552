#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvlsw/ar2.hpp"
#include "mvlsw/coherence_surface.hpp"
#include "mvlsw/lsw_sim.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

/// Wavelet choice as written in configs and on the command line:
/// "haar", "db<N>", or {"family": "daubechies", "vanishing_moments": N}.
struct WaveletChoice {
  int vanishing_moments = 2;

  QuadratureMirrorPair filter() const { return build_daubechies_filter(vanishing_moments); }
  std::string name() const { return vanishing_moments == 1 ? "haar" : "db" + std::to_string(vanishing_moments); }
};

WaveletChoice parse_wavelet(const std::string& text);
WaveletChoice parse_wavelet(const nlohmann::json& j);

/// A process to simulate. `model` is "mvlsw" or "ar2_mixture".
struct ModelConfig {
  std::string model;
  std::size_t length = 0;
  double sampling_rate = 1.0;

  // mvlsw
  MvLswSpec spec;
  WaveletChoice wavelet;

  // ar2_mixture
  std::vector<Ar2LatentSpec> latents;
  MixingSchedule schedule;

  nlohmann::json source;
};

/// Throws ConfigurationError naming the offending key.
ModelConfig parse_model_config(const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

/// Simulated observations (and, for mvlsw, the true subprocesses).
struct SimulatedData {
  MultichannelSeries series;
  Subprocesses subprocesses;
};

SimulatedData simulate_model(const ModelConfig& model, std::uint64_t seed);

/// Analysis settings shared by the pipeline subcommands.
struct AnalysisConfig {
  WaveletChoice wavelet;
  int levels = 4;
  int window = 50;
  int step = 10;
  int lag_samples = 0;
  std::optional<double> lag_seconds;
  int smoothing = 16;  // M, half-width of the rectangular periodogram kernel
  std::vector<CoherencePair> pairs;
  std::vector<double> significance{0.95, 0.99, 0.999};
  std::uint64_t seed = 0;
  std::optional<double> sampling_rate;
  std::optional<double> fmax;
  int n_sim = 2000;
  int n_perm = 10000;

  /// Lag in samples, converting lag_seconds (rounded to nearest) when set.
  int lag(double fs) const;
  void validate(int channels) const;
};

/// Missing keys keep their defaults.
AnalysisConfig parse_analysis_config(const nlohmann::json& j);
nlohmann::json to_json(const AnalysisConfig& c);

}  // namespace mvlsw
