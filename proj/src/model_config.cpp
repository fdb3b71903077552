#include "mvlsw/model_config.hpp"

#include <cmath>
#include <fstream>

#include "mvlsw/errors.hpp"

namespace mvlsw {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw ConfigurationError("config key '" + key + "': " + what);
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(key, e.what());
  }
}

template <class T>
T require(const json& j, const std::string& key) {
  if (!j.contains(key)) config_error(key, "missing");
  return get_or<T>(j, key, T{});
}

Eigen::MatrixXd parse_matrix(const json& j, int n, const std::string& key) {
  if (j.is_number()) {
    if (n != 1) config_error(key, "a scalar is only allowed for one channel");
    return Eigen::MatrixXd::Constant(1, 1, j.get<double>());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != n) config_error(key, "expected " + std::to_string(n) + " rows");
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      config_error(key, "row " + std::to_string(r + 1) + " must have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const json& v = row.at(static_cast<std::size_t>(c));
      if (!v.is_number()) config_error(key, "non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

ModelConfig parse_mvlsw(const json& j) {
  ModelConfig m;
  m.model = "mvlsw";
  const int chans = require<int>(j, "channels");
  const int levels = require<int>(j, "levels");
  if (chans < 1) config_error("channels", "must be positive");
  if (levels < 1) config_error("levels", "must be positive");
  const bool smooth = get_or<bool>(j, "include_smooth", false);
  m.wavelet = j.contains("wavelet") ? parse_wavelet(j.at("wavelet")) : WaveletChoice{};
  m.length = require<std::size_t>(j, "length");
  m.sampling_rate = get_or<double>(j, "sampling_rate", 1.0);
  if (!(m.sampling_rate > 0.0)) config_error("sampling_rate", "must be positive");
  try {
    check_levels(levels, m.length);
  } catch (const ParameterError& e) {
    config_error("levels", e.what());
  }

  const int nlev = levels + (smooth ? 1 : 0);
  std::vector<PiecewiseSegment> segments;
  const json segs = j.contains("segments") ? j.at("segments") : json::array({json::object()});
  if (!segs.is_array() || segs.empty()) config_error("segments", "must be a non-empty array");
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const json& seg = segs[s];
    const std::string where = "segments[" + std::to_string(s) + "]";
    PiecewiseSegment ps;
    ps.start = get_or<double>(seg, "start", 0.0);
    if (seg.contains("transfer")) {
      const json& tr = seg.at("transfer");
      if (!tr.is_array() || static_cast<int>(tr.size()) != nlev)
        config_error(where + ".transfer", "expected one matrix per level (" + std::to_string(nlev) + ")");
      for (int l = 0; l < nlev; ++l)
        ps.transfer.push_back(parse_matrix(tr[static_cast<std::size_t>(l)], chans, where + ".transfer"));
    } else {
      ps.transfer.assign(static_cast<std::size_t>(nlev), Eigen::MatrixXd::Identity(chans, chans));
    }
    if (seg.contains("innovation_corr")) {
      for (const json& b : seg.at("innovation_corr")) {
        InnovationBlock blk;
        blk.j = require<int>(b, "j");
        blk.jprime = require<int>(b, "jprime");
        if (!b.contains("matrix")) config_error(where + ".innovation_corr.matrix", "missing");
        blk.matrix = parse_matrix(b.at("matrix"), chans, where + ".innovation_corr.matrix");
        ps.innovation.push_back(std::move(blk));
      }
    }
    segments.push_back(std::move(ps));
  }
  try {
    m.spec = piecewise_spec(chans, levels, smooth, m.wavelet.filter(), std::move(segments));
    for (const auto& seg : segs) m.spec.validate_at(get_or<double>(seg, "start", 0.0));
  } catch (const ParameterError& e) {
    config_error("segments", e.what());
  } catch (const SpecificationError& e) {
    config_error("segments", e.what());
  }
  return m;
}

ModelConfig parse_mixture(const json& j) {
  ModelConfig m;
  m.model = "ar2_mixture";
  m.sampling_rate = require<double>(j, "sampling_rate");
  if (!(m.sampling_rate > 0.0)) config_error("sampling_rate", "must be positive");
  const double duration = require<double>(j, "duration");
  if (!(duration > 0.0)) config_error("duration", "must be positive");
  m.length = static_cast<std::size_t>(std::llround(duration * m.sampling_rate));

  if (!j.contains("latents") || !j.at("latents").is_array() || j.at("latents").empty())
    config_error("latents", "must be a non-empty array");
  for (const json& l : j.at("latents")) {
    Ar2LatentSpec spec;
    spec.modulus = require<double>(l, "modulus");
    spec.frequency = require<double>(l, "peak_hz") / m.sampling_rate;
    spec.noise_sd = get_or<double>(l, "noise_sd", 1.0);
    try {
      spec.validate();
    } catch (const ParameterError& e) {
      config_error("latents", e.what());
    }
    m.latents.push_back(spec);
  }
  if (!j.contains("mixing") || !j.at("mixing").is_array()) config_error("mixing", "must be an array per channel");
  for (const json& chan : j.at("mixing")) {
    std::vector<MixingSegment> segs;
    for (const json& s : chan) {
      MixingSegment seg;
      seg.start = static_cast<std::size_t>(std::llround(get_or<double>(s, "start", 0.0) * m.sampling_rate));
      seg.weights = require<std::vector<double>>(s, "weights");
      if (seg.weights.size() != m.latents.size()) config_error("mixing", "weights must have one entry per latent");
      segs.push_back(std::move(seg));
    }
    m.schedule.push_back(std::move(segs));
  }
  return m;
}

}  // namespace

WaveletChoice parse_wavelet(const std::string& text) {
  WaveletChoice w;
  if (text == "haar") {
    w.vanishing_moments = 1;
  } else if (text.size() > 2 && text.rfind("db", 0) == 0) {
    try {
      std::size_t used = 0;
      w.vanishing_moments = std::stoi(text.substr(2), &used);
      if (used != text.size() - 2) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ConfigurationError("unknown wavelet '" + text + "'");
    }
  } else {
    throw ConfigurationError("unknown wavelet '" + text + "', expected haar or db<N>");
  }
  if (w.vanishing_moments < 1 || w.vanishing_moments > 10)
    throw ConfigurationError("wavelet '" + text + "': vanishing moments must be 1..10");
  return w;
}

WaveletChoice parse_wavelet(const json& j) {
  if (j.is_string()) return parse_wavelet(j.get<std::string>());
  const std::string family = get_or<std::string>(j, "family", "daubechies");
  if (family == "haar") return parse_wavelet(std::string("haar"));
  if (family != "daubechies") config_error("wavelet.family", "unsupported family '" + family + "'");
  return parse_wavelet("db" + std::to_string(get_or<int>(j, "vanishing_moments", 2)));
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config '" + path + "': " + e.what(), 0);
  }
}

ModelConfig parse_model_config(const json& j) {
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  const std::string model = get_or<std::string>(j, "model", "");
  ModelConfig m;
  if (model == "mvlsw") m = parse_mvlsw(j);
  else if (model == "ar2_mixture") m = parse_mixture(j);
  else config_error("model", "expected 'mvlsw' or 'ar2_mixture', got '" + model + "'");
  m.source = j;
  return m;
}

SimulatedData simulate_model(const ModelConfig& model, std::uint64_t seed) {
  SimulatedData out;
  if (model.model == "mvlsw") {
    Realization r = simulate_mvlsw(model.spec, model.length, seed, model.sampling_rate);
    out.series = std::move(r.series);
    out.subprocesses = std::move(r.subprocesses);
  } else {
    out.series = simulate_mixture(model.latents, model.schedule, model.length, model.sampling_rate, seed);
  }
  return out;
}

int AnalysisConfig::lag(double fs) const {
  if (lag_seconds) return static_cast<int>(std::lround(*lag_seconds * fs));
  return lag_samples;
}

void AnalysisConfig::validate(int channels) const {
  if (levels < 1) throw ConfigurationError("levels must be positive");
  if (window < 2) throw ConfigurationError("window must be at least 2 samples");
  if (step < 1) throw ConfigurationError("step must be positive");
  if (smoothing < 0) throw ConfigurationError("smoothing M must be >= 0");
  if (n_sim < 100) throw ConfigurationError("nsim must be at least 100");
  if (n_perm < 1) throw ConfigurationError("nperm must be positive");
  if (sampling_rate && !(*sampling_rate > 0.0)) throw ConfigurationError("sampling_rate must be positive");
  if (fmax && !(*fmax > 0.0)) throw ConfigurationError("fmax must be positive");
  for (double s : significance)
    if (!(s > 0.0 && s < 1.0)) throw ConfigurationError("significance levels must lie in (0, 1)");
  for (const auto& p : pairs)
    if (p.j > levels || p.jprime > levels || p.p >= channels || p.q >= channels)
      throw ConfigurationError("pair " + format_pair(p) + " references a missing scale or channel");
}

AnalysisConfig parse_analysis_config(const json& j) {
  AnalysisConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw ConfigurationError("analysis section must be an object");
  if (j.contains("wavelet")) c.wavelet = parse_wavelet(j.at("wavelet"));
  c.levels = get_or<int>(j, "levels", c.levels);
  c.window = get_or<int>(j, "window", c.window);
  c.step = get_or<int>(j, "step", c.step);
  c.lag_samples = get_or<int>(j, "lag", c.lag_samples);
  if (j.contains("lag_seconds") && !j.at("lag_seconds").is_null()) c.lag_seconds = get_or<double>(j, "lag_seconds", 0.0);
  c.smoothing = get_or<int>(j, "M", c.smoothing);
  if (j.contains("pairs")) {
    c.pairs.clear();
    for (const json& p : j.at("pairs")) {
      if (!p.is_string()) config_error("pairs", "entries must be strings like \"1:1-1:2\"");
      try {
        c.pairs.push_back(parse_pair(p.get<std::string>()));
      } catch (const ParameterError& e) {
        config_error("pairs", e.what());
      }
    }
  }
  c.significance = get_or<std::vector<double>>(j, "quantiles", c.significance);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("sampling_rate") && !j.at("sampling_rate").is_null()) c.sampling_rate = get_or<double>(j, "sampling_rate", 1.0);
  if (j.contains("fmax") && !j.at("fmax").is_null()) c.fmax = get_or<double>(j, "fmax", 1.0);
  c.n_sim = get_or<int>(j, "nsim", c.n_sim);
  c.n_perm = get_or<int>(j, "nperm", c.n_perm);
  return c;
}

json to_json(const AnalysisConfig& c) {
  json j;
  j["wavelet"] = c.wavelet.name();
  j["levels"] = c.levels;
  j["window"] = c.window;
  j["step"] = c.step;
  j["lag"] = c.lag_samples;
  j["lag_seconds"] = c.lag_seconds ? json(*c.lag_seconds) : json(nullptr);
  j["M"] = c.smoothing;
  j["pairs"] = json::array();
  for (const auto& p : c.pairs) j["pairs"].push_back(format_pair(p));
  j["quantiles"] = c.significance;
  j["seed"] = c.seed;
  j["sampling_rate"] = c.sampling_rate ? json(*c.sampling_rate) : json(nullptr);
  j["fmax"] = c.fmax ? json(*c.fmax) : json(nullptr);
  j["nsim"] = c.n_sim;
  j["nperm"] = c.n_perm;
  return j;
}

}  // namespace mvlsw
