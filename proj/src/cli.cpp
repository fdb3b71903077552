#include "mvlsw/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mvlsw/coherence.hpp"
#include "mvlsw/errors.hpp"
#include "mvlsw/inference.hpp"
#include "mvlsw/io.hpp"
#include "mvlsw/random.hpp"
#include "mvlsw/spectral.hpp"

#ifndef MVLSW_VERSION
#define MVLSW_VERSION "unknown"
#endif

namespace mvlsw {

using nlohmann::json;
namespace fs = std::filesystem;

json context_to_json(const RunContext& ctx) {
  json j;
  j["command"] = ctx.command;
  j["analysis"] = to_json(ctx.analysis);
  j["model"] = ctx.model ? *ctx.model : json(nullptr);
  j["input"] = ctx.input;
  j["group_a"] = ctx.group_a;
  j["group_b"] = ctx.group_b;
  j["kind"] = ctx.kind;
  j["controls"] = ctx.controls;
  j["null"] = ctx.with_null;
  j["length"] = ctx.length;
  j["channels"] = ctx.channels;
  j["log_return"] = ctx.log_return;
  return j;
}

RunContext context_from_json(const json& j) {
  RunContext ctx;
  try {
    ctx.command = j.at("command").get<std::string>();
    ctx.analysis = parse_analysis_config(j.at("analysis"));
    if (j.contains("model") && !j.at("model").is_null()) ctx.model = j.at("model");
    ctx.input = j.value("input", "");
    ctx.group_a = j.value("group_a", std::vector<std::string>{});
    ctx.group_b = j.value("group_b", std::vector<std::string>{});
    ctx.kind = j.value("kind", "windowed");
    ctx.controls = j.value("controls", std::vector<std::string>{});
    ctx.with_null = j.value("null", false);
    ctx.length = j.value("length", std::size_t{1000});
    ctx.channels = j.value("channels", 1);
    ctx.log_return = j.value("log_return", 0);
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("manifest context: ") + e.what());
  }
  return ctx;
}

namespace {

struct Output {
  json manifest;
  std::vector<std::string> files;
};

std::ofstream open_out(const RunContext& ctx, Output& o, const std::string& name) {
  const fs::path path = fs::path(ctx.out) / name;
  std::ofstream f(path);
  if (!f) throw ConfigurationError("cannot write '" + path.string() + "'");
  o.files.push_back(name);
  return f;
}

ControlRef parse_control(const std::string& text) {
  ControlRef c;
  std::string ref = text;
  const auto at = text.find('@');
  if (at != std::string::npos) {
    ref = text.substr(0, at);
    try {
      std::size_t used = 0;
      c.lag = std::stoi(text.substr(at + 1), &used);
      if (used != text.size() - at - 1) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ParameterError("malformed control lag in '" + text + "'");
    }
  }
  const auto colon = ref.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(ref);
    std::size_t u1 = 0, u2 = 0;
    c.ref.scale = std::stoi(ref.substr(0, colon), &u1);
    c.ref.channel = std::stoi(ref.substr(colon + 1), &u2) - 1;
    if (u1 != colon || u2 != ref.size() - colon - 1) throw std::invalid_argument(ref);
  } catch (const std::exception&) {
    throw ParameterError("malformed control '" + text + "', expected j:p or j:p@lag");
  }
  if (c.ref.scale < 1 || c.ref.channel < 0) throw ParameterError("control '" + text + "' is 1-based");
  return c;
}

MultichannelSeries apply_log_return(const MultichannelSeries& x, int n) {
  if (n <= 0) return x;
  if (static_cast<std::size_t>(n) >= x.length()) throw ParameterError("log-return horizon exceeds series length");
  MultichannelSeries out;
  out.sampling_rate = x.sampling_rate;
  out.data.resize(x.channels(), static_cast<Eigen::Index>(x.length()) - n);
  for (int p = 0; p < x.channels(); ++p) {
    const auto r = log_return(x.channel(p), n);
    for (std::size_t t = static_cast<std::size_t>(n); t < r.size(); ++t)
      out.data(p, static_cast<Eigen::Index>(t) - n) = *r[t];
  }
  return out;
}

MultichannelSeries load_input(const std::string& path, const RunContext& ctx) {
  return apply_log_return(load_csv(path, ctx.analysis.sampling_rate), ctx.log_return);
}

SimulatedData obtain_data(const RunContext& ctx) {
  if (!ctx.input.empty()) return {load_input(ctx.input, ctx), {}};
  if (ctx.model) {
    SimulatedData d = simulate_model(parse_model_config(*ctx.model), ctx.analysis.seed);
    if (ctx.analysis.sampling_rate) d.series.sampling_rate = *ctx.analysis.sampling_rate;
    d.series = apply_log_return(d.series, ctx.log_return);
    return d;
  }
  throw ConfigurationError("no data: give --input or a model --config");
}

std::vector<CoherencePair> effective_pairs(const AnalysisConfig& a, int channels) {
  return a.pairs.empty() ? all_distinct_pairs(a.levels, channels) : a.pairs;
}

int resolve_lag(const RunContext& ctx, double fs, Output& o, std::ostream& out) {
  const int lag = ctx.analysis.lag(fs);
  if (ctx.analysis.lag_seconds) {
    std::ostringstream msg;
    msg << "lag " << format_number(*ctx.analysis.lag_seconds) << " s -> " << lag << " samples at "
        << format_number(fs) << " Hz";
    o.manifest["lag_conversion"] = msg.str();
    out << msg.str() << '\n';
  }
  o.manifest["lag_samples"] = lag;
  return lag;
}

void record_bands(const AnalysisConfig& a, double fs, Output& o) {
  const double fmax = a.fmax ? *a.fmax : fs / 2.0;
  json bands = json::array();
  for (int j = 1; j <= a.levels; ++j) {
    const auto [lo, hi] = scale_to_band(fmax, j);
    bands.push_back({{"j", j}, {"low_hz", lo}, {"high_hz", hi}});
  }
  o.manifest["bands"] = bands;
  o.manifest["fmax_hz"] = fmax;
}

void write_wide(std::ostream& f, const Subprocesses& parts, double fs, int levels_named,
                const std::string& detail_prefix) {
  const int levels = static_cast<int>(parts.size());
  const int chans = static_cast<int>(parts.front().rows());
  MultichannelSeries wide;
  wide.sampling_rate = fs;
  wide.data.resize(levels * chans, parts.front().cols());
  std::vector<std::string> names;
  for (int p = 0; p < chans; ++p)
    for (int l = 0; l < levels; ++l) {
      wide.data.row(p * levels + l) = parts[static_cast<std::size_t>(l)].row(p);
      const bool smooth = l + 1 > levels_named;
      names.push_back("ch" + std::to_string(p + 1) + "_" +
                      (smooth ? "S" + std::to_string(levels_named) : detail_prefix + std::to_string(l + 1)));
    }
  write_series_csv(f, wide, names);
}

CoherenceSurface compute_surface(const RunContext& ctx, const MultichannelSeries& x,
                                 const std::vector<CoherencePair>& pairs, int lag,
                                 const std::vector<ControlRef>& controls) {
  const AnalysisConfig& a = ctx.analysis;
  const auto filter = a.wavelet.filter();
  if (ctx.kind == "spectral") {
    CoherenceSurface full = coherence_estimate(estimate_spectrum(x, filter, a.levels, a.smoothing, lag), lag);
    CoherenceSurface s = full;
    s.entries.clear();
    for (const auto& p : pairs) s.entries[p] = full.at(p);
    return s;
  }
  const Subprocesses subs = decompose_channels(x, filter, a.levels);
  if (ctx.kind == "windowed") return windowed_coherence(subs, pairs, a.window, a.step, lag);
  if (ctx.kind == "partial") return partial_windowed_coherence(subs, pairs, controls, a.window, a.step, lag);
  throw ConfigurationError("unknown coherence kind '" + ctx.kind + "'");
}

std::vector<ControlRef> parse_controls(const RunContext& ctx, int channels) {
  std::vector<ControlRef> out;
  for (const auto& c : ctx.controls) {
    out.push_back(parse_control(c));
    if (out.back().ref.scale > ctx.analysis.levels || out.back().ref.channel >= channels)
      throw ConfigurationError("control '" + c + "' references a missing scale or channel");
  }
  if (!out.empty() && ctx.kind != "partial") throw ConfigurationError("--controls requires --kind partial");
  return out;
}

void write_thresholds(std::ostream& f, const NullDistribution& dist) {
  f << "level,threshold,squared_threshold\n";
  for (const auto& [level, thr] : dist.quantiles)
    f << format_number(level) << ',' << format_number(thr) << ',' << format_number(thr * thr) << '\n';
}

json thresholds_json(const NullDistribution& dist) {
  json j = json::object();
  for (const auto& [level, thr] : dist.quantiles) j[format_number(level)] = thr;
  return j;
}

void cmd_simulate(const RunContext& ctx, Output& o) {
  if (!ctx.model) throw ConfigurationError("simulate needs a model --config");
  const SimulatedData d = simulate_model(parse_model_config(*ctx.model), ctx.analysis.seed);
  auto f = open_out(ctx, o, "series.csv");
  write_series_csv(f, d.series);
  if (!d.subprocesses.empty()) {
    auto g = open_out(ctx, o, "subprocesses.csv");
    write_wide(g, d.subprocesses, d.series.sampling_rate, static_cast<int>(d.subprocesses.size()), "j");
  }
  o.manifest["sampling_rate"] = d.series.sampling_rate;
  o.manifest["length"] = d.series.length();
}

void cmd_decompose(const RunContext& ctx, Output& o) {
  const SimulatedData d = obtain_data(ctx);
  ctx.analysis.validate(d.series.channels());
  const Subprocesses parts = decompose_channels(d.series, ctx.analysis.wavelet.filter(), ctx.analysis.levels);
  auto f = open_out(ctx, o, "components.csv");
  write_wide(f, parts, d.series.sampling_rate, ctx.analysis.levels, "D");
  record_bands(ctx.analysis, d.series.sampling_rate, o);
  o.manifest["sampling_rate"] = d.series.sampling_rate;
}

void cmd_spectrum(const RunContext& ctx, Output& o, std::ostream& out) {
  const SimulatedData d = obtain_data(ctx);
  const AnalysisConfig& a = ctx.analysis;
  a.validate(d.series.channels());
  const double fs = d.series.sampling_rate;
  const int lag = resolve_lag(ctx, fs, o, out);
  const CrossScaleSpectrum s = estimate_spectrum(d.series, a.wavelet.filter(), a.levels, a.smoothing, lag);
  std::vector<CoherencePair> pairs = a.pairs;
  if (pairs.empty())
    for (int j = 1; j <= a.levels; ++j)
      for (int jp = 1; jp <= a.levels; ++jp)
        for (int p = 0; p < d.series.channels(); ++p)
          for (int q = 0; q < d.series.channels(); ++q) pairs.push_back({j, p, jp, q});
  ResultTable table;
  for (const auto& pr : pairs)
    for (std::size_t k = 0; k < s.values.times(); ++k)
      table.rows.push_back({static_cast<double>(k) / fs, pr.j, pr.jprime, pr.p, pr.q, s(pr.j, pr.jprime, pr.p, pr.q, k),
                            "spectrum", std::nullopt});
  auto f = open_out(ctx, o, "spectrum.csv");
  write_result_table(f, table);
  record_bands(a, fs, o);
}

void cmd_coherence(const RunContext& ctx, Output& o, std::ostream& out) {
  const SimulatedData d = obtain_data(ctx);
  const AnalysisConfig& a = ctx.analysis;
  const int chans = d.series.channels();
  a.validate(chans);
  const double fs = d.series.sampling_rate;
  const int lag = resolve_lag(ctx, fs, o, out);
  const auto pairs = effective_pairs(a, chans);
  const auto controls = parse_controls(ctx, chans);
  CoherenceSurface surface = compute_surface(ctx, d.series, pairs, lag, controls);

  std::optional<SignificanceMask> mask;
  if (ctx.with_null) {
    if (ctx.kind == "spectral") throw ConfigurationError("--null applies to windowed or partial coherence");
    NullConfig nc;
    nc.levels = a.levels;
    nc.length = d.series.length();
    nc.channels = chans;
    nc.window = a.window;
    nc.step = a.step;
    nc.lag = lag;
    nc.n_sim = a.n_sim;
    nc.seed = splitmix64(a.seed + 1);
    nc.filter = a.wavelet.filter();
    nc.pairs = pairs;
    nc.controls = controls;
    nc.levels_requested = a.significance;
    const NullDistribution dist = null_distribution(nc);
    surface.thresholds = dist.quantiles;
    const double level = dist.quantiles.count(0.99) ? 0.99 : dist.quantiles.rbegin()->first;
    mask = significance_mask(surface, dist, level);
    o.manifest["thresholds"] = thresholds_json(dist);
    o.manifest["mask_level"] = level;
    o.manifest["null_seed"] = nc.seed;
    auto g = open_out(ctx, o, "thresholds.csv");
    write_thresholds(g, dist);
  }
  const double time_scale = ctx.kind == "spectral" ? static_cast<double>(d.series.length()) / fs : 1.0 / fs;
  auto f = open_out(ctx, o, "coherence.csv");
  write_result_table(f, surface_to_table(surface, time_scale, mask ? &*mask : nullptr, ctx.kind != "spectral"));
  o.manifest["undefined_points"] = surface.undefined_count();
  o.manifest["negative_diagonals"] = surface.negative_diagonals;
  o.manifest["sampling_rate"] = fs;
  record_bands(a, fs, o);
}

void cmd_null(const RunContext& ctx, Output& o, std::ostream& out) {
  const AnalysisConfig& a = ctx.analysis;
  a.validate(ctx.channels);
  const double fs = a.sampling_rate ? *a.sampling_rate : 1.0;
  NullConfig nc;
  nc.levels = a.levels;
  nc.length = ctx.length;
  nc.channels = ctx.channels;
  nc.window = a.window;
  nc.step = a.step;
  nc.lag = resolve_lag(ctx, fs, o, out);
  nc.n_sim = a.n_sim;
  nc.seed = a.seed;
  nc.filter = a.wavelet.filter();
  nc.pairs = a.pairs;
  nc.controls = parse_controls(ctx, ctx.channels);
  nc.levels_requested = a.significance;
  const NullDistribution dist = null_distribution(nc);
  auto f = open_out(ctx, o, "thresholds.csv");
  write_thresholds(f, dist);
  o.manifest["thresholds"] = thresholds_json(dist);
  o.manifest["pooled_samples"] = dist.samples.size();
}

void cmd_permtest(const RunContext& ctx, Output& o, std::ostream& out) {
  if (ctx.group_a.empty() || ctx.group_b.empty()) throw ConfigurationError("permtest needs --group-a and --group-b files");
  const AnalysisConfig& a = ctx.analysis;
  std::vector<MultichannelSeries> sa, sb;
  for (const auto& p : ctx.group_a) sa.push_back(load_input(p, ctx));
  for (const auto& p : ctx.group_b) sb.push_back(load_input(p, ctx));
  const int chans = sa.front().channels();
  for (const auto* g : {&sa, &sb})
    for (const auto& s : *g)
      if (s.channels() != chans) throw ConfigurationError("subjects have different channel counts");
  a.validate(chans);
  const double fs = sa.front().sampling_rate;
  const int lag = resolve_lag(ctx, fs, o, out);
  const auto pairs = effective_pairs(a, chans);
  const auto controls = parse_controls(ctx, chans);
  std::vector<CoherenceSurface> ca, cb;
  for (const auto& s : sa) ca.push_back(compute_surface(ctx, s, pairs, lag, controls));
  for (const auto& s : sb) cb.push_back(compute_surface(ctx, s, pairs, lag, controls));

  auto f = open_out(ctx, o, "permtest.csv");
  f << "j,jprime,p,q,t_observed,p_value,n_perm,skipped_points\n";
  ResultTable medians;
  const double time_scale = ctx.kind == "spectral" ? static_cast<double>(sa.front().length()) / fs : 1.0 / fs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& pr = pairs[i];
    const PermutationResult r = permutation_test(ca, cb, pr, a.n_perm, derive_seed(a.seed, i));
    f << pr.j << ',' << pr.jprime << ',' << pr.p + 1 << ',' << pr.q + 1 << ',' << format_number(r.t_observed) << ','
      << format_number(r.p_value) << ',' << r.n_perm << ',' << r.skipped_points << '\n';
    const CoherenceCurve ma = median_curve(ca, pr), mb = median_curve(cb, pr);
    for (std::size_t t = 0; t < ma.size(); ++t) {
      const double time = ca.front().time[t] * time_scale;
      medians.rows.push_back({time, pr.j, pr.jprime, pr.p, pr.q, ma[t], "median_a", std::nullopt});
      medians.rows.push_back({time, pr.j, pr.jprime, pr.p, pr.q, mb[t], "median_b", std::nullopt});
    }
  }
  auto g = open_out(ctx, o, "medians.csv");
  write_result_table(g, medians);
  record_bands(a, fs, o);
}

}  // namespace

int run_context(const RunContext& ctx, std::ostream& out, std::ostream& err) {
  Output o;
  try {
    fs::create_directories(ctx.out);
    if (ctx.command == "simulate") cmd_simulate(ctx, o);
    else if (ctx.command == "decompose") cmd_decompose(ctx, o);
    else if (ctx.command == "spectrum") cmd_spectrum(ctx, o, out);
    else if (ctx.command == "coherence") cmd_coherence(ctx, o, out);
    else if (ctx.command == "null-threshold") cmd_null(ctx, o, out);
    else if (ctx.command == "permtest") cmd_permtest(ctx, o, out);
    else throw ConfigurationError("unknown command '" + ctx.command + "'");

    o.manifest["tool"] = "mvlsw";
    o.manifest["version"] = MVLSW_VERSION;
    o.manifest["command"] = ctx.command;
    o.manifest["argv"] = ctx.argv;
    o.manifest["seed"] = ctx.analysis.seed;
    o.manifest["context"] = context_to_json(ctx);
    o.manifest["outputs"] = o.files;
    std::ofstream m(fs::path(ctx.out) / "manifest.json");
    if (!m) throw ConfigurationError("cannot write manifest in '" + ctx.out + "'");
    m << o.manifest.dump(2) << '\n';
    for (const auto& file : o.files) out << (fs::path(ctx.out) / file).string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "mvlsw " << ctx.command << ": error: " << msg << '\n';
    return 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multivariate locally stationary wavelet analysis"};
  app.set_version_flag("--version", MVLSW_VERSION);
  app.require_subcommand(1);

  struct Flags {
    std::string config, input, out = ".", wavelet, pairs, kind = "windowed", manifest;
    std::uint64_t seed = 0;
    int levels = 0, window = 0, step = 0, lag = 0, M = 0, nsim = 0, nperm = 0, channels = 1, log_ret = 0;
    std::size_t length = 1000;
    double lag_seconds = 0, fs = 0, fmax = 0;
    std::vector<double> quantiles;
    std::vector<std::string> controls, group_a, group_b;
    bool null = false;
  } f;
  std::map<std::string, CLI::Option*> opt;

  auto common = [&](CLI::App* sub) {
    opt["config"] = sub->add_option("--config", f.config, "JSON config (model and/or analysis section)");
    sub->add_option("--out", f.out, "output directory")->capture_default_str();
    opt["seed"] = sub->add_option("--seed", f.seed, "random seed");
  };
  auto analysis = [&](CLI::App* sub) {
    opt["input"] = sub->add_option("--input", f.input, "CSV with header time,ch1..chP");
    opt["levels"] = sub->add_option("--levels", f.levels, "number of scales J");
    opt["wavelet"] = sub->add_option("--wavelet", f.wavelet, "haar or dbN");
    opt["sampling-rate"] = sub->add_option("--sampling-rate", f.fs, "override the sampling rate (Hz)");
    opt["fmax"] = sub->add_option("--fmax", f.fmax, "top of scale 1 for band labels (Hz)");
    opt["log-return"] = sub->add_option("--log-return", f.log_ret, "analyse n-period log returns of the input");
  };
  auto windowing = [&](CLI::App* sub) {
    opt["window"] = sub->add_option("--window", f.window, "window length (samples)");
    opt["step"] = sub->add_option("--step", f.step, "window step (samples)");
    opt["lag"] = sub->add_option("--lag", f.lag, "lag in samples");
    opt["lag-seconds"] = sub->add_option("--lag-seconds", f.lag_seconds, "lag in seconds");
    opt["pairs"] = sub->add_option("--pairs", f.pairs, "j:p-j':q[,...] (1-based)");
    sub->add_option("--kind", f.kind, "windowed, partial or spectral")->capture_default_str();
    opt["controls"] = sub->add_option("--controls", f.controls, "partial-coherence controls j:p[@lag]")->delimiter(',');
    opt["M"] = sub->add_option("-M", f.M, "periodogram smoothing half-width");
  };

  auto* sim = app.add_subcommand("simulate", "simulate a configured process");
  common(sim);
  auto* dec = app.add_subcommand("decompose", "multiresolution split into scale components");
  common(dec);
  analysis(dec);
  auto* spec = app.add_subcommand("spectrum", "bias-corrected cross-scale spectrum");
  common(spec);
  analysis(spec);
  spec->add_option("--pairs", f.pairs, "j:p-j':q[,...] (1-based)");
  spec->add_option("-M", f.M, "periodogram smoothing half-width");
  spec->add_option("--lag", f.lag, "lag in samples");
  spec->add_option("--lag-seconds", f.lag_seconds, "lag in seconds");
  auto* coh = app.add_subcommand("coherence", "cross-scale coherence with optional H0 thresholds");
  common(coh);
  analysis(coh);
  windowing(coh);
  coh->add_flag("--null", f.null, "simulate H0 thresholds and flag significant points");
  opt["nsim"] = coh->add_option("--nsim", f.nsim, "H0 replicates");
  opt["quantiles"] = coh->add_option("--quantiles", f.quantiles, "threshold levels")->delimiter(',');
  auto* nul = app.add_subcommand("null-threshold", "H0 coherence thresholds");
  common(nul);
  nul->add_option("--levels", f.levels, "number of scales J");
  nul->add_option("--wavelet", f.wavelet, "haar or dbN");
  nul->add_option("--sampling-rate", f.fs, "sampling rate for --lag-seconds (Hz)");
  nul->add_option("--length", f.length, "series length T")->capture_default_str();
  nul->add_option("--channels", f.channels, "channels P")->capture_default_str();
  windowing(nul);
  nul->add_option("--nsim", f.nsim, "H0 replicates");
  nul->add_option("--quantiles", f.quantiles, "threshold levels")->delimiter(',');
  auto* perm = app.add_subcommand("permtest", "two-group permutation test on median coherence");
  common(perm);
  analysis(perm);
  windowing(perm);
  perm->add_option("--group-a", f.group_a, "CSV files of group A")->required();
  perm->add_option("--group-b", f.group_b, "CSV files of group B")->required();
  opt["nperm"] = perm->add_option("--nperm", f.nperm, "permutations");
  auto* rep = app.add_subcommand("replay", "repeat a run from its manifest");
  rep->add_option("--manifest", f.manifest, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", f.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  RunContext ctx;
  ctx.argv.assign(argv, argv + argc);
  try {
    if (rep->parsed()) {
      const json m = load_json(f.manifest);
      if (!m.contains("context")) throw ConfigurationError("manifest has no run context");
      ctx = context_from_json(m.at("context"));
      ctx.argv = m.value("argv", std::vector<std::string>{});
      ctx.out = f.out;
      return run_context(ctx, out, err);
    }
    const CLI::App* sub = app.get_subcommands().front();
    ctx.command = sub->get_name();
    ctx.out = f.out;
    auto given = [&](const std::string& name) {
      const CLI::Option* o = sub->get_option_no_throw("--" + name);
      if (!o) o = sub->get_option_no_throw("-" + name);
      return o && o->count() > 0;
    };

    if (given("config")) {
      const json cfg = load_json(f.config);
      if (cfg.contains("model")) ctx.model = cfg;
      if (cfg.contains("analysis")) ctx.analysis = parse_analysis_config(cfg.at("analysis"));
    }
    AnalysisConfig& a = ctx.analysis;
    if (given("seed")) a.seed = f.seed;
    if (given("levels")) a.levels = f.levels;
    if (given("wavelet")) a.wavelet = parse_wavelet(f.wavelet);
    if (given("window")) a.window = f.window;
    if (given("step")) a.step = f.step;
    if (given("lag")) {
      a.lag_samples = f.lag;
      a.lag_seconds.reset();
    }
    if (given("lag-seconds")) a.lag_seconds = f.lag_seconds;
    if (given("M")) a.smoothing = f.M;
    if (given("pairs")) {
      a.pairs.clear();
      std::istringstream in(f.pairs);
      std::string item;
      while (std::getline(in, item, ',')) a.pairs.push_back(parse_pair(item));
    }
    if (given("nsim")) a.n_sim = f.nsim;
    if (given("nperm")) a.n_perm = f.nperm;
    if (given("quantiles")) a.significance = f.quantiles;
    if (given("sampling-rate")) a.sampling_rate = f.fs;
    if (given("fmax")) a.fmax = f.fmax;
    ctx.input = f.input;
    ctx.kind = f.kind;
    ctx.controls = f.controls;
    ctx.with_null = f.null;
    ctx.length = f.length;
    ctx.channels = f.channels;
    ctx.log_return = f.log_ret;
    ctx.group_a = f.group_a;
    ctx.group_b = f.group_b;
  } catch (const std::exception& e) {
    err << "mvlsw: error: " << e.what() << '\n';
    return 2;
  }
  return run_context(ctx, out, err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mvlsw
