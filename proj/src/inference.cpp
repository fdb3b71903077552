#include "mvlsw/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mvlsw/errors.hpp"
#include "mvlsw/lsw_sim.hpp"
#include "mvlsw/parallel.hpp"
#include "mvlsw/random.hpp"
#include "mvlsw/spectral.hpp"

namespace mvlsw {

namespace {

double type7_quantile(const std::vector<double>& sorted, double level) {
  if (sorted.empty()) throw ParameterError("empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw ParameterError("quantile level must lie in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * level;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

void validate(const NullConfig& c) {
  if (c.n_sim < 100) throw ParameterError("n_sim must be at least 100");
  if (c.channels < 1) throw ParameterError("channels must be positive");
  check_levels(c.levels, c.length);
  if (c.filter.low_pass.empty()) throw ParameterError("null config has no wavelet filter");
  for (double level : c.levels_requested)
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("significance levels must lie in (0, 1)");
  for (const auto& pr : c.pairs)
    if (pr.j < 1 || pr.jprime < 1 || pr.j > c.levels || pr.jprime > c.levels || pr.p < 0 || pr.q < 0 ||
        pr.p >= c.channels || pr.q >= c.channels)
      throw ParameterError("pair " + format_pair(pr) + " outside the simulated scales/channels");
}

CoherenceValue median_of(std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

CoherenceCurve median_of_curves(const std::vector<const CoherenceCurve*>& curves) {
  const std::size_t nt = curves.front()->size();
  CoherenceCurve out(nt);
  std::vector<double> vals;
  vals.reserve(curves.size());
  for (std::size_t t = 0; t < nt; ++t) {
    vals.clear();
    for (const auto* c : curves)
      if ((*c)[t]) vals.push_back(*(*c)[t]);
    out[t] = median_of(vals);
  }
  return out;
}

const CoherenceCurve& curve_for(const CoherenceSurface& s, const CoherencePair& pair) {
  auto it = s.entries.find(pair);
  if (it == s.entries.end()) throw ConfigurationError("surface has no entry for pair " + format_pair(pair));
  return it->second;
}

void check_grids(const std::vector<const CoherenceSurface*>& all, const CoherencePair& pair) {
  const CoherenceSurface& ref = *all.front();
  for (const auto* s : all) {
    if (s->time != ref.time) throw ConfigurationError("coherence surfaces are on different time grids");
    if (curve_for(*s, pair).size() != ref.time.size())
      throw ConfigurationError("curve length does not match its time grid");
  }
}

}  // namespace

double NullDistribution::quantile(double level) const {
  auto it = quantiles.find(level);
  if (it != quantiles.end()) return it->second;
  return type7_quantile(samples, level);
}

std::vector<CoherencePair> all_distinct_pairs(int levels, int channels) {
  std::vector<SubprocessRef> refs;
  for (int j = 1; j <= levels; ++j)
    for (int p = 0; p < channels; ++p) refs.push_back({j, p});
  std::vector<CoherencePair> pairs;
  for (std::size_t a = 0; a < refs.size(); ++a)
    for (std::size_t b = a + 1; b < refs.size(); ++b)
      pairs.push_back({refs[a].scale, refs[a].channel, refs[b].scale, refs[b].channel});
  return pairs;
}

std::vector<double> null_replicate(const NullConfig& config, std::uint64_t replicate_seed) {
  const MvLswSpec spec = independent_spec(config.channels, config.levels, config.filter);
  const Realization r = simulate_mvlsw(spec, config.length, replicate_seed);
  const Subprocesses subs = decompose_channels(r.series, config.filter, config.levels);
  const auto pairs = config.pairs.empty() ? all_distinct_pairs(config.levels, config.channels) : config.pairs;
  const CoherenceSurface surface =
      config.controls.empty()
          ? windowed_coherence(subs, pairs, config.window, config.step, config.lag)
          : partial_windowed_coherence(subs, pairs, config.controls, config.window, config.step, config.lag);
  std::vector<double> out;
  for (const auto& [pair, curve] : surface.entries)
    for (const auto& v : curve)
      if (v) out.push_back(std::abs(*v));
  return out;
}

NullDistribution null_distribution(const NullConfig& config) {
  validate(config);
  std::vector<std::vector<double>> per_rep(static_cast<std::size_t>(config.n_sim));
  detail::parallel_for(per_rep.size(), [&](std::size_t r) {
    per_rep[r] = null_replicate(config, derive_seed(config.seed, r));
  });

  NullDistribution dist;
  dist.meta = config;
  std::size_t total = 0;
  for (const auto& v : per_rep) total += v.size();
  if (total == 0) throw ParameterError("H0 simulation produced no defined coherence values");
  dist.samples.reserve(total);
  for (auto& v : per_rep) {
    dist.samples.insert(dist.samples.end(), v.begin(), v.end());
    std::vector<double>().swap(v);
  }
  std::sort(dist.samples.begin(), dist.samples.end());
  for (double level : config.levels_requested) dist.quantiles[level] = type7_quantile(dist.samples, level);
  return dist;
}

SignificanceMask significance_mask(const CoherenceSurface& surface, const NullDistribution& dist, double level) {
  if (surface.kind == CoherenceKind::spectral)
    throw ConfigurationError("null thresholds are calibrated for windowed coherence, not spectral estimates");
  if (surface.window != dist.meta.window || surface.step != dist.meta.step)
    throw ConfigurationError("surface window/step (" + std::to_string(surface.window) + "/" +
                             std::to_string(surface.step) + ") differ from the null (" +
                             std::to_string(dist.meta.window) + "/" + std::to_string(dist.meta.step) + ")");
  if (surface.lag != dist.meta.lag)
    throw ConfigurationError("surface lag " + std::to_string(surface.lag) + " differs from the null lag " +
                             std::to_string(dist.meta.lag));
  const double threshold = dist.quantile(level);
  SignificanceMask mask;
  for (const auto& [pair, curve] : surface.entries) {
    std::vector<bool> m(curve.size(), false);
    for (std::size_t t = 0; t < curve.size(); ++t) m[t] = curve[t] && std::abs(*curve[t]) > threshold;
    mask.emplace(pair, std::move(m));
  }
  return mask;
}

CoherenceCurve median_curve(const std::vector<CoherenceSurface>& group, const CoherencePair& pair) {
  if (group.empty()) throw ParameterError("median of an empty group");
  std::vector<const CoherenceSurface*> all;
  for (const auto& s : group) all.push_back(&s);
  check_grids(all, pair);
  std::vector<const CoherenceCurve*> curves;
  for (const auto& s : group) curves.push_back(&curve_for(s, pair));
  return median_of_curves(curves);
}

double median_contrast(const CoherenceCurve& a, const CoherenceCurve& b, std::size_t* skipped) {
  if (a.size() != b.size()) throw ConfigurationError("median curves have different lengths");
  double t = 0.0;
  std::size_t skip = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i] || !b[i]) {
      ++skip;
      continue;
    }
    const double d = *a[i] - *b[i];
    t += d * d;
  }
  if (skipped) *skipped = skip;
  return t;
}

PermutationResult permutation_test(const std::vector<CoherenceSurface>& group_a,
                                   const std::vector<CoherenceSurface>& group_b, const CoherencePair& pair,
                                   int n_perm, std::uint64_t seed) {
  if (group_a.empty() || group_b.empty()) throw ParameterError("permutation test needs two non-empty groups");
  if (n_perm < 1) throw ParameterError("n_perm must be positive");
  std::vector<const CoherenceSurface*> all;
  for (const auto& s : group_a) all.push_back(&s);
  for (const auto& s : group_b) all.push_back(&s);
  check_grids(all, pair);

  PermutationResult result;
  result.n_perm = n_perm;
  result.seed = seed;
  result.t_observed =
      median_contrast(median_curve(group_a, pair), median_curve(group_b, pair), &result.skipped_points);

  std::vector<const CoherenceCurve*> pooled;
  for (const auto* s : all) pooled.push_back(&curve_for(*s, pair));
  std::sort(pooled.begin(), pooled.end(), [](const CoherenceCurve* x, const CoherenceCurve* y) { return *x < *y; });

  const std::size_t n = pooled.size();
  const std::size_t k = std::min(group_a.size(), group_b.size());
  result.t_permuted.assign(static_cast<std::size_t>(n_perm), 0.0);
  detail::parallel_for(result.t_permuted.size(), [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t m = 0; m < k; ++m) {
      std::uniform_int_distribution<std::size_t> pick(m, n - 1);
      std::swap(idx[m], idx[pick(rng)]);
    }
    std::vector<const CoherenceCurve*> first, second;
    for (std::size_t m = 0; m < n; ++m) (m < k ? first : second).push_back(pooled[idx[m]]);
    result.t_permuted[i] = median_contrast(median_of_curves(first), median_of_curves(second));
  });

  const auto exceed = std::count_if(result.t_permuted.begin(), result.t_permuted.end(),
                                    [&](double t) { return t >= result.t_observed; });
  result.p_value = (1.0 + static_cast<double>(exceed)) / (static_cast<double>(n_perm) + 1.0);
  return result;
}

}  // namespace mvlsw
