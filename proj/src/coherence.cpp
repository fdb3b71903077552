#include "mvlsw/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "mvlsw/errors.hpp"

namespace mvlsw {

CoherencePair parse_pair(const std::string& text) {
  CoherencePair pair;
  char c1 = 0, dash = 0, c2 = 0;
  std::istringstream in(text);
  int j = 0, p = 0, jp = 0, q = 0;
  if (!(in >> j >> c1 >> p >> dash >> jp >> c2 >> q) || c1 != ':' || dash != '-' || c2 != ':' ||
      in.peek() != std::char_traits<char>::eof()) {
    throw ParameterError("malformed pair '" + text + "', expected j:p-j':q");
  }
  if (j < 1 || jp < 1 || p < 1 || q < 1) throw ParameterError("scales and channels in '" + text + "' are 1-based");
  pair.j = j;
  pair.p = p - 1;
  pair.jprime = jp;
  pair.q = q - 1;
  return pair;
}

std::string format_pair(const CoherencePair& pair) {
  return std::to_string(pair.j) + ":" + std::to_string(pair.p + 1) + "-" + std::to_string(pair.jprime) + ":" +
         std::to_string(pair.q + 1);
}

std::string to_string(CoherenceKind kind) {
  switch (kind) {
    case CoherenceKind::spectral: return "spectral";
    case CoherenceKind::windowed: return "windowed";
    case CoherenceKind::partial: return "partial";
  }
  return "unknown";
}

CoherenceCurve CoherenceSurface::squared(const CoherencePair& pair) const {
  CoherenceCurve out = entries.at(pair);
  for (auto& v : out)
    if (v) *v = *v * *v;
  return out;
}

std::size_t CoherenceSurface::undefined_count() const {
  std::size_t n = 0;
  for (const auto& [pair, curve] : entries) n += static_cast<std::size_t>(std::count(curve.begin(), curve.end(), std::nullopt));
  return n;
}

CoherenceSurface coherence_estimate(const CrossScaleSpectrum& spectrum, int lag) {
  const int levels = spectrum.levels();
  const int chans = spectrum.channels();
  const std::size_t nt = spectrum.values.times();

  double max_diag = 0.0;
  std::size_t negative = 0;
  for (int j = 1; j <= levels; ++j)
    for (int p = 0; p < chans; ++p)
      for (std::size_t n = 0; n < nt; ++n) {
        const double s = spectrum(j, j, p, p, n);
        max_diag = std::max(max_diag, s);
        if (s < 0.0) ++negative;
      }
  const double floor = kCoherenceFloor * max_diag;

  CoherenceSurface surface;
  surface.kind = CoherenceKind::spectral;
  surface.time = spectrum.u_grid;
  surface.lag = lag;
  surface.negative_diagonals = negative;
  for (int j = 1; j <= levels; ++j)
    for (int jp = 1; jp <= levels; ++jp)
      for (int p = 0; p < chans; ++p)
        for (int q = 0; q < chans; ++q) {
          CoherenceCurve curve(nt);
          for (std::size_t n = 0; n < nt; ++n) {
            const double a = spectrum(j, j, p, p, n);
            const double b = spectrum(jp, jp, q, q, n);
            if (a > floor && b > floor && max_diag > 0.0)
              curve[n] = std::clamp(spectrum(j, jp, p, q, n) / std::sqrt(a * b), -1.0, 1.0);
          }
          surface.entries.emplace(CoherencePair{j, p, jp, q}, std::move(curve));
        }
  return surface;
}

std::vector<std::size_t> window_starts(std::size_t length, int window, int step, int max_forward_lag,
                                       int max_backward_lag) {
  if (window < 2) throw ParameterError("window must be at least 2 samples");
  if (step < 1) throw ParameterError("step must be at least 1 sample");
  if (static_cast<std::size_t>(window) > length) throw ParameterError("window longer than series");
  std::vector<std::size_t> starts;
  const auto n = static_cast<long long>(length);
  for (long long s = max_backward_lag; s + window - 1 + max_forward_lag <= n - 1; s += step)
    starts.push_back(static_cast<std::size_t>(s));
  return starts;
}

namespace {

const Eigen::MatrixXd& level_matrix(const Subprocesses& subs, const SubprocessRef& ref) {
  if (ref.scale < 1 || ref.scale > static_cast<int>(subs.size()))
    throw ParameterError("scale " + std::to_string(ref.scale) + " not available");
  const Eigen::MatrixXd& m = subs[static_cast<std::size_t>(ref.scale - 1)];
  if (ref.channel < 0 || ref.channel >= m.rows())
    throw ParameterError("channel " + std::to_string(ref.channel + 1) + " not available");
  return m;
}

// Pearson correlation of x[s..s+w) and y[s+lag..s+lag+w).
CoherenceValue pearson(const Eigen::MatrixXd& xm, int xp, const Eigen::MatrixXd& ym, int yq, std::size_t s,
                       int w, int lag) {
  double mx = 0, my = 0;
  for (int i = 0; i < w; ++i) {
    mx += xm(xp, static_cast<Eigen::Index>(s) + i);
    my += ym(yq, static_cast<Eigen::Index>(s) + i + lag);
  }
  mx /= w;
  my /= w;
  double sxx = 0, syy = 0, sxy = 0, ex = 0, ey = 0;
  for (int i = 0; i < w; ++i) {
    const double x = xm(xp, static_cast<Eigen::Index>(s) + i);
    const double y = ym(yq, static_cast<Eigen::Index>(s) + i + lag);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
    ex += x * x;
    ey += y * y;
  }
  if (!(sxx > 1e-20 * ex) || !(syy > 1e-20 * ey)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> centers(const std::vector<std::size_t>& starts, int window) {
  std::vector<double> t;
  t.reserve(starts.size());
  for (auto s : starts) t.push_back(static_cast<double>(s) + 0.5 * (window - 1));
  return t;
}

}  // namespace

CoherenceSurface windowed_coherence(const Subprocesses& subprocesses, const std::vector<CoherencePair>& pairs,
                                    int window, int step, int lag) {
  if (subprocesses.empty()) throw ParameterError("no subprocesses");
  const std::size_t n = static_cast<std::size_t>(subprocesses.front().cols());
  const auto starts = window_starts(n, window, step, std::max(0, lag), std::max(0, -lag));

  CoherenceSurface surface;
  surface.kind = CoherenceKind::windowed;
  surface.time = centers(starts, window);
  surface.lag = lag;
  surface.window = window;
  surface.step = step;
  for (const auto& pair : pairs) {
    const auto& xm = level_matrix(subprocesses, pair.first());
    const auto& ym = level_matrix(subprocesses, pair.second());
    CoherenceCurve curve;
    curve.reserve(starts.size());
    for (auto s : starts) curve.push_back(pearson(xm, pair.p, ym, pair.q, s, window, lag));
    surface.entries[pair] = std::move(curve);
  }
  return surface;
}

CoherenceSurface partial_windowed_coherence(const Subprocesses& subprocesses,
                                            const std::vector<CoherencePair>& pairs,
                                            const std::vector<ControlRef>& controls, int window, int step,
                                            int lag) {
  if (controls.empty()) {
    CoherenceSurface s = windowed_coherence(subprocesses, pairs, window, step, lag);
    s.kind = CoherenceKind::partial;
    return s;
  }
  if (subprocesses.empty()) throw ParameterError("no subprocesses");
  const std::size_t n = static_cast<std::size_t>(subprocesses.front().cols());
  int forward = std::max(0, lag), backward = std::max(0, -lag);
  for (const auto& c : controls) {
    forward = std::max(forward, c.lag);
    backward = std::max(backward, -c.lag);
  }
  const auto starts = window_starts(n, window, step, forward, backward);

  CoherenceSurface surface;
  surface.kind = CoherenceKind::partial;
  surface.time = centers(starts, window);
  surface.lag = lag;
  surface.window = window;
  surface.step = step;

  const auto m = static_cast<Eigen::Index>(controls.size() + 2);
  Eigen::MatrixXd data(window, m);
  for (const auto& pair : pairs) {
    struct Column {
      const Eigen::MatrixXd* mat;
      int channel;
      int lag;
    };
    std::vector<Column> cols{{&level_matrix(subprocesses, pair.first()), pair.p, 0},
                             {&level_matrix(subprocesses, pair.second()), pair.q, lag}};
    for (const auto& c : controls) cols.push_back({&level_matrix(subprocesses, c.ref), c.ref.channel, c.lag});

    CoherenceCurve curve;
    curve.reserve(starts.size());
    for (auto s : starts) {
      for (Eigen::Index c = 0; c < m; ++c)
        for (int i = 0; i < window; ++i)
          data(i, c) = (*cols[c].mat)(cols[c].channel, static_cast<Eigen::Index>(s) + i + cols[c].lag);
      const Eigen::RowVectorXd mean = data.colwise().mean();
      const Eigen::MatrixXd centered = data.rowwise() - mean;
      const Eigen::MatrixXd cov = centered.transpose() * centered;
      const Eigen::VectorXd energy = data.colwise().squaredNorm();
      bool degenerate = false;
      for (Eigen::Index c = 0; c < m; ++c)
        if (!(cov(c, c) > 1e-20 * energy(c))) degenerate = true;
      if (degenerate) {
        curve.push_back(std::nullopt);
        continue;
      }
      const Eigen::VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
      const Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr, Eigen::EigenvaluesOnly);
      if (!(eig.eigenvalues().minCoeff() > 1e-10 * eig.eigenvalues().maxCoeff())) {
        curve.push_back(std::nullopt);
        continue;
      }
      const Eigen::MatrixXd precision = corr.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
      const double denom = precision(0, 0) * precision(1, 1);
      if (!(denom > 0.0)) {
        curve.push_back(std::nullopt);
        continue;
      }
      curve.push_back(std::clamp(-precision(0, 1) / std::sqrt(denom), -1.0, 1.0));
    }
    surface.entries[pair] = std::move(curve);
  }
  return surface;
}

}  // namespace mvlsw
