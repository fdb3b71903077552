#include "mvlsw/lsw_sim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mvlsw/errors.hpp"
#include "mvlsw/random.hpp"

namespace mvlsw {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPsdTol = 1e-10;

[[noreturn]] void spec_error(const std::string& what, double u) {
  std::ostringstream msg;
  msg << what << " at u = " << u;
  throw SpecificationError(msg.str(), u);
}

void check_lower_triangular(const Eigen::MatrixXd& v, int level, double u) {
  for (Eigen::Index r = 0; r < v.rows(); ++r)
    for (Eigen::Index c = r + 1; c < v.cols(); ++c)
      if (v(r, c) != 0.0)
        spec_error("transfer matrix V_" + std::to_string(level) + " is not lower-triangular", u);
}

}  // namespace

Eigen::MatrixXd MvLswSpec::transfer_at(int level, double u) const {
  if (!transfer) throw ParameterError("MvLswSpec has no transfer function");
  Eigen::MatrixXd v = transfer(level, u);
  if (v.rows() != channels || v.cols() != channels)
    throw SpecificationError("transfer matrix has wrong shape", u);
  return v;
}

Eigen::MatrixXd MvLswSpec::stacked_innovation(double u) const {
  const Eigen::Index n = static_cast<Eigen::Index>(process_levels()) * channels;
  if (!innovation) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd q = innovation(u);
  if (q.rows() != n || q.cols() != n)
    throw SpecificationError("stacked innovation covariance has wrong shape", u);
  return q;
}

Eigen::MatrixXd MvLswSpec::innovation_block(int j, int jprime, double u) const {
  const Eigen::MatrixXd q = stacked_innovation(u);
  return q.block((j - 1) * channels, (jprime - 1) * channels, channels, channels);
}

void MvLswSpec::validate_at(double u) const {
  if (channels < 1 || levels < 1) throw ParameterError("MvLswSpec needs channels >= 1, levels >= 1");
  for (int j = 1; j <= process_levels(); ++j) check_lower_triangular(transfer_at(j, u), j, u);

  const Eigen::MatrixXd q = stacked_innovation(u);
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
    spec_error("innovation covariance is not symmetric", u);
  for (int j = 1; j <= process_levels(); ++j) {
    const auto block = q.block((j - 1) * channels, (j - 1) * channels, channels, channels);
    if ((block - Eigen::MatrixXd::Identity(channels, channels)).cwiseAbs().maxCoeff() > kSymmetryTol)
      spec_error("Q_{jj} is not the identity for j = " + std::to_string(j), u);
  }
  if (q.cwiseAbs().maxCoeff() > 1.0 + kSymmetryTol)
    spec_error("innovation correlation exceeds 1 in magnitude", u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kPsdTol)
    spec_error("innovation covariance is not positive semi-definite", u);
}

Eigen::MatrixXd stack_innovation(int process_levels, int channels,
                                 const std::vector<InnovationBlock>& blocks) {
  const Eigen::Index n = static_cast<Eigen::Index>(process_levels) * channels;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  for (const auto& b : blocks) {
    if (b.j < 1 || b.jprime < 1 || b.j > process_levels || b.jprime > process_levels || b.j == b.jprime)
      throw ParameterError("innovation block must reference two distinct valid levels");
    if (b.matrix.rows() != channels || b.matrix.cols() != channels)
      throw ParameterError("innovation block has wrong shape");
    q.block((b.j - 1) * channels, (b.jprime - 1) * channels, channels, channels) = b.matrix;
    q.block((b.jprime - 1) * channels, (b.j - 1) * channels, channels, channels) = b.matrix.transpose();
  }
  return q;
}

MvLswSpec piecewise_spec(int channels, int levels, bool include_smooth,
                         const QuadratureMirrorPair& filter,
                         std::vector<PiecewiseSegment> segments) {
  if (segments.empty()) throw ParameterError("piecewise spec needs at least one segment");
  std::sort(segments.begin(), segments.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  if (segments.front().start != 0.0) throw ParameterError("first segment must start at u = 0");

  MvLswSpec spec;
  spec.channels = channels;
  spec.levels = levels;
  spec.include_smooth = include_smooth;
  spec.filter = filter;

  struct Table {
    std::vector<double> starts;
    std::vector<std::vector<Eigen::MatrixXd>> transfer;
    std::vector<Eigen::MatrixXd> innovation;
    std::size_t find(double u) const {
      auto it = std::upper_bound(starts.begin(), starts.end(), u);
      return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - starts.begin()) - 1));
    }
  };
  auto table = std::make_shared<Table>();
  for (auto& s : segments) {
    if (static_cast<int>(s.transfer.size()) != spec.process_levels())
      throw ParameterError("segment must give one transfer matrix per process level");
    table->starts.push_back(s.start);
    table->innovation.push_back(stack_innovation(spec.process_levels(), channels, s.innovation));
    table->transfer.push_back(std::move(s.transfer));
  }
  spec.transfer = [table](int level, double u) { return table->transfer[table->find(u)].at(level - 1); };
  spec.innovation = [table](double u) { return table->innovation[table->find(u)]; };
  return spec;
}

MvLswSpec independent_spec(int channels, int levels, const QuadratureMirrorPair& filter) {
  MvLswSpec spec;
  spec.channels = channels;
  spec.levels = levels;
  spec.filter = filter;
  spec.transfer = [channels](int, double) { return Eigen::MatrixXd::Identity(channels, channels); };
  return spec;
}

Realization simulate_mvlsw(const MvLswSpec& spec, std::size_t length, std::uint64_t seed,
                           double sampling_rate) {
  check_levels(spec.levels, length);
  const int nlev = spec.process_levels();
  const int chans = spec.channels;
  const Eigen::Index dim = static_cast<Eigen::Index>(nlev) * chans;
  const auto n = static_cast<Eigen::Index>(length);
  const DiscreteWaveletSet wavelets = discrete_wavelets(spec.filter, spec.levels);

  Realization out;
  out.seed = seed;
  out.innovations.assign(nlev, Eigen::MatrixXd::Zero(chans, n));
  std::vector<Eigen::MatrixXd> weighted(nlev, Eigen::MatrixXd::Zero(chans, n));

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd cached_cov, factor;
  Eigen::VectorXd e(dim);

  for (Eigen::Index k = 0; k < n; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(length);
    const Eigen::MatrixXd cov = spec.stacked_innovation(u);
    if (cached_cov.size() == 0 || cov != cached_cov) {
      spec.validate_at(u);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
      const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      factor = eig.eigenvectors() * root.asDiagonal();
      cached_cov = cov;
    }
    for (Eigen::Index i = 0; i < dim; ++i) e(i) = normal(rng);
    const Eigen::VectorXd z = factor * e;
    for (int j = 1; j <= nlev; ++j) {
      const Eigen::VectorXd zj = z.segment((j - 1) * chans, chans);
      out.innovations[j - 1].col(k) = zj;
      const Eigen::MatrixXd v = spec.transfer_at(j, u);
      check_lower_triangular(v, j, u);
      weighted[j - 1].col(k) = v * zj;
    }
  }

  out.subprocesses.assign(nlev, Eigen::MatrixXd::Zero(chans, n));
  std::vector<double> src(length), dst(length);
  for (int j = 1; j <= nlev; ++j) {
    const auto& kernel = j <= spec.levels ? wavelets.wavelet(j) : wavelets.scaling;
    for (int p = 0; p < chans; ++p) {
      for (Eigen::Index k = 0; k < n; ++k) src[k] = weighted[j - 1](p, k);
      detail::circular_convolve(src, kernel, dst);
      for (Eigen::Index t = 0; t < n; ++t) out.subprocesses[j - 1](p, t) = dst[t];
    }
  }

  out.series.sampling_rate = sampling_rate;
  out.series.data = Eigen::MatrixXd::Zero(chans, n);
  for (const auto& sub : out.subprocesses) out.series.data += sub;
  return out;
}

CrossScaleSpectrum true_cross_spectrum(const MvLswSpec& spec, const std::vector<double>& u_grid) {
  const int nlev = spec.process_levels();
  const int chans = spec.channels;
  CrossScaleSpectrum out{SpectralTensor(nlev, chans, u_grid.size()), u_grid};
  std::vector<Eigen::MatrixXd> v(nlev);
  for (std::size_t n = 0; n < u_grid.size(); ++n) {
    const double u = u_grid[n];
    const Eigen::MatrixXd q = spec.stacked_innovation(u);
    for (int j = 1; j <= nlev; ++j) v[j - 1] = spec.transfer_at(j, u);
    for (int j = 1; j <= nlev; ++j)
      for (int jp = 1; jp <= nlev; ++jp) {
        const Eigen::MatrixXd s =
            v[j - 1] * q.block((j - 1) * chans, (jp - 1) * chans, chans, chans) * v[jp - 1].transpose();
        for (int p = 0; p < chans; ++p)
          for (int qq = 0; qq < chans; ++qq) out.values(j, jp, p, qq, n) = s(p, qq);
      }
  }
  return out;
}

CoherenceSurface true_coherence(const CrossScaleSpectrum& spectrum) {
  CoherenceSurface surface;
  surface.kind = CoherenceKind::spectral;
  surface.time = spectrum.u_grid;
  const int nlev = spectrum.levels();
  const int chans = spectrum.channels();
  const std::size_t nt = spectrum.values.times();
  for (int j = 1; j <= nlev; ++j)
    for (int jp = 1; jp <= nlev; ++jp)
      for (int p = 0; p < chans; ++p)
        for (int q = 0; q < chans; ++q) {
          CoherenceCurve curve(nt);
          for (std::size_t n = 0; n < nt; ++n) {
            const double a = spectrum(j, j, p, p, n);
            const double b = spectrum(jp, jp, q, q, n);
            if (a > 0.0 && b > 0.0)
              curve[n] = std::clamp(spectrum(j, jp, p, q, n) / std::sqrt(a * b), -1.0, 1.0);
          }
          surface.entries.emplace(CoherencePair{j, p, jp, q}, std::move(curve));
        }
  return surface;
}

}  // namespace mvlsw
