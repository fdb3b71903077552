#include "mvlsw/wavelet.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "mvlsw/errors.hpp"

namespace mvlsw {

namespace {

using cld = std::complex<long double>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Roots of sum_k coeffs[k] y^k via the companion matrix, each polished with
// a few Newton steps in extended precision.
std::vector<cld> polynomial_roots(const std::vector<double>& coeffs) {
  const int degree = static_cast<int>(coeffs.size()) - 1;
  std::vector<cld> roots;
  if (degree < 1) return roots;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / coeffs[degree];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);

  for (int r = 0; r < degree; ++r) {
    cld y(solver.eigenvalues()[r].real(), solver.eigenvalues()[r].imag());
    for (int iter = 0; iter < 8; ++iter) {
      cld p = 0, dp = 0;
      for (int k = degree; k >= 0; --k) {
        dp = dp * y + p;
        p = p * y + static_cast<long double>(coeffs[k]);
      }
      if (std::abs(dp) == 0.0L) break;
      y -= p / dp;
    }
    roots.push_back(y);
  }
  return roots;
}

}  // namespace

QuadratureMirrorPair build_daubechies_filter(int vanishing_moments) {
  const int n = vanishing_moments;
  if (n < 1 || n > 10) {
    throw ParameterError("Daubechies vanishing moments must be in 1..10, got " +
                         std::to_string(n));
  }

  // |m0|^2 = cos^{2N}(w/2) P(sin^2(w/2)), P(y) = sum_k C(N-1+k, k) y^k.
  std::vector<double> p(n);
  for (int k = 0; k < n; ++k) p[k] = binomial(n - 1 + k, k);

  // Each root y of P maps to z + 1/z = 2 - 4y; keep the zero inside the
  // unit circle (extremal phase).
  std::vector<cld> poly{1.0L};
  auto multiply = [&poly](cld a0, cld a1) {
    std::vector<cld> out(poly.size() + 1, 0.0L);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] += poly[i] * a0;
      out[i + 1] += poly[i] * a1;
    }
    poly = std::move(out);
  };
  for (int k = 0; k < n; ++k) multiply(1.0L, 1.0L);
  for (const cld& y : polynomial_roots(p)) {
    const cld c = 2.0L - 4.0L * y;
    const cld disc = std::sqrt(c * c / 4.0L - 1.0L);
    cld z = c / 2.0L + disc;
    if (std::abs(z) > 1.0L) z = c / 2.0L - disc;
    multiply(1.0L, -z);
  }

  long double sum = 0;
  for (const cld& c : poly) sum += c.real();
  const long double scale = std::sqrt(2.0L) / sum;

  QuadratureMirrorPair out;
  out.vanishing_moments = n;
  out.family_label = n == 1 ? "haar" : "daubechies-extremal-phase-" + std::to_string(n);
  const std::size_t len = poly.size();
  out.low_pass.resize(len);
  for (std::size_t k = 0; k < len; ++k)
    out.low_pass[k] = static_cast<double>(poly[k].real() * scale);
  if (n == 1) out.low_pass = {M_SQRT1_2, M_SQRT1_2};
  out.high_pass.resize(len);
  for (std::size_t k = 0; k < len; ++k)
    out.high_pass[k] = (k % 2 == 0 ? 1.0 : -1.0) * out.low_pass[len - 1 - k];
  return out;
}

DiscreteWaveletSet discrete_wavelets(const QuadratureMirrorPair& filter, int levels) {
  if (levels < 1) throw ParameterError("number of levels must be >= 1");
  if (filter.low_pass.size() < 2 || filter.low_pass.size() != filter.high_pass.size())
    throw ParameterError("malformed quadrature mirror pair");

  const auto& h = filter.low_pass;
  const auto& g = filter.high_pass;
  const std::size_t len = h.size();

  DiscreteWaveletSet set;
  set.levels = levels;
  set.family_label = filter.family_label;
  set.vectors.push_back(g);
  std::vector<double> phi = h;

  for (int j = 1; j < levels; ++j) {
    const std::size_t stride = std::size_t{1} << j;
    const std::size_t out_len = (len - 1) * stride + phi.size();
    std::vector<double> psi(out_len, 0.0), next_phi(out_len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
      for (std::size_t n = 0; n < phi.size(); ++n) {
        psi[n + k * stride] += g[k] * phi[n];
        next_phi[n + k * stride] += h[k] * phi[n];
      }
    }
    set.vectors.push_back(std::move(psi));
    phi = std::move(next_phi);
  }
  set.scaling = std::move(phi);

  auto normalize = [](std::vector<double>& v) {
    double ss = 0;
    for (double c : v) ss += c * c;
    const double inv = 1.0 / std::sqrt(ss);
    for (double& c : v) c *= inv;
  };
  for (auto& v : set.vectors) normalize(v);
  normalize(set.scaling);
  return set;
}

void check_levels(int levels, std::size_t length) {
  if (levels < 1) throw ParameterError("number of levels must be >= 1");
  if (levels >= 63 || (std::size_t{1} << levels) > length) {
    throw ParameterError("J = " + std::to_string(levels) + " too large for T = " +
                         std::to_string(length) + " (need 2^J <= T)");
  }
}

namespace detail {

void circular_correlate(std::span<const double> x, std::span<const double> kernel,
                        std::span<double> out) {
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    std::size_t idx = k;
    for (double c : kernel) {
      acc += c * x[idx];
      if (++idx == n) idx = 0;
    }
    out[k] = acc;
  }
}

void circular_convolve(std::span<const double> x, std::span<const double> kernel,
                       std::span<double> out) {
  const std::size_t n = x.size();
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    std::size_t idx = t;
    for (double c : kernel) {
      acc += c * x[idx];
      idx = idx == 0 ? n - 1 : idx - 1;
    }
    out[t] = acc;
  }
}

}  // namespace detail

Eigen::MatrixXd nondecimated_transform(std::span<const double> x,
                                       const DiscreteWaveletSet& wavelets) {
  const int levels = wavelets.levels;
  check_levels(levels, x.size());
  const auto n = static_cast<Eigen::Index>(x.size());
  // Row-major so each row is contiguous for the span-based kernels.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(levels + 1, n);
  for (int j = 1; j <= levels; ++j)
    detail::circular_correlate(x, wavelets.wavelet(j), {out.row(j - 1).data(), x.size()});
  detail::circular_correlate(x, wavelets.scaling, {out.row(levels).data(), x.size()});
  return out;
}

Eigen::MatrixXd nondecimated_transform(std::span<const double> x,
                                       const QuadratureMirrorPair& filter, int levels) {
  check_levels(levels, x.size());
  return nondecimated_transform(x, discrete_wavelets(filter, levels));
}

double transform_energy(const Eigen::MatrixXd& coefficients) {
  const auto levels = coefficients.rows() - 1;
  double energy = 0.0;
  for (Eigen::Index j = 0; j < levels; ++j)
    energy += std::ldexp(coefficients.row(j).squaredNorm(), -static_cast<int>(j + 1));
  energy += std::ldexp(coefficients.row(levels).squaredNorm(), -static_cast<int>(levels));
  return energy;
}

Eigen::MatrixXd mra_decompose(std::span<const double> x, const DiscreteWaveletSet& wavelets) {
  const int levels = wavelets.levels;
  check_levels(levels, x.size());
  const std::size_t n = x.size();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(levels + 1, n);
  std::vector<double> coeffs(n);

  auto component = [&](const std::vector<double>& kernel, int row, int scale_exp) {
    detail::circular_correlate(x, kernel, coeffs);
    std::span<double> dst{out.row(row).data(), n};
    detail::circular_convolve(coeffs, kernel, dst);
    const double w = std::ldexp(1.0, -scale_exp);
    for (double& v : dst) v *= w;
  };
  for (int j = 1; j <= levels; ++j) component(wavelets.wavelet(j), j - 1, j);
  component(wavelets.scaling, levels, levels);
  return out;
}

Eigen::MatrixXd mra_decompose(std::span<const double> x, const QuadratureMirrorPair& filter,
                              int levels) {
  check_levels(levels, x.size());
  return mra_decompose(x, discrete_wavelets(filter, levels));
}

}  // namespace mvlsw
