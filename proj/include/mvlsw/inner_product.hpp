#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mvlsw/wavelet.hpp"

namespace mvlsw {

/// Cross-scale autocorrelation wavelets
///   Psi_{jj'}(tau) = sum_k psi_{j,k}(0) psi_{j',k}(tau) = sum_n psi_j(n) psi_j'(n + tau),
/// stored exactly over the joint support tau in [-(L_j - 1), L_j' - 1].
class AutocorrTable {
 public:
  AutocorrTable() = default;
  explicit AutocorrTable(const DiscreteWaveletSet& wavelets);

  int levels() const { return levels_; }
  /// Zero outside the joint support.
  double operator()(int j, int jprime, int tau) const;
  int min_lag(int j, int jprime) const { return -offset(j, jprime); }
  int max_lag(int j, int jprime) const;

 private:
  int offset(int j, int jprime) const;
  const std::vector<double>& entry(int j, int jprime) const;

  int levels_ = 0;
  std::vector<std::vector<double>> values_;  // (j-1)*J + (j'-1)
  std::vector<int> offsets_;
};

/// Row/column index of the scale pair (j, j') in a J^2 x J^2 operator.
inline Eigen::Index pair_index(int j, int jprime, int levels) {
  return static_cast<Eigen::Index>(j - 1) * levels + (jprime - 1);
}

/// A^delta_{jj';ll'} = sum_tau Psi_{jj'}(tau) Psi_{ll'}(tau + delta), rows indexed
/// by (j, j'), columns by (l, l').
struct InnerProductOperator {
  int levels = 0;
  int lag = 0;
  Eigen::MatrixXd matrix;
  double condition_number = 0.0;
};

InnerProductOperator inner_product_operator(const AutocorrTable& table, int lag);

struct InverseOperator {
  int levels = 0;
  int lag = 0;
  Eigen::MatrixXd matrix;
};

/// Largest condition number accepted by invert_inner_product.
inline constexpr double kMaxOperatorCondition = 1e8;

/// Inverse via column-pivoted QR. Throws SingularOperatorError (carrying the
/// condition number) when the operator is ill-conditioned beyond
/// kMaxOperatorCondition; no pseudo-inverse fallback.
///
/// At lag 0 the result is symmetrized over the two exact symmetries of A
/// (transpose, and swapping the members of both scale pairs) so that the
/// corrected spectrum keeps S_{jj'}^{(p,q)} = S_{j'j}^{(q,p)} bit-for-bit.
InverseOperator invert_inner_product(const InnerProductOperator& op);

/// Overload for raw matrices (used for round-trip checks).
Eigen::MatrixXd invert_matrix(const Eigen::MatrixXd& m, double* condition_number = nullptr);

double condition_number(const Eigen::MatrixXd& m);

}  // namespace mvlsw
