#include "mvlsw/inner_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mvlsw/errors.hpp"

namespace mvlsw {

AutocorrTable::AutocorrTable(const DiscreteWaveletSet& wavelets) : levels_(wavelets.levels) {
  const int levels = levels_;
  values_.resize(static_cast<std::size_t>(levels) * levels);
  offsets_.resize(values_.size());
  for (int j = 1; j <= levels; ++j) {
    const auto& a = wavelets.wavelet(j);
    for (int jp = 1; jp <= levels; ++jp) {
      const auto& b = wavelets.wavelet(jp);
      const int la = static_cast<int>(a.size());
      const int lb = static_cast<int>(b.size());
      std::vector<double> v(la + lb - 1, 0.0);
      // tau = m - n for a[n] b[m]; stored at tau + (la - 1)
      for (int n = 0; n < la; ++n)
        for (int m = 0; m < lb; ++m) v[m - n + la - 1] += a[n] * b[m];
      const auto idx = static_cast<std::size_t>(pair_index(j, jp, levels));
      values_[idx] = std::move(v);
      offsets_[idx] = la - 1;
    }
  }
}

int AutocorrTable::offset(int j, int jprime) const {
  return offsets_.at(static_cast<std::size_t>(pair_index(j, jprime, levels_)));
}

const std::vector<double>& AutocorrTable::entry(int j, int jprime) const {
  return values_.at(static_cast<std::size_t>(pair_index(j, jprime, levels_)));
}

int AutocorrTable::max_lag(int j, int jprime) const {
  return static_cast<int>(entry(j, jprime).size()) - 1 - offset(j, jprime);
}

double AutocorrTable::operator()(int j, int jprime, int tau) const {
  if (j < 1 || j > levels_ || jprime < 1 || jprime > levels_) return 0.0;
  const auto& v = entry(j, jprime);
  const int i = tau + offset(j, jprime);
  if (i < 0 || i >= static_cast<int>(v.size())) return 0.0;
  return v[static_cast<std::size_t>(i)];
}

double condition_number(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

InnerProductOperator inner_product_operator(const AutocorrTable& table, int lag) {
  const int levels = table.levels();
  const Eigen::Index n = static_cast<Eigen::Index>(levels) * levels;
  InnerProductOperator op;
  op.levels = levels;
  op.lag = lag;
  op.matrix.resize(n, n);
  for (int j = 1; j <= levels; ++j)
    for (int jp = 1; jp <= levels; ++jp)
      for (int l = 1; l <= levels; ++l)
        for (int lp = 1; lp <= levels; ++lp) {
          const int lo = std::max(table.min_lag(j, jp), table.min_lag(l, lp) - lag);
          const int hi = std::min(table.max_lag(j, jp), table.max_lag(l, lp) - lag);
          double acc = 0.0;
          for (int tau = lo; tau <= hi; ++tau) acc += table(j, jp, tau) * table(l, lp, tau + lag);
          op.matrix(pair_index(j, jp, levels), pair_index(l, lp, levels)) = acc;
        }
  op.condition_number = condition_number(op.matrix);
  return op;
}

Eigen::MatrixXd invert_matrix(const Eigen::MatrixXd& m, double* cond_out) {
  const double cond = condition_number(m);
  if (cond_out) *cond_out = cond;
  if (!(cond <= kMaxOperatorCondition)) {
    std::ostringstream msg;
    msg << "inner-product operator is singular or ill-conditioned (condition number " << cond
        << " exceeds " << kMaxOperatorCondition << ")";
    throw SingularOperatorError(msg.str(), cond);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.inverse();
}

InverseOperator invert_inner_product(const InnerProductOperator& op) {
  InverseOperator inv;
  inv.levels = op.levels;
  inv.lag = op.lag;
  Eigen::MatrixXd m = invert_matrix(op.matrix);

  if (op.lag == 0) {
    const int levels = op.levels;
    const Eigen::Index n = m.rows();
    auto swapped = [levels](Eigen::Index a) {
      const int j = static_cast<int>(a / levels) + 1;
      const int jp = static_cast<int>(a % levels) + 1;
      return pair_index(jp, j, levels);
    };
    Eigen::MatrixXd sym(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) {
        const Eigen::Index sa = swapped(a), sb = swapped(b);
        // Operand order chosen so every orbit member sums the same pairs.
        const double x = m(a, b) + m(b, a);
        const double y = m(sa, sb) + m(sb, sa);
        sym(a, b) = 0.25 * (std::min(x, y) + std::max(x, y));
      }
    m = std::move(sym);
  }

  const Eigen::MatrixXd residual = m * op.matrix - Eigen::MatrixXd::Identity(m.rows(), m.cols());
  if (residual.cwiseAbs().rowwise().sum().maxCoeff() > 1e-8) {
    throw SingularOperatorError("inverse residual exceeds 1e-8", op.condition_number);
  }
  inv.matrix = std::move(m);
  return inv;
}

}  // namespace mvlsw
