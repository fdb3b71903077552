#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mvlsw {

/// P x T observations; row p is channel p.
struct MultichannelSeries {
  Eigen::MatrixXd data;
  double sampling_rate = 1.0;

  int channels() const { return static_cast<int>(data.rows()); }
  std::size_t length() const { return static_cast<std::size_t>(data.cols()); }
  std::vector<double> channel(int p) const {
    std::vector<double> out(length());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = data(p, static_cast<Eigen::Index>(t));
    return out;
  }
};

/// Scale-specific components, one P x T matrix per level; index level - 1.
/// When produced by an MRA the last entry is the smooth.
using Subprocesses = std::vector<Eigen::MatrixXd>;

}  // namespace mvlsw
