#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvlsw/coherence_surface.hpp"
#include "mvlsw/inference.hpp"
#include "mvlsw/series.hpp"

namespace mvlsw {

/// Reads `time,ch1,...,chP` with a uniform time step. The sampling rate is
/// 1/step unless `sampling_rate` is given. Throws ParseError carrying the
/// 1-based line number of the offending row.
MultichannelSeries load_csv(const std::string& path, std::optional<double> sampling_rate = std::nullopt);
MultichannelSeries read_series_csv(std::istream& in, std::optional<double> sampling_rate = std::nullopt);

/// Writes `time,<names...>` with time = t / sampling_rate. Names default to
/// ch1..chP.
void write_series_csv(std::ostream& out, const MultichannelSeries& series,
                      const std::vector<std::string>& names = {});

/// Decimal text with 15 significant digits.
std::string format_number(double v);

/// One long-format output row. Channels are 0-based here and 1-based on disk.
struct ResultRow {
  double time = 0.0;
  int j = 1;
  int jprime = 1;
  int p = 0;
  int q = 0;
  std::optional<double> value;
  std::string kind;
  std::optional<bool> significant;

  bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

inline constexpr const char* kResultHeader = "time,j,jprime,p,q,value,kind,significant";

/// Missing values and unknown significance are written as NA.
void write_result_table(std::ostream& out, const ResultTable& table);
ResultTable read_result_table(std::istream& in);

/// One row per (pair, grid point). `time_scale` converts the surface grid to
/// output units (1 / sampling rate for sample-indexed grids). With
/// `include_squared` a second block of rows carries rho^2 under kind
/// "<kind>_squared".
ResultTable surface_to_table(const CoherenceSurface& surface, double time_scale,
                             const SignificanceMask* mask = nullptr, bool include_squared = false);

/// Frequency band (Hz) covered by scale j when the top of scale 1 is fmax:
/// (fmax / 2^j, fmax / 2^(j-1)).
std::pair<double, double> scale_to_band(double fmax, int j);

/// R_t = 100 ln(V_t / V_{t-n}) / n in percent; the first n entries are
/// undefined. Non-positive prices throw DomainError.
std::vector<std::optional<double>> log_return(const std::vector<double>& prices, int n);

}  // namespace mvlsw
