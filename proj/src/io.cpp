#include "mvlsw/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mvlsw/errors.hpp"

namespace mvlsw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& what) {
  if (cell.empty()) throw ParseError("line " + std::to_string(line) + ": missing " + what, line);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError("line " + std::to_string(line) + ": non-numeric " + what + " '" + cell + "'", line);
  return v;
}

std::optional<double> parse_optional(const std::string& cell, std::size_t line, const std::string& what) {
  if (cell == "NA") return std::nullopt;
  return parse_number(cell, line, what);
}

int parse_int(const std::string& cell, std::size_t line, const std::string& what) {
  const double v = parse_number(cell, line, what);
  if (v != std::floor(v)) throw ParseError("line " + std::to_string(line) + ": " + what + " is not an integer", line);
  return static_cast<int>(v);
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

MultichannelSeries read_series_csv(std::istream& in, std::optional<double> sampling_rate) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("empty file", lineno);
  if (header.front() != "time") throw ParseError("line " + std::to_string(lineno) + ": first column must be 'time'", lineno);
  const std::size_t chans = header.size() - 1;
  if (chans == 0) throw ParseError("line " + std::to_string(lineno) + ": no channel columns", lineno);

  std::vector<double> times;
  std::vector<std::vector<double>> cols(chans);
  std::vector<std::size_t> linenos;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                           " cells, found " + std::to_string(cells.size()),
                       lineno);
    times.push_back(parse_number(cells[0], lineno, "time"));
    for (std::size_t c = 0; c < chans; ++c) cols[c].push_back(parse_number(cells[c + 1], lineno, header[c + 1]));
    linenos.push_back(lineno);
  }
  if (times.empty()) throw ParseError("no data rows", lineno);

  MultichannelSeries out;
  out.data.resize(static_cast<Eigen::Index>(chans), static_cast<Eigen::Index>(times.size()));
  for (std::size_t c = 0; c < chans; ++c)
    for (std::size_t t = 0; t < times.size(); ++t)
      out.data(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) = cols[c][t];

  if (times.size() >= 2) {
    const double step = times[1] - times[0];
    if (!(step > 0.0)) throw ParseError("line " + std::to_string(linenos[1]) + ": time must increase", linenos[1]);
    for (std::size_t t = 2; t < times.size(); ++t) {
      const double d = times[t] - times[t - 1];
      if (std::abs(d - step) > 1e-6 * step)
        throw ParseError("line " + std::to_string(linenos[t]) + ": non-uniform time step", linenos[t]);
    }
    out.sampling_rate = 1.0 / step;
  } else if (!sampling_rate) {
    throw ParseError("a single row cannot determine the sampling rate", linenos[0]);
  }
  if (sampling_rate) {
    if (!(*sampling_rate > 0.0)) throw ParameterError("sampling rate must be positive");
    out.sampling_rate = *sampling_rate;
  }
  return out;
}

MultichannelSeries load_csv(const std::string& path, std::optional<double> sampling_rate) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_series_csv(in, sampling_rate);
}

void write_series_csv(std::ostream& out, const MultichannelSeries& series, const std::vector<std::string>& names) {
  if (!names.empty() && names.size() != static_cast<std::size_t>(series.channels()))
    throw ParameterError("column name count does not match channel count");
  out << "time";
  for (int p = 0; p < series.channels(); ++p)
    out << ',' << (names.empty() ? "ch" + std::to_string(p + 1) : names[static_cast<std::size_t>(p)]);
  out << '\n';
  for (std::size_t t = 0; t < series.length(); ++t) {
    out << format_number(static_cast<double>(t) / series.sampling_rate);
    for (int p = 0; p < series.channels(); ++p)
      out << ',' << format_number(series.data(p, static_cast<Eigen::Index>(t)));
    out << '\n';
  }
}

void write_result_table(std::ostream& out, const ResultTable& table) {
  out << kResultHeader << '\n';
  for (const auto& r : table.rows) {
    out << format_number(r.time) << ',' << r.j << ',' << r.jprime << ',' << r.p + 1 << ',' << r.q + 1 << ','
        << (r.value ? format_number(*r.value) : "NA") << ',' << r.kind << ','
        << (r.significant ? (*r.significant ? "1" : "0") : "NA") << '\n';
  }
}

ResultTable read_result_table(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty result table", 0);
  ++lineno;
  if (trim(line) != kResultHeader) throw ParseError("line 1: unexpected result header", 1);
  ResultTable table;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto c = split(line);
    if (c.size() != 8) throw ParseError("line " + std::to_string(lineno) + ": expected 8 cells", lineno);
    ResultRow r;
    r.time = parse_number(c[0], lineno, "time");
    r.j = parse_int(c[1], lineno, "j");
    r.jprime = parse_int(c[2], lineno, "jprime");
    r.p = parse_int(c[3], lineno, "p") - 1;
    r.q = parse_int(c[4], lineno, "q") - 1;
    if (r.j < 1 || r.jprime < 1 || r.p < 0 || r.q < 0)
      throw ParseError("line " + std::to_string(lineno) + ": scale and channel indices start at 1", lineno);
    r.value = parse_optional(c[5], lineno, "value");
    r.kind = c[6];
    if (c[7] == "1") r.significant = true;
    else if (c[7] == "0") r.significant = false;
    else if (c[7] != "NA") throw ParseError("line " + std::to_string(lineno) + ": bad significance flag", lineno);
    table.rows.push_back(std::move(r));
  }
  return table;
}

ResultTable surface_to_table(const CoherenceSurface& surface, double time_scale, const SignificanceMask* mask,
                             bool include_squared) {
  ResultTable table;
  for (int pass = 0; pass < (include_squared ? 2 : 1); ++pass) {
    for (const auto& [pair, entry] : surface.entries) {
      const std::string kind = to_string(surface.kind) + (pass ? "_squared" : "");
      const CoherenceCurve curve = pass ? surface.squared(pair) : entry;
      const std::vector<bool>* m = nullptr;
      if (mask) {
        auto it = mask->find(pair);
        if (it != mask->end()) m = &it->second;
      }
      for (std::size_t t = 0; t < curve.size(); ++t) {
        ResultRow r;
        r.time = surface.time.at(t) * time_scale;
        r.j = pair.j;
        r.jprime = pair.jprime;
        r.p = pair.p;
        r.q = pair.q;
        r.value = curve[t];
        r.kind = kind;
        if (m) r.significant = static_cast<bool>((*m)[t]);
        table.rows.push_back(std::move(r));
      }
    }
  }
  return table;
}

std::pair<double, double> scale_to_band(double fmax, int j) {
  if (!(fmax > 0.0)) throw ParameterError("fmax must be positive");
  if (j < 1) throw ParameterError("scale must be >= 1");
  return {std::ldexp(fmax, -j), std::ldexp(fmax, -(j - 1))};
}

std::vector<std::optional<double>> log_return(const std::vector<double>& prices, int n) {
  if (n < 1) throw ParameterError("return horizon must be >= 1");
  for (std::size_t t = 0; t < prices.size(); ++t)
    if (!(prices[t] > 0.0)) throw DomainError("non-positive price at index " + std::to_string(t));
  std::vector<std::optional<double>> out(prices.size());
  const auto h = static_cast<std::size_t>(n);
  for (std::size_t t = h; t < prices.size(); ++t) out[t] = 100.0 * std::log(prices[t] / prices[t - h]) / n;
  return out;
}

}  // namespace mvlsw
