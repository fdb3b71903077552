#include <doctest.h>

#include <cmath>

#include "mvlsw/coherence.hpp"
#include "mvlsw/errors.hpp"
#include "oracles.hpp"

using namespace mvlsw;

namespace {

Subprocesses one_level(const std::vector<std::vector<double>>& channels) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(channels.size()), static_cast<Eigen::Index>(channels.front().size()));
  for (std::size_t p = 0; p < channels.size(); ++p)
    for (std::size_t t = 0; t < channels[p].size(); ++t)
      m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(t)) = channels[p][t];
  return {m};
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = oracle::mean(x), my = oracle::mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("pair text format") {
  const auto p = parse_pair("3:1-1:3");
  CHECK(p.j == 3);
  CHECK(p.p == 0);
  CHECK(p.jprime == 1);
  CHECK(p.q == 2);
  CHECK(format_pair(p) == "3:1-1:3");
  CHECK(p.transposed() == CoherencePair{1, 2, 3, 0});
  for (const char* bad : {"", "1:1", "1-1:2", "1:1-2", "0:1-1:1", "1:0-1:1", "1:1-1:2x", "a:1-1:1"})
    CHECK_THROWS_AS(parse_pair(bad), ParameterError);
}

TEST_CASE("window geometry") {
  const auto s = window_starts(100, 50, 10, 0, 0);
  CHECK(s == std::vector<std::size_t>{0, 10, 20, 30, 40, 50});
  CHECK(window_starts(100, 50, 10, 5, 0).back() == 40);
  CHECK(window_starts(100, 50, 10, 0, 5).front() == 5);
  CHECK_THROWS_AS(window_starts(10, 20, 1, 0, 0), ParameterError);
  CHECK_THROWS_AS(window_starts(10, 5, 0, 0, 0), ParameterError);
}

TEST_CASE("series against itself has unit coherence") {
  const auto x = oracle::gaussian(300, 3);
  const auto subs = one_level({x, x});
  const auto c = windowed_coherence(subs, {{1, 0, 1, 0}, {1, 0, 1, 1}}, 50, 10, 0);
  CHECK(c.kind == CoherenceKind::windowed);
  CHECK(c.window == 50);
  CHECK(c.step == 10);
  REQUIRE(c.time.size() == 26);
  CHECK(c.time.front() == 24.5);
  for (const auto& [pair, curve] : c.entries)
    for (const auto& v : curve) CHECK(*v == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& v : c.squared({1, 0, 1, 1})) CHECK(*v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("windowed coherence matches direct Pearson with lag") {
  const auto x = oracle::gaussian(200, 4), y = oracle::gaussian(200, 5);
  const auto subs = one_level({x, y});
  for (int lag : {0, 7, -3}) {
    const auto c = windowed_coherence(subs, {{1, 0, 1, 1}}, 40, 15, lag);
    const auto& curve = c.at({1, 0, 1, 1});
    const auto starts = window_starts(200, 40, 15, std::max(0, lag), std::max(0, -lag));
    REQUIRE(curve.size() == starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
      std::vector<double> a(x.begin() + static_cast<long>(starts[i]), x.begin() + static_cast<long>(starts[i]) + 40);
      std::vector<double> b(y.begin() + static_cast<long>(starts[i]) + lag,
                            y.begin() + static_cast<long>(starts[i]) + lag + 40);
      CHECK(std::abs(*curve[i] - pearson(a, b)) < 1e-12);
    }
  }
}

TEST_CASE("zero-variance windows are undefined") {
  auto x = oracle::gaussian(100, 6);
  std::vector<double> y(100, 2.0);
  for (int t = 60; t < 100; ++t) y[t] = x[t];
  const auto c = windowed_coherence(one_level({x, y}), {{1, 0, 1, 1}}, 20, 20, 0);
  const auto& curve = c.at({1, 0, 1, 1});
  CHECK_FALSE(curve[0].has_value());
  CHECK_FALSE(curve[2].has_value());
  CHECK(curve[3].has_value());
  CHECK(c.undefined_count() == 3);
}

TEST_CASE("missing scale or channel is a parameter error") {
  const auto subs = one_level({oracle::gaussian(100, 1)});
  CHECK_THROWS_AS(windowed_coherence(subs, {{2, 0, 1, 0}}, 20, 5, 0), ParameterError);
  CHECK_THROWS_AS(windowed_coherence(subs, {{1, 0, 1, 1}}, 20, 5, 0), ParameterError);
}

TEST_CASE("partial coherence") {
  const std::size_t n = 20000;
  const auto c = oracle::gaussian(n, 10), e1 = oracle::gaussian(n, 11), e2 = oracle::gaussian(n, 12);
  std::vector<double> a(n), b(n);
  // corr(e1, e1 / 2 + sqrt(3)/2 e2) = 1/2, so corr(a, b | c) = 1/2
  for (std::size_t t = 0; t < n; ++t) {
    a[t] = 1.5 * c[t] + e1[t];
    b[t] = -0.8 * c[t] + 0.5 * e1[t] + std::sqrt(0.75) * e2[t];
  }
  const auto subs = one_level({a, b, c});
  const std::vector<CoherencePair> pair{{1, 0, 1, 1}};

  SUBCASE("empty control set equals plain windowed coherence") {
    const auto p = partial_windowed_coherence(subs, pair, {}, 50, 25, 2);
    const auto w = windowed_coherence(subs, pair, 50, 25, 2);
    CHECK(p.kind == CoherenceKind::partial);
    CHECK(p.at(pair[0]) == w.at(pair[0]));
    CHECK(p.time == w.time);
  }
  SUBCASE("known partial correlation is recovered") {
    const auto p = partial_windowed_coherence(subs, pair, {{{1, 2}, 0}}, 100, 100, 0);
    const auto& curve = p.at(pair[0]);
    REQUIRE(curve.size() == 200);
    double mean = 0;
    for (const auto& v : curve) mean += *v / 200.0;
    CHECK(std::abs(mean - 0.5) < 0.1);
    // the plain correlation is far from 1/2 here
    const auto w = windowed_coherence(subs, pair, 100, 100, 0);
    double plain = 0;
    for (const auto& v : w.at(pair[0])) plain += *v / 200.0;
    CHECK(std::abs(plain - 0.5) > 0.2);
  }
  SUBCASE("control identical to a pair member is singular") {
    const auto p = partial_windowed_coherence(subs, pair, {{{1, 0}, 0}}, 100, 100, 0);
    for (const auto& v : p.at(pair[0])) CHECK_FALSE(v.has_value());
  }
  SUBCASE("lagged controls shrink the usable range") {
    const auto p = partial_windowed_coherence(subs, pair, {{{1, 2}, -30}}, 100, 100, 10);
    CHECK(p.time.front() == 30 + 49.5);
  }
}
