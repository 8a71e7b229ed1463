#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "compdbn/metrics.hpp"

using namespace compdbn;

TEST_CASE("average") {
  CHECK(average(kUniform) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(average({0, 0, 1}) == 2.0);
  CHECK(average({0.6, 0.3, 0.1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(average({0.5, 0.5, 0.5}), MetricError);
  CHECK_THROWS_AS(average({1.2, -0.2, 0.0}), MetricError);
}

TEST_CASE("uncertainty") {
  CHECK(uncertainty(kUniform) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(uncertainty({1, 0, 0}) == 0.0);
  CHECK(uncertainty({0.5, 0.5, 0}) == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-15));
  CHECK(uncertainty({0.5, 0.5, 0}) == doctest::Approx(0.6309).epsilon(1e-4));
  CHECK_THROWS_AS(uncertainty({0.2, 0.2, 0.2}), MetricError);
}

TEST_CASE("property: bounds, permutation invariance, extremes") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (i % 10 == 0) c = 0.0;
    const double s = a + b + c;
    Distribution p{a / s, b / s, c / s};
    const double h = uncertainty(p);
    CHECK(h >= 0.0);
    CHECK(h <= 1.0);
    CHECK(average(p) >= 0.0);
    CHECK(average(p) <= 2.0);
    CHECK(std::abs(average(p) - (p[1] + 2 * p[2])) <= 1e-12);
    Distribution q = p;
    std::sort(q.begin(), q.end());
    do {
      CHECK(std::abs(uncertainty(q) - h) <= 1e-12);
    } while (std::next_permutation(q.begin(), q.end()));
    CHECK(h < 1.0 - 1e-9);  // random draws are never exactly uniform
  }
  for (std::size_t k = 0; k < 3; ++k) {
    Distribution point{0, 0, 0};
    point[k] = 1.0;
    CHECK(uncertainty(point) == 0.0);
  }
  // Average carries order: swapping Low and High changes it.
  CHECK(average({0.7, 0.2, 0.1}) != average({0.1, 0.2, 0.7}));
}

TEST_CASE("trace row") {
  const TraceRow r = make_trace_row(3, "x", {0.25, 0.5, 0.25});
  CHECK(r.week == 3);
  CHECK(r.average == doctest::Approx(1.0));
  CHECK(r.uncertainty == doctest::Approx(uncertainty({0.25, 0.5, 0.25})));
}
