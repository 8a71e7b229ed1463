#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "compdbn/analysis.hpp"
#include "compdbn/profiles.hpp"

using namespace compdbn;

namespace {

EstimateSeries series(std::vector<double> v, int first_week = 1) {
  std::vector<std::pair<int, double>> pts;
  for (std::size_t i = 0; i < v.size(); ++i) pts.emplace_back(first_week + static_cast<int>(i), v[i]);
  return EstimateSeries(std::move(pts));
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("quartiles") {
  const std::vector<double> one{1.0};
  const Quartiles a = quartiles(one);
  CHECK(a.q1 == 1.0);
  CHECK(a.median == 1.0);
  CHECK(a.q3 == 1.0);

  const std::vector<double> three{2.0, 0.0, 1.0};
  const Quartiles b = quartiles(three);
  CHECK(b.q1 == doctest::Approx(0.5));
  CHECK(b.median == doctest::Approx(1.0));
  CHECK(b.q3 == doctest::Approx(1.5));

  const std::vector<double> five{0, 0, 0.5, 0.5, 1};
  const Quartiles c = quartiles(five);
  CHECK(c.q1 == doctest::Approx(0.0));
  CHECK(c.median == doctest::Approx(0.5));
  CHECK(c.q3 == doctest::Approx(0.5));
  CHECK(c.iqr() == doctest::Approx(0.5));

  CHECK_THROWS_AS(quartiles(std::vector<double>{}), AnalysisError);
}

TEST_CASE("iqr consistency") {
  const IqrSummary same = iqr_consistency({{1, 1, 1, 1}, {0.5, 0.5}});
  CHECK(same.median == 0.0);
  CHECK(same.max == 0.0);

  // Per-question IQRs of 0.2 and 0.6.
  const IqrSummary two = iqr_consistency({{0.0, 0.2, 0.4}, {0.0, 0.6, 1.2}});
  CHECK(two.min == doctest::Approx(0.2));
  CHECK(two.max == doctest::Approx(0.6));
  CHECK(two.median == doctest::Approx(0.4));

  CHECK_THROWS_AS(iqr_consistency({}), AnalysisError);
  CHECK_THROWS_AS(iqr_consistency({{}}), AnalysisError);
}

TEST_CASE("pearson") {
  const EstimateSeries a = series({0.2, 1.0, 0.7, 1.9, 1.3});
  CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> neg;
  for (double x : a.values()) neg.push_back(2.0 - x);
  CHECK(pearson(a, series(neg)) == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK_THROWS_AS(pearson(a, series({1.0, 1.0, 1.0, 1.0, 1.0})), AnalysisError);
  CHECK_THROWS_AS(pearson(a, series({1.0, 0.5})), AnalysisError);
  CHECK_THROWS_AS(pearson(series({1.0}), series({0.5})), AnalysisError);
  CHECK_THROWS_AS(pearson(a, series({0.2, 1.0, 0.7, 1.9, 1.3}, 3)), AnalysisError);
}

TEST_CASE("coverage") {
  const EstimateSeries s = series({0.5, 1.0, 1.5});
  CHECK(range_coverage(s, s, s) == 1.0);
  CHECK(range_coverage(s, series({1.6, 1.6, 1.6}), series({2.0, 2.0, 2.0})) == 0.0);
  CHECK(range_coverage(s, series({0.0, 1.2, 0.0}), series({0.5, 2.0, 1.0})) ==
        doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(range_coverage(s, series({0.0, 0.0}), series({1.0, 1.0})), AnalysisError);
}

TEST_CASE("series validation") {
  CHECK_THROWS_AS(EstimateSeries({{1, 0.5}, {1, 0.7}}), AnalysisError);
  CHECK_THROWS_AS(EstimateSeries({{2, 0.5}, {1, 0.7}}), AnalysisError);
  CHECK_THROWS_AS(EstimateSeries({{1, 2.5}}), AnalysisError);
  CHECK_THROWS_AS(EstimateSeries({{1, -0.1}}), AnalysisError);
}

TEST_CASE("property: statistics invariants") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 20;
    const auto x = random_values(rng, n);
    const auto y = random_values(rng, n);
    const EstimateSeries a = series(x), b = series(y);

    const double r = pearson(a, b);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(std::abs(r - pearson(b, a)) <= 1e-12);

    // Positive affine maps that stay inside [0, 2] preserve r.
    const double scale = 0.1 + 0.8 * u(rng);
    const double shift = (2.0 - 2.0 * scale) * u(rng);
    std::vector<double> z;
    for (double v : y) z.push_back(scale * v + shift);
    CHECK(std::abs(pearson(a, series(z)) - r) <= 1e-9);

    const Quartiles q = quartiles(x);
    CHECK(q.q1 <= q.median);
    CHECK(q.median <= q.q3);
    CHECK(q.iqr() >= 0.0);

    std::vector<double> lo, hi;
    for (std::size_t i = 0; i < n; ++i) {
      lo.push_back(std::min(x[i], y[i]));
      hi.push_back(std::max(x[i], y[i]));
    }
    const double cov = range_coverage(series(z), series(lo), series(hi));
    CHECK(cov >= 0.0);
    CHECK(cov <= 1.0);
    CHECK(range_coverage(series(lo), series(lo), series(hi)) == 1.0);
  }
}

TEST_CASE("certainty inversion") {
  CHECK(certainty_to_uncertainty(2.0) == 0.0);
  CHECK(certainty_to_uncertainty(0.0) == 1.0);
  CHECK(certainty_to_uncertainty(1.5) == doctest::Approx(0.25));
}

TEST_CASE("reference CSV") {
  const auto refs = parse_reference_csv(
      "profile,week,competence,respondent,estimate,certainty\nL2M,3,a,t1,1.5,2\n");
  REQUIRE(refs.size() == 1);
  CHECK(refs[0].respondent == "t1");
  CHECK(refs[0].estimate == 1.5);
  CHECK_THROWS_AS(parse_reference_csv("profile,week,competence,respondent,estimate,certainty\n"
                                      "L2M,3,a,t1,2.5,2\n"),
                  AnalysisError);
  CHECK_THROWS(parse_reference_csv("profile,week,competence\n"));
}

TEST_CASE("analyze a system trace against itself") {
  const auto rows = run_profile(bundled_submap(), builtin_profile("L2M"));
  std::vector<TeacherResponse> refs;
  for (const auto& r : rows)
    if (r.competence == "propose" || r.competence == "contribute_to_project")
      for (const char* who : {"t1", "t2", "t3"})
        refs.push_back({"L2M", r.week, r.competence, who, r.average, 2.0 - 2.0 * r.uncertainty});

  const AnalysisReport rep = analyze(rows, refs);
  REQUIRE(rep.competences.size() == 2);
  for (const auto& c : rep.competences) {
    CHECK(c.pearson_r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.coverage == 1.0);
    CHECK(c.weeks.size() == 17);
    for (const auto& w : c.weeks)
      CHECK(std::abs(w.teacher_uncertainty_median - w.system_uncertainty) <= 1e-12);
  }
  CHECK(rep.estimate_consistency.max == 0.0);

  const std::string csv_text = report_csv(rep);
  CHECK(csv_text.rfind("competence,weeks,pearson_r,coverage,system_mean,teacher_median_mean\n", 0) == 0);
  CHECK(report_text(rep).find("contribute_to_project") != std::string::npos);

  auto two = refs;
  two.push_back({"M2H", 1, "propose", "t1", 1.0, 1.0});
  CHECK_THROWS_AS(analyze(rows, two), AnalysisError);
  CHECK_NOTHROW(analyze(rows, two, "L2M"));
  CHECK_THROWS_AS(analyze(rows, two, "LT_M2H"), AnalysisError);

  auto late = refs;
  late.push_back({"L2M", 40, "propose", "t1", 1.0, 1.0});
  CHECK_THROWS_AS(analyze(rows, late), AnalysisError);
}
