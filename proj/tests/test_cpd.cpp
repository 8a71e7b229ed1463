#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "compdbn/cpd.hpp"

using namespace compdbn;

namespace {

// Published values of the fuzzy terms.
constexpr double kLarge = 0.5;
constexpr double kMedium = 0.15865525393145707;
constexpr double kSmall = 0.02275013194817919;
constexpr double kVerySmall = 0.00134989803163009;
constexpr double kTiny = 0.00003167124183311;

void check_column_stochastic(const ConditionalTable& t) {
  for (std::size_t c = 0; c < t.column_count(); ++c) {
    const auto col = t.column(c);
    CHECK(std::abs(col[0] + col[1] + col[2] - 1.0) <= 1e-12);
  }
}

Distribution normalized(double a, double b, double c) {
  const double s = a + b + c;
  return {a / s, b / s, c / s};
}

void check_column(const ConditionalTable& t, std::size_t col, const Distribution& expected,
                  double tol = 1e-14) {
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(t.column(col)[i] - expected[i]) <= tol);
}

// Counts, over all 3^n sub-competence configurations containing at least one
// Low, how often the first sub-competence holds each level.
std::array<long long, 3> count_low_configurations(int n) {
  std::array<long long, 3> counts{0, 0, 0};
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    int first = static_cast<int>(c % 3);
    bool any_low = false;
    for (int i = 0; i < n; ++i) {
      if (c % 3 == 0) any_low = true;
      c /= 3;
    }
    if (any_low) ++counts[static_cast<std::size_t>(first)];
  }
  return counts;
}

}  // namespace

TEST_CASE("phi reproduces the fuzzy term values") {
  CHECK(phi(0.0) == 0.5);
  CHECK(std::abs(phi(-1.0) - kMedium) <= 1e-15);
  CHECK(std::abs(phi(-2.0) - kSmall) <= 1e-15);
  CHECK(std::abs(phi(-3.0) - kVerySmall) <= 1e-15);
  CHECK(std::abs(phi(-4.0) - kTiny) <= 1e-15);
  CHECK(fuzzy_value(FuzzyTerm::Large) == 0.5);
}

TEST_CASE("property: phi is strictly increasing and fuzzy terms decrease") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(phi(a) < phi(b));
  }
  for (std::size_t i = 1; i < kAllFuzzyTerms.size(); ++i)
    CHECK(fuzzy_value(kAllFuzzyTerms[i]) < fuzzy_value(kAllFuzzyTerms[i - 1]));
  for (FuzzyTerm t : kAllFuzzyTerms) {
    CHECK(fuzzy_value(t) > 0.0);
    CHECK(fuzzy_value(t) <= 0.5);
  }
}

TEST_CASE("specialization table") {
  const ConditionalTable t = specialization_table();
  CHECK(t.raw_entry(Level::Low, 0) == 0.5);
  CHECK(std::abs(kLarge + kSmall + kVerySmall - 0.52410003) < 1e-8);
  check_column(t, 0, normalized(kLarge, kSmall, kVerySmall));
  check_column(t, 1, normalized(kMedium, kLarge, kSmall));
  check_column(t, 2, normalized(kSmall, kLarge, kMedium));
  check_column_stochastic(t);
}

TEST_CASE("inclusion table closed forms") {
  const ConditionalTable t2 = inclusion_table(2);
  check_column(t2, 0, {3.0 / 5, 1.0 / 5, 1.0 / 5});
  check_column(t2, 1, {1.0 / 4, 1.0 / 2, 1.0 / 4});
  check_column(t2, 2, normalized(kVerySmall, kSmall, kLarge));
  check_column_stochastic(t2);

  // n = 1 has structural zeros, floored at Tiny before normalization.
  const ConditionalTable t1 = inclusion_table(1);
  CHECK(t1.raw_entry(Level::High, 1) == doctest::Approx(kTiny).epsilon(1e-12));
  check_column(t1, 1, normalized(0.5, 0.5, kTiny));
  check_column(t1, 0, normalized(1.0, kTiny, kTiny));

  CHECK_THROWS_AS(inclusion_table(0), CpdError);
  CHECK_THROWS_AS(inclusion_table(-3), CpdError);
}

TEST_CASE("property: inclusion Low/Medium columns sum to one exactly for n = 1..8") {
  for (int n = 1; n <= 8; ++n) {
    for (Level parent : {Level::Low, Level::Medium}) {
      long long num = 0;
      long long den = 0;
      for (Level child : kAllLevels) {
        const Fraction f = inclusion_fraction(n, child, parent);
        if (den == 0) den = f.denominator;
        REQUIRE(f.denominator == den);
        num += f.numerator;
      }
      CHECK(num == den);
    }
    // The Low column is the brute-force count over sub-competence configurations.
    const auto counts = count_low_configurations(n);
    const long long total = counts[0] + counts[1] + counts[2];
    for (Level child : kAllLevels) {
      const Fraction f = inclusion_fraction(n, child, Level::Low);
      CHECK(f.numerator * total == counts[to_index(child)] * f.denominator);
    }
    if (n >= 2) {
      const ConditionalTable t = inclusion_table(n);
      for (std::size_t col = 0; col < 2; ++col) {
        double raw = 0.0;
        for (Level child : kAllLevels) raw += t.raw_entry(child, col);
        CHECK(std::abs(raw - 1.0) <= 1e-12);
      }
    }
    check_column_stochastic(inclusion_table(n));
  }
}

TEST_CASE("evidence table") {
  const ConditionalTable t = evidence_table();
  CHECK(std::abs(t.raw_entry(Level::High, 0) - kVerySmall) <= 1e-15);
  const double medium_sum = t.raw_entry(Level::Low, 1) + t.raw_entry(Level::Medium, 1) +
                            t.raw_entry(Level::High, 1);
  CHECK(std::abs(medium_sum - (2 * kMedium + 0.5)) <= 1e-15);
  CHECK(std::abs(medium_sum - 0.81731050786) <= 1e-10);
  check_column(t, 0, normalized(kLarge, kSmall, kVerySmall));
  check_column(t, 1, normalized(kMedium, kLarge, kMedium));
  check_column(t, 2, normalized(kSmall, kMedium, kLarge));
  check_column_stochastic(t);
}

TEST_CASE("temporal table") {
  const ConditionalTable t = temporal_table();
  CHECK(std::abs(t.raw_entry(Level::High, 0) - kTiny) <= 1e-15);
  for (Level l : kAllLevels) CHECK(t.raw_entry(l, to_index(l)) == 0.5);
  const double high_sum = kTiny + kVerySmall + kLarge;
  CHECK(std::abs(high_sum - 0.5013816) < 1e-7);
  CHECK(std::abs(t.entry(Level::Medium, 2) - kVerySmall / high_sum) <= 1e-15);
  CHECK(std::abs(t.entry(Level::Medium, 2) - 0.002692) < 1e-6);
  check_column(t, 0, normalized(kLarge, kVerySmall, kTiny));
  check_column(t, 1, normalized(kVerySmall, kLarge, kTiny));
  check_column(t, 2, normalized(kTiny, kVerySmall, kLarge));
  check_column_stochastic(t);
}

TEST_CASE("temporal relaxation scales off-diagonal sigmas") {
  const ConditionalTable relaxed = temporal_table(0.5);
  CHECK(std::abs(relaxed.raw_entry(Level::Medium, 0) - phi(-1.5)) <= 1e-15);
  CHECK(std::abs(relaxed.raw_entry(Level::High, 0) - phi(-2.0)) <= 1e-15);
  CHECK(relaxed.raw_entry(Level::Low, 0) == 0.5);
  CHECK(relaxed.entry(Level::Low, 0) < temporal_table().entry(Level::Low, 0));
  check_column_stochastic(relaxed);
  CHECK_THROWS_AS(temporal_table(0.0), CpdError);
  CHECK_THROWS_AS(temporal_table(-1.0), CpdError);
}

TEST_CASE("identity table") {
  const ConditionalTable t = identity_table();
  CHECK(t.entry(Level::Low, 0) == 1.0);
  CHECK(t.entry(Level::Low, 2) == 0.0);
  check_column_stochastic(t);
}

TEST_CASE("normalized entries are strictly positive except identity") {
  std::vector<ConditionalTable> tables{specialization_table(), evidence_table(), temporal_table()};
  for (int n = 1; n <= 8; ++n) tables.push_back(inclusion_table(n));
  for (const auto& t : tables)
    for (double v : t.values()) CHECK(v > 0.0);
}

TEST_CASE("combine: single input is returned unchanged") {
  const std::vector<ParentLink> links{{specialization_table(), "p"}};
  const JointTable j = combine(links);
  CHECK(j.parents == std::vector<std::string>{"p"});
  CHECK(j.table.values() == specialization_table().values());
}

TEST_CASE("combine: product of specialization and inclusion(2) columns") {
  const std::vector<ParentLink> links{{specialization_table(), "general"},
                                      {inclusion_table(2), "super"}};
  const JointTable j = combine(links);
  REQUIRE(j.parents == std::vector<std::string>{"general", "super"});
  REQUIRE(j.table.column_count() == 9);
  check_column_stochastic(j.table);

  // Hand product of the two normalized High columns.
  const Distribution spec = normalized(kSmall, kLarge, kMedium);
  const Distribution inc = normalized(kVerySmall, kSmall, kLarge);
  const Distribution expected =
      normalized(spec[0] * inc[0], spec[1] * inc[1], spec[2] * inc[2]);
  check_column(j.table, 2 + 3 * 2, expected, 1e-14);

  // Mixed configuration: general = Low (index 0), super = Medium (index 1).
  const Distribution spec_low = normalized(kLarge, kSmall, kVerySmall);
  const Distribution inc_med{0.25, 0.5, 0.25};
  check_column(j.table, 0 + 3 * 1,
               normalized(spec_low[0] * inc_med[0], spec_low[1] * inc_med[1],
                          spec_low[2] * inc_med[2]),
               1e-14);
}

TEST_CASE("combine: two identities contradict where parents disagree") {
  const std::vector<ParentLink> links{{identity_table(), "a"}, {identity_table(), "b"}};
  CHECK_THROWS_AS(combine(links), CpdError);
}

TEST_CASE("combine: errors") {
  CHECK_THROWS_AS(combine(std::vector<ParentLink>{}), CpdError);
  const std::vector<ParentLink> dup{{temporal_table(), "x"}, {evidence_table(), "x"}};
  CHECK_THROWS_AS(combine(dup), CpdError);
}

TEST_CASE("property: combine is order independent") {
  std::vector<ParentLink> links{{specialization_table(), "s"},
                                {inclusion_table(3), "i"},
                                {temporal_table(), "t"}};
  const JointTable ref = combine(links);
  std::sort(links.begin(), links.end(),
            [](const auto& a, const auto& b) { return a.parent < b.parent; });
  do {
    for (CombineRule rule : {CombineRule::Product, CombineRule::Average}) {
      const JointTable j = combine(links, rule);
      const JointTable r = rule == CombineRule::Product ? ref : combine(links, rule);
      CHECK(j.parents == r.parents);
      REQUIRE(j.table.values().size() == r.table.values().size());
      for (std::size_t k = 0; k < j.table.values().size(); ++k)
        CHECK(std::abs(j.table.values()[k] - r.table.values()[k]) <= 1e-12);
      check_column_stochastic(j.table);
    }
  } while (std::next_permutation(links.begin(), links.end(), [](const auto& a, const auto& b) {
    return a.parent < b.parent;
  }));
}

TEST_CASE("combine: average rule mixes columns") {
  const std::vector<ParentLink> links{{identity_table(), "a"}, {identity_table(), "b"}};
  const JointTable j = combine(links, CombineRule::Average);
  // a = Low, b = High: half the mass on each.
  check_column(j.table, 0 + 3 * 2, {0.5, 0.0, 0.5});
}
