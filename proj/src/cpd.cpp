#include "compdbn/cpd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace compdbn {

namespace {

using T = FuzzyTerm;

// Builds a 3x3 table from three columns given as child-level fuzzy terms.
std::vector<double> from_terms(const std::array<std::array<FuzzyTerm, 3>, 3>& columns) {
  std::vector<double> raw;
  raw.reserve(9);
  for (const auto& col : columns)
    for (FuzzyTerm t : col) raw.push_back(fuzzy_value(t));
  return raw;
}

std::vector<double> normalize_columns(const std::vector<double>& raw) {
  std::vector<double> out(raw.size());
  for (std::size_t c = 0; c < raw.size(); c += kLevelCount) {
    const double sum = raw[c] + raw[c + 1] + raw[c + 2];
    if (!(sum > 0.0)) throw CpdError("conditional table column has zero mass");
    for (std::size_t i = 0; i < kLevelCount; ++i) out[c + i] = raw[c + i] / sum;
  }
  return out;
}

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

double phi(double sigma) { return 0.5 * std::erfc(-sigma / std::sqrt(2.0)); }

double fuzzy_sigma(FuzzyTerm term) {
  switch (term) {
    case T::Large: return 0.0;
    case T::Medium: return -1.0;
    case T::Small: return -2.0;
    case T::VerySmall: return -3.0;
    case T::Tiny: return -4.0;
  }
  return 0.0;
}

double fuzzy_value(FuzzyTerm term) { return phi(fuzzy_sigma(term)); }

std::string_view fuzzy_name(FuzzyTerm term) {
  switch (term) {
    case T::Large: return "Large";
    case T::Medium: return "Medium";
    case T::Small: return "Small";
    case T::VerySmall: return "VerySmall";
    case T::Tiny: return "Tiny";
  }
  return "?";
}

std::string_view relationship_name(Relationship rel) {
  switch (rel) {
    case Relationship::Specialization: return "specialization";
    case Relationship::Inclusion: return "inclusion";
    case Relationship::Evidence: return "evidence";
    case Relationship::Temporal: return "temporal";
    case Relationship::Identity: return "identity";
    case Relationship::Combined: return "combined";
  }
  return "?";
}

ConditionalTable::ConditionalTable(Relationship rel, std::size_t parent_count,
                                   std::vector<double> raw)
    : ConditionalTable(rel, parent_count, raw, normalize_columns(raw)) {}

ConditionalTable::ConditionalTable(Relationship rel, std::size_t parent_count,
                                   std::vector<double> raw, std::vector<double> normalized)
    : rel_(rel), parent_count_(parent_count), raw_(std::move(raw)), values_(std::move(normalized)) {
  const std::size_t expected = kLevelCount * static_cast<std::size_t>(ipow(3, static_cast<int>(parent_count)));
  if (raw_.size() != expected || values_.size() != expected)
    throw CpdError("conditional table has " + std::to_string(values_.size()) + " entries, expected " +
                   std::to_string(expected));
  for (double v : raw_)
    if (!(v >= 0.0)) throw CpdError("conditional table entry is negative or NaN");
}

double ConditionalTable::raw_entry(Level child, std::size_t column) const {
  return raw_.at(column * kLevelCount + to_index(child));
}

double ConditionalTable::entry(Level child, std::size_t column) const {
  return values_.at(column * kLevelCount + to_index(child));
}

Distribution ConditionalTable::column(std::size_t column) const {
  return {entry(Level::Low, column), entry(Level::Medium, column), entry(Level::High, column)};
}

ConditionalTable specialization_table() {
  return {Relationship::Specialization, 1,
          from_terms({{{T::Large, T::Small, T::VerySmall},
                       {T::Medium, T::Large, T::Small},
                       {T::Small, T::Large, T::Medium}}})};
}

Fraction inclusion_fraction(int n, Level child, Level parent) {
  if (n < 1) throw CpdError("inclusion table needs n >= 1, got " + std::to_string(n));
  if (n > 30) throw CpdError("inclusion table n too large for exact arithmetic");
  const long long p3 = ipow(3, n), p3m = ipow(3, n - 1);
  const long long p2 = ipow(2, n), p2m = ipow(2, n - 1);
  if (parent == Level::Low) {
    const long long den = p3 - p2;
    return {child == Level::Low ? p3m : p3m - p2m, den};
  }
  if (parent == Level::Medium) {
    switch (child) {
      case Level::Low: return {1, p2};
      case Level::Medium: return {p2m, p2};
      case Level::High: return {p2m - 1, p2};
    }
  }
  throw CpdError("inclusion High column is given by fuzzy terms, not a closed form");
}

ConditionalTable inclusion_table(int n) {
  if (n < 1) throw CpdError("inclusion table needs n >= 1, got " + std::to_string(n));
  std::vector<double> raw;
  raw.reserve(9);
  const double floor = fuzzy_value(T::Tiny);
  for (Level parent : {Level::Low, Level::Medium}) {
    for (Level child : kAllLevels) {
      const Fraction f = inclusion_fraction(n, child, parent);
      raw.push_back(f.numerator == 0 ? floor
                                     : static_cast<double>(f.numerator) /
                                           static_cast<double>(f.denominator));
    }
  }
  for (FuzzyTerm t : {T::VerySmall, T::Small, T::Large}) raw.push_back(fuzzy_value(t));
  return {Relationship::Inclusion, 1, std::move(raw)};
}

ConditionalTable evidence_table() {
  return {Relationship::Evidence, 1,
          from_terms({{{T::Large, T::Small, T::VerySmall},
                       {T::Medium, T::Large, T::Medium},
                       {T::Small, T::Medium, T::Large}}})};
}

ConditionalTable temporal_table(double relaxation) {
  if (!(relaxation > 0.0) || !std::isfinite(relaxation))
    throw CpdError("temporal relaxation must be a positive finite number");
  const std::array<std::array<FuzzyTerm, 3>, 3> columns{{{T::Large, T::VerySmall, T::Tiny},
                                                         {T::VerySmall, T::Large, T::Tiny},
                                                         {T::Tiny, T::VerySmall, T::Large}}};
  std::vector<double> raw;
  raw.reserve(9);
  for (std::size_t parent = 0; parent < 3; ++parent) {
    for (std::size_t child = 0; child < 3; ++child) {
      const double sigma = fuzzy_sigma(columns[parent][child]);
      raw.push_back(phi(child == parent ? sigma : sigma * relaxation));
    }
  }
  return {Relationship::Temporal, 1, std::move(raw)};
}

ConditionalTable identity_table() {
  std::vector<double> v(9, 0.0);
  for (std::size_t i = 0; i < 3; ++i) v[i * 3 + i] = 1.0;
  return {Relationship::Identity, 1, v, v};
}

JointTable combine(std::span<const ParentLink> links, CombineRule rule) {
  if (links.empty()) throw CpdError("combine needs at least one parent table");
  std::vector<const ParentLink*> sorted;
  for (const auto& link : links) {
    if (link.table.parent_count() != 1)
      throw CpdError("combine expects single-parent tables (parent '" + link.parent + "')");
    sorted.push_back(&link);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const ParentLink* a, const ParentLink* b) { return a->parent < b->parent; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i]->parent == sorted[i - 1]->parent)
      throw CpdError("duplicate parent '" + sorted[i]->parent + "' in combine");

  const std::size_t k = sorted.size();
  if (k == 1) {
    const auto& t = sorted.front()->table;
    return {{sorted.front()->parent}, ConditionalTable(t.relationship(), 1, t.raw(), t.values())};
  }

  const std::size_t columns = static_cast<std::size_t>(ipow(3, static_cast<int>(k)));
  std::vector<double> raw(columns * kLevelCount), values(columns * kLevelCount);
  std::vector<std::size_t> config(k, 0);
  for (std::size_t col = 0; col < columns; ++col) {
    for (std::size_t v = 0; v < kLevelCount; ++v) {
      double r = rule == CombineRule::Product ? 1.0 : 0.0;
      double p = r;
      for (std::size_t j = 0; j < k; ++j) {
        const auto& t = sorted[j]->table;
        const std::size_t idx = config[j] * kLevelCount + v;
        if (rule == CombineRule::Product) {
          r *= t.raw()[idx];
          p *= t.values()[idx];
        } else {
          r += t.raw()[idx] / static_cast<double>(k);
          p += t.values()[idx] / static_cast<double>(k);
        }
      }
      raw[col * kLevelCount + v] = r;
      values[col * kLevelCount + v] = p;
    }
    const double sum = values[col * kLevelCount] + values[col * kLevelCount + 1] +
                       values[col * kLevelCount + 2];
    if (!(sum > 0.0))
      throw CpdError("combined table has a zero column; parents impose contradictory constraints");
    for (std::size_t v = 0; v < kLevelCount; ++v) values[col * kLevelCount + v] /= sum;
    // Odometer over parent configurations, parent 0 fastest.
    for (std::size_t j = 0; j < k; ++j) {
      if (++config[j] < kLevelCount) break;
      config[j] = 0;
    }
  }

  std::vector<std::string> parents;
  for (const auto* link : sorted) parents.push_back(link->parent);
  return {std::move(parents), ConditionalTable(Relationship::Combined, k, std::move(raw), std::move(values))};
}

}  // namespace compdbn
