#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "compdbn/level.hpp"

namespace compdbn {

/// Qualitative probability labels. Each maps to phi(sigma).
enum class FuzzyTerm { Large, Medium, Small, VerySmall, Tiny };

inline constexpr std::array<FuzzyTerm, 5> kAllFuzzyTerms{
    FuzzyTerm::Large, FuzzyTerm::Medium, FuzzyTerm::Small, FuzzyTerm::VerySmall, FuzzyTerm::Tiny};

/// Standard normal CDF.
double phi(double sigma);

/// Large = 0, Medium = -1, Small = -2, VerySmall = -3, Tiny = -4.
double fuzzy_sigma(FuzzyTerm term);
double fuzzy_value(FuzzyTerm term);
std::string_view fuzzy_name(FuzzyTerm term);

enum class Relationship { Specialization, Inclusion, Evidence, Temporal, Identity, Combined };

std::string_view relationship_name(Relationship rel);

class CpdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Distribution of a ternary child given k ternary parents.
///
/// Entries are stored column-major: the child level varies fastest, then
/// parent 0, parent 1, ... so a parent configuration (u_0..u_{k-1}) has
/// column index sum(u_j * 3^j). `raw()` keeps the values as assigned before
/// column normalization, `values()` the column-stochastic result.
class ConditionalTable {
 public:
  ConditionalTable(Relationship rel, std::size_t parent_count, std::vector<double> raw);
  ConditionalTable(Relationship rel, std::size_t parent_count, std::vector<double> raw,
                   std::vector<double> normalized);

  Relationship relationship() const { return rel_; }
  std::size_t parent_count() const { return parent_count_; }
  std::size_t column_count() const { return values_.size() / kLevelCount; }

  const std::vector<double>& raw() const { return raw_; }
  const std::vector<double>& values() const { return values_; }

  double raw_entry(Level child, std::size_t column) const;
  double entry(Level child, std::size_t column) const;

  /// Normalized child distribution for one parent configuration.
  Distribution column(std::size_t column) const;

 private:
  Relationship rel_;
  std::size_t parent_count_;
  std::vector<double> raw_;
  std::vector<double> values_;
};

/// Relationship families. All but identity are column-normalized after raw
/// assignment.
ConditionalTable specialization_table();

/// Super-competence with `n` sub-competences. Structural zeros in the Low and
/// Medium columns are floored at value(Tiny) before normalization.
ConditionalTable inclusion_table(int n);

struct Fraction {
  long long numerator;
  long long denominator;
};

/// Exact closed-form entry of the inclusion table for the Low and Medium
/// parent columns, before any flooring. Throws for the High column.
Fraction inclusion_fraction(int n, Level child, Level parent);

ConditionalTable evidence_table();

/// `relaxation` multiplies the sigma of every off-diagonal entry; 1 gives the
/// reference table, values below 1 move mass off the diagonal.
ConditionalTable temporal_table(double relaxation = 1.0);

ConditionalTable identity_table();

struct ParentLink {
  ConditionalTable table;  // single-parent, 3x3
  std::string parent;
};

struct JointTable {
  std::vector<std::string> parents;  // sorted; index j is parent j of `table`
  ConditionalTable table;
};

/// How several single-parent tables are merged into one over the joint parent
/// set.
enum class CombineRule {
  Product,  // normalized product of the per-parent columns
  Average,  // equal-weight mixture of the per-parent columns
};

/// Joint table over the union of parents. Parents are ordered by id, so the
/// result does not depend on the order of `links`.
JointTable combine(std::span<const ParentLink> links, CombineRule rule = CombineRule::Product);

}  // namespace compdbn
