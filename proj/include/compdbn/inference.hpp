#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace compdbn {

using VarId = int;

struct Variable {
  VarId id;
  int cardinality;

  friend bool operator==(const Variable&, const Variable&) = default;
};

class InferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evidence has zero probability under the model.
class InconsistentEvidence : public InferenceError {
 public:
  using InferenceError::InferenceError;
};

/// Joint enumeration refused because the state space is too large.
class StateSpaceExceeded : public InferenceError {
 public:
  using InferenceError::InferenceError;
};

/// Non-negative potential over a list of discrete variables.
///
/// Values are laid out with the first scope variable varying fastest. An
/// empty scope is a scalar with exactly one value.
class Factor {
 public:
  Factor(std::vector<Variable> scope, std::vector<double> values);

  static Factor scalar(double value) { return Factor({}, {value}); }
  static Factor ones(std::vector<Variable> scope);

  const std::vector<Variable>& scope() const { return scope_; }
  const std::vector<double>& values() const { return values_; }

  bool has(VarId var) const { return position(var) >= 0; }
  /// Index of `var` in the scope or -1.
  int position(VarId var) const;

  /// Value at a full assignment given in scope order.
  double at(std::span<const int> assignment) const;

  double sum() const;

 private:
  std::vector<Variable> scope_;
  std::vector<double> values_;
};

Factor multiply(const Factor& a, const Factor& b);
Factor marginalize(const Factor& f, VarId var);
Factor condition(const Factor& f, VarId var, int level);

using Evidence = std::map<VarId, int>;

/// Posterior marginal per queried variable.
struct QueryResult {
  std::map<VarId, std::vector<double>> marginals;

  const std::vector<double>& operator[](VarId var) const { return marginals.at(var); }
};

enum class TieBreak { Ascending, Descending };

struct EliminationOptions {
  TieBreak tie_break = TieBreak::Ascending;
};

/// Exact marginals by variable elimination with a min-fill order. Ties are
/// broken by variable id.
QueryResult eliminate(std::span<const Factor> factors, const Evidence& evidence,
                      std::span<const VarId> queries, EliminationOptions options = {});

inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

/// Reference implementation of `eliminate` that sums the full joint over the
/// unobserved variables. Throws StateSpaceExceeded above `limit` assignments.
QueryResult enumerate_joint(std::span<const Factor> factors, const Evidence& evidence,
                            std::span<const VarId> queries,
                            std::uint64_t limit = kEnumerationLimit);

}  // namespace compdbn
