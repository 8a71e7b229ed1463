#include "compdbn/inference.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <string>

namespace compdbn {

namespace {

std::size_t state_count(const std::vector<Variable>& scope) {
  std::size_t n = 1;
  for (const auto& v : scope) n *= static_cast<std::size_t>(v.cardinality);
  return n;
}

// Strides of `scope` variables inside `f`, zero when absent.
std::vector<std::size_t> strides_in(const Factor& f, const std::vector<Variable>& scope) {
  std::vector<std::size_t> own(f.scope().size());
  std::size_t s = 1;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    own[i] = s;
    s *= static_cast<std::size_t>(f.scope()[i].cardinality);
  }
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t i = 0; i < scope.size(); ++i) {
    const int p = f.position(scope[i].id);
    if (p >= 0) out[i] = own[static_cast<std::size_t>(p)];
  }
  return out;
}

std::string var_name(VarId v) { return "variable " + std::to_string(v); }

void normalize_in_place(std::vector<double>& p) {
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= s;
}

std::map<VarId, int> collect_cardinalities(std::span<const Factor> factors) {
  std::map<VarId, int> cards;
  for (const auto& f : factors) {
    for (const auto& v : f.scope()) {
      auto [it, inserted] = cards.emplace(v.id, v.cardinality);
      if (!inserted && it->second != v.cardinality)
        throw InferenceError("cardinality mismatch for " + var_name(v.id));
    }
  }
  return cards;
}

std::vector<Factor> apply_evidence(std::span<const Factor> factors, const Evidence& evidence,
                                   const std::map<VarId, int>& cards) {
  for (const auto& [var, level] : evidence) {
    auto it = cards.find(var);
    if (it == cards.end()) throw InferenceError("evidence on unknown " + var_name(var));
    if (level < 0 || level >= it->second)
      throw InferenceError("evidence level out of range for " + var_name(var));
  }
  std::vector<Factor> out;
  out.reserve(factors.size());
  for (const auto& f : factors) {
    Factor g = f;
    for (const auto& [var, level] : evidence)
      if (g.has(var)) g = condition(g, var, level);
    out.push_back(std::move(g));
  }
  return out;
}

Factor product_of(const std::vector<const Factor*>& fs) {
  Factor acc = Factor::scalar(1.0);
  for (const auto* f : fs) acc = multiply(acc, *f);
  return acc;
}

// Scales a factor so its largest entry is 1. Returns false if it is all zero.
bool rescale(Factor& f) {
  const auto& v = f.values();
  const double mx = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  if (!(mx > 0.0)) return false;
  std::vector<double> scaled(v);
  for (double& x : scaled) x /= mx;
  f = Factor(f.scope(), std::move(scaled));
  return true;
}

// Greedy min-fill choice over the interaction graph of `work`.
VarId pick_min_fill(const std::vector<Factor>& work, const std::set<VarId>& candidates,
                    TieBreak tie_break) {
  std::map<VarId, std::set<VarId>> adj;
  for (const auto& f : work) {
    for (const auto& a : f.scope()) {
      auto& n = adj[a.id];
      for (const auto& b : f.scope())
        if (a.id != b.id) n.insert(b.id);
    }
  }
  VarId best = 0;
  std::size_t best_fill = std::numeric_limits<std::size_t>::max();
  auto consider = [&](VarId v) {
    const auto& nb = adj[v];
    std::size_t fill = 0;
    for (auto i = nb.begin(); i != nb.end(); ++i) {
      const auto& ni = adj[*i];
      for (auto j = std::next(i); j != nb.end(); ++j)
        if (!ni.count(*j)) ++fill;
    }
    if (fill < best_fill) {
      best_fill = fill;
      best = v;
    }
  };
  if (tie_break == TieBreak::Ascending) {
    for (VarId v : candidates) consider(v);
  } else {
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) consider(*it);
  }
  return best;
}

// Eliminates every variable except `keep` (may be absent) and returns the
// product of what is left.
Factor eliminate_all_but(std::vector<Factor> work, const std::set<VarId>& keep,
                         TieBreak tie_break) {
  std::set<VarId> remaining;
  for (const auto& f : work)
    for (const auto& v : f.scope())
      if (!keep.count(v.id)) remaining.insert(v.id);

  while (!remaining.empty()) {
    const VarId var = pick_min_fill(work, remaining, tie_break);
    remaining.erase(var);
    std::vector<const Factor*> touching;
    std::vector<Factor> rest;
    for (const auto& f : work)
      if (f.has(var)) touching.push_back(&f);
    Factor summed = marginalize(product_of(touching), var);
    for (auto& f : work)
      if (!f.has(var)) rest.push_back(std::move(f));
    if (!rescale(summed)) throw InconsistentEvidence("evidence has zero probability");
    rest.push_back(std::move(summed));
    work = std::move(rest);
  }

  std::vector<const Factor*> all;
  for (const auto& f : work) all.push_back(&f);
  return product_of(all);
}

}  // namespace

Factor::Factor(std::vector<Variable> scope, std::vector<double> values)
    : scope_(std::move(scope)), values_(std::move(values)) {
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (scope_[i].cardinality < 1) throw InferenceError("variable cardinality must be positive");
    for (std::size_t j = i + 1; j < scope_.size(); ++j)
      if (scope_[i].id == scope_[j].id)
        throw InferenceError("duplicate " + var_name(scope_[i].id) + " in factor scope");
  }
  if (values_.size() != state_count(scope_))
    throw InferenceError("factor has " + std::to_string(values_.size()) + " values, scope needs " +
                         std::to_string(state_count(scope_)));
  for (double v : values_)
    if (!(v >= 0.0)) throw InferenceError("factor values must be non-negative");
}

Factor Factor::ones(std::vector<Variable> scope) {
  const std::size_t n = state_count(scope);
  return Factor(std::move(scope), std::vector<double>(n, 1.0));
}

int Factor::position(VarId var) const {
  for (std::size_t i = 0; i < scope_.size(); ++i)
    if (scope_[i].id == var) return static_cast<int>(i);
  return -1;
}

double Factor::at(std::span<const int> assignment) const {
  if (assignment.size() != scope_.size()) throw InferenceError("assignment size mismatch");
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (assignment[i] < 0 || assignment[i] >= scope_[i].cardinality)
      throw InferenceError("assignment out of range");
    idx += static_cast<std::size_t>(assignment[i]) * stride;
    stride *= static_cast<std::size_t>(scope_[i].cardinality);
  }
  return values_[idx];
}

double Factor::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Factor multiply(const Factor& a, const Factor& b) {
  std::vector<Variable> scope = a.scope();
  for (const auto& v : b.scope()) {
    const int p = a.position(v.id);
    if (p < 0) {
      scope.push_back(v);
    } else if (a.scope()[static_cast<std::size_t>(p)].cardinality != v.cardinality) {
      throw InferenceError("cardinality mismatch for " + var_name(v.id));
    }
  }
  const auto sa = strides_in(a, scope);
  const auto sb = strides_in(b, scope);
  const std::size_t n = state_count(scope);
  std::vector<double> out(n);
  std::vector<int> assign(scope.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = a.values()[ia] * b.values()[ib];
    for (std::size_t d = 0; d < scope.size(); ++d) {
      if (++assign[d] < scope[d].cardinality) {
        ia += sa[d];
        ib += sb[d];
        break;
      }
      assign[d] = 0;
      ia -= sa[d] * static_cast<std::size_t>(scope[d].cardinality - 1);
      ib -= sb[d] * static_cast<std::size_t>(scope[d].cardinality - 1);
    }
  }
  return Factor(std::move(scope), std::move(out));
}

Factor marginalize(const Factor& f, VarId var) {
  const int p = f.position(var);
  if (p < 0) throw InferenceError(var_name(var) + " is not in the factor scope");
  std::vector<Variable> scope = f.scope();
  scope.erase(scope.begin() + p);
  const auto so = strides_in(Factor::ones(scope), f.scope());
  std::vector<double> out(state_count(scope), 0.0);
  std::vector<int> assign(f.scope().size(), 0);
  std::size_t io = 0;
  for (double v : f.values()) {
    out[io] += v;
    for (std::size_t d = 0; d < assign.size(); ++d) {
      if (++assign[d] < f.scope()[d].cardinality) {
        io += so[d];
        break;
      }
      assign[d] = 0;
      io -= so[d] * static_cast<std::size_t>(f.scope()[d].cardinality - 1);
    }
  }
  return Factor(std::move(scope), std::move(out));
}

Factor condition(const Factor& f, VarId var, int level) {
  const int p = f.position(var);
  if (p < 0) throw InferenceError(var_name(var) + " is not in the factor scope");
  if (level < 0 || level >= f.scope()[static_cast<std::size_t>(p)].cardinality)
    throw InferenceError("level " + std::to_string(level) + " out of range for " + var_name(var));
  std::vector<Variable> scope = f.scope();
  scope.erase(scope.begin() + p);
  Factor shape = Factor::ones(scope);
  std::vector<double> out(shape.values().size());
  std::vector<int> full(f.scope().size(), 0);
  std::vector<int> assign(scope.size(), 0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (std::size_t i = 0, j = 0; i < full.size(); ++i)
      full[i] = static_cast<int>(i) == p ? level : assign[j++];
    out[k] = f.at(full);
    for (std::size_t d = 0; d < assign.size(); ++d) {
      if (++assign[d] < scope[d].cardinality) break;
      assign[d] = 0;
    }
  }
  return Factor(std::move(scope), std::move(out));
}

QueryResult eliminate(std::span<const Factor> factors, const Evidence& evidence,
                      std::span<const VarId> queries, EliminationOptions options) {
  const auto cards = collect_cardinalities(factors);
  for (VarId q : queries)
    if (!cards.count(q)) throw InferenceError("query on unknown " + var_name(q));
  const auto work = apply_evidence(factors, evidence, cards);

  QueryResult result;
  bool checked = false;
  for (VarId q : queries) {
    if (auto it = evidence.find(q); it != evidence.end()) {
      std::vector<double> point(static_cast<std::size_t>(cards.at(q)), 0.0);
      point[static_cast<std::size_t>(it->second)] = 1.0;
      result.marginals[q] = std::move(point);
      continue;
    }
    Factor f = eliminate_all_but(work, {q}, options.tie_break);
    if (f.scope().size() != 1 || !(f.sum() > 0.0))
      throw InconsistentEvidence("evidence has zero probability");
    std::vector<double> p = f.values();
    normalize_in_place(p);
    result.marginals[q] = std::move(p);
    checked = true;
  }
  if (!checked) {
    const Factor z = eliminate_all_but(work, {}, options.tie_break);
    if (!(z.sum() > 0.0)) throw InconsistentEvidence("evidence has zero probability");
  }
  return result;
}

QueryResult enumerate_joint(std::span<const Factor> factors, const Evidence& evidence,
                            std::span<const VarId> queries, std::uint64_t limit) {
  const auto cards = collect_cardinalities(factors);
  for (VarId q : queries)
    if (!cards.count(q)) throw InferenceError("query on unknown " + var_name(q));
  const auto work = apply_evidence(factors, evidence, cards);

  std::vector<Variable> free;
  for (const auto& [id, card] : cards)
    if (!evidence.count(id)) free.push_back({id, card});

  std::uint64_t total = 1;
  for (const auto& v : free) {
    if (total > limit / static_cast<std::uint64_t>(v.cardinality)) {
      throw StateSpaceExceeded("joint enumeration over " + std::to_string(free.size()) +
                               " free variables exceeds the limit of " + std::to_string(limit) +
                               " assignments");
    }
    total *= static_cast<std::uint64_t>(v.cardinality);
  }

  std::vector<std::vector<std::size_t>> strides;
  strides.reserve(work.size());
  for (const auto& f : work) strides.push_back(strides_in(f, free));

  // Positions of the free query variables.
  std::vector<std::pair<VarId, std::size_t>> free_queries;
  for (VarId q : queries) {
    if (evidence.count(q)) continue;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (free[i].id == q) free_queries.emplace_back(q, i);
  }
  std::map<VarId, std::vector<double>> acc;
  for (const auto& [q, i] : free_queries)
    acc[q].assign(static_cast<std::size_t>(free[i].cardinality), 0.0);

  std::vector<int> assign(free.size(), 0);
  std::vector<std::size_t> index(work.size(), 0);
  double z = 0.0;
  for (std::uint64_t k = 0; k < total; ++k) {
    double p = 1.0;
    for (std::size_t f = 0; f < work.size() && p != 0.0; ++f) p *= work[f].values()[index[f]];
    z += p;
    for (const auto& [q, i] : free_queries) acc[q][static_cast<std::size_t>(assign[i])] += p;
    for (std::size_t d = 0; d < free.size(); ++d) {
      if (++assign[d] < free[d].cardinality) {
        for (std::size_t f = 0; f < work.size(); ++f) index[f] += strides[f][d];
        break;
      }
      assign[d] = 0;
      for (std::size_t f = 0; f < work.size(); ++f)
        index[f] -= strides[f][d] * static_cast<std::size_t>(free[d].cardinality - 1);
    }
  }
  if (!(z > 0.0)) throw InconsistentEvidence("evidence has zero probability");

  QueryResult result;
  for (VarId q : queries) {
    if (auto it = evidence.find(q); it != evidence.end()) {
      std::vector<double> point(static_cast<std::size_t>(cards.at(q)), 0.0);
      point[static_cast<std::size_t>(it->second)] = 1.0;
      result.marginals[q] = std::move(point);
    } else {
      std::vector<double> p = acc.at(q);
      for (double& x : p) x /= z;
      result.marginals[q] = std::move(p);
    }
  }
  return result;
}

}  // namespace compdbn
