#include "compdbn/dbn.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace compdbn {

namespace {

constexpr int kCard = static_cast<int>(kLevelCount);

const std::vector<double>& table_values(const ConditionalTable& t, const DbnOptions& options) {
  return options.normalize_columns ? t.values() : t.raw();
}

ConditionalTable relationship_table(const CompetenceMap& map, const Edge& e) {
  return e.type == RelationshipType::Specialization
             ? specialization_table()
             : inclusion_table(map.sub_competence_count(e.parent));
}

Factor cpd_factor(VarId child, const std::vector<VarId>& parents, const ConditionalTable& table,
                  const DbnOptions& options) {
  std::vector<Variable> scope{{child, kCard}};
  for (VarId p : parents) scope.push_back({p, kCard});
  return Factor(std::move(scope), table_values(table, options));
}

// Factor for `child` given its map parents in the same slice plus an optional
// extra link (the temporal edge). Returns nothing for parentless nodes.
std::optional<Factor> structural_factor(const CompetenceMap& map, const std::string& id,
                                        VarId child, const std::map<std::string, VarId>& slice,
                                        const std::optional<ParentLink>& extra,
                                        VarId extra_var, const DbnOptions& options) {
  std::vector<ParentLink> links;
  std::map<std::string, VarId> var_of;
  for (const auto& e : map.parent_edges(id)) {
    const std::string key = "map:" + e.parent;
    if (var_of.count(key))
      throw DbnError("competence '" + id + "' has two relationships to '" + e.parent + "'");
    links.push_back({relationship_table(map, e), key});
    var_of[key] = slice.at(e.parent);
  }
  if (extra) {
    links.push_back(*extra);
    var_of[extra->parent] = extra_var;
  }
  if (links.empty()) return std::nullopt;
  JointTable joint = combine(links, options.combine_rule);
  std::vector<VarId> parents;
  for (const auto& p : joint.parents) parents.push_back(var_of.at(p));
  return cpd_factor(child, parents, joint.table, options);
}

void check_distribution(const std::string& id, const Distribution& p) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || x > 1.0 + 1e-12)
      throw DbnError("belief for '" + id + "' has an entry outside [0, 1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DbnError("belief for '" + id + "' does not sum to 1");
}

}  // namespace

const NetworkNode& UnrolledNetwork::node(VarId var) const {
  for (const auto& n : nodes)
    if (n.var == var) return n;
  throw DbnError("no node for variable " + std::to_string(var));
}

UnrolledNetwork build_static_network(const CompetenceMap& map, const DbnOptions& options) {
  const auto ids = map.ids();
  UnrolledNetwork net;
  std::map<std::string, VarId> vars;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const VarId v = static_cast<VarId>(i);
    vars[ids[i]] = v;
    net.nodes.push_back({v, ids[i], Zone::Static});
    net.outputs.push_back(v);
    net.output_ids.push_back(ids[i]);
  }
  for (const auto& id : ids) {
    const VarId v = vars.at(id);
    if (auto f = structural_factor(map, id, v, vars, std::nullopt, 0, options)) {
      net.factors.push_back(std::move(*f));
    } else {
      net.factors.emplace_back(std::vector<Variable>{{v, kCard}},
                               std::vector<double>(kUniform.begin(), kUniform.end()));
    }
  }
  return net;
}

UnrolledNetwork unroll(const CompetenceMap& map, const BeliefState& prior,
                       std::span<const EvidenceEvent> evidence, const DbnOptions& options) {
  const auto ids = map.ids();
  const auto n = static_cast<VarId>(ids.size());
  UnrolledNetwork net;
  std::map<std::string, VarId> init, slice1, slice2, term;
  for (VarId i = 0; i < n; ++i) {
    const auto& id = ids[static_cast<std::size_t>(i)];
    init[id] = i;
    slice1[id] = n + i;
    slice2[id] = 2 * n + i;
    term[id] = 3 * n + i;
    net.nodes.push_back({init[id], id, Zone::Init});
    net.nodes.push_back({slice1[id], id, Zone::Slice1});
    net.nodes.push_back({slice2[id], id, Zone::Slice2});
    net.nodes.push_back({term[id], id, Zone::Term});
    net.outputs.push_back(term[id]);
    net.output_ids.push_back(id);
  }

  const ConditionalTable identity = identity_table();
  const ConditionalTable temporal = temporal_table(options.temporal_relaxation);

  for (const auto& id : ids) {
    auto it = prior.beliefs.find(id);
    if (it == prior.beliefs.end()) throw DbnError("no prior belief for competence '" + id + "'");
    check_distribution(id, it->second);
    net.factors.emplace_back(std::vector<Variable>{{init[id], kCard}},
                             std::vector<double>(it->second.begin(), it->second.end()));

    net.factors.push_back(cpd_factor(slice1[id], {init[id]}, identity, options));
    if (options.slice1_map_factors) {
      // Extra potential over slice 1 that re-applies the map relationships to
      // the copied beliefs.
      if (auto f = structural_factor(map, id, slice1[id], slice1, std::nullopt, 0, options))
        net.factors.push_back(std::move(*f));
    }

    auto f = structural_factor(map, id, slice2[id], slice2, ParentLink{temporal, "past"},
                               slice1[id], options);
    net.factors.push_back(std::move(*f));
    net.factors.push_back(cpd_factor(term[id], {slice2[id]}, identity, options));
  }

  const ConditionalTable evidence_cpd = evidence_table();
  VarId next = 4 * n;
  for (const auto& ev : evidence) {
    if (!map.contains(ev.competence))
      throw DbnError("evidence for unknown competence '" + ev.competence + "'");
    const VarId e = next++;
    net.nodes.push_back({e, ev.competence, Zone::Evidence});
    net.factors.push_back(cpd_factor(e, {slice2.at(ev.competence)}, evidence_cpd, options));
    net.evidence[e] = to_code(ev.level);
  }
  return net;
}

BeliefState infer(const UnrolledNetwork& network, Engine engine) {
  const QueryResult r = engine == Engine::Elimination
                            ? eliminate(network.factors, network.evidence, network.outputs)
                            : enumerate_joint(network.factors, network.evidence, network.outputs);
  BeliefState out;
  for (std::size_t i = 0; i < network.outputs.size(); ++i) {
    const auto& m = r[network.outputs[i]];
    out.beliefs[network.output_ids[i]] = {m[0], m[1], m[2]};
  }
  return out;
}

BeliefState initial_beliefs(const CompetenceMap& map, const DbnOptions& options) {
  BeliefState s = infer(build_static_network(map, options), options.engine);
  s.week = 0;
  return s;
}

BeliefState step(const CompetenceMap& map, const BeliefState& beliefs,
                 std::span<const EvidenceEvent> evidence, const DbnOptions& options) {
  BeliefState next = infer(unroll(map, beliefs, evidence, options), options.engine);
  next.week = beliefs.week + 1;
  return next;
}

std::vector<BeliefState> rollout(const CompetenceMap& map, std::span<const EvidenceEvent> schedule,
                                 int horizon, const DbnOptions& options) {
  if (horizon < 0) throw DbnError("horizon must be non-negative");
  std::map<int, std::vector<EvidenceEvent>> by_week;
  for (const auto& ev : schedule) {
    if (ev.week < 1 || ev.week > horizon)
      throw DbnError("evidence week " + std::to_string(ev.week) + " outside 1.." +
                     std::to_string(horizon));
    if (!map.contains(ev.competence))
      throw DbnError("evidence for unknown competence '" + ev.competence + "'");
    by_week[ev.week].push_back(ev);
  }
  std::vector<BeliefState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(horizon) + 1);
  trajectory.push_back(initial_beliefs(map, options));
  for (int week = 1; week <= horizon; ++week) {
    auto it = by_week.find(week);
    std::span<const EvidenceEvent> events;
    if (it != by_week.end()) events = it->second;
    trajectory.push_back(step(map, trajectory.back(), events, options));
  }
  return trajectory;
}

OracleReport oracle_check(const CompetenceMap& map, std::span<const EvidenceEvent> schedule,
                          int horizon, const DbnOptions& options) {
  OracleReport report;
  auto compare = [&](const UnrolledNetwork& net) {
    const BeliefState a = infer(net, Engine::Elimination);
    const BeliefState b = infer(net, Engine::Enumeration);
    for (const auto& [id, p] : a.beliefs)
      for (std::size_t i = 0; i < kLevelCount; ++i)
        report.max_discrepancy = std::max(report.max_discrepancy, std::abs(p[i] - b.at(id)[i]));
    ++report.slices;
    return a;
  };

  DbnOptions elim = options;
  elim.engine = Engine::Elimination;
  std::map<int, std::vector<EvidenceEvent>> by_week;
  for (const auto& ev : schedule) by_week[ev.week].push_back(ev);
  BeliefState current = compare(build_static_network(map, elim));
  for (int week = 1; week <= horizon; ++week) {
    std::span<const EvidenceEvent> events;
    if (auto it = by_week.find(week); it != by_week.end()) events = it->second;
    current = compare(unroll(map, current, events, elim));
    current.week = week;
  }
  return report;
}

std::string network_to_dot(const UnrolledNetwork& network) {
  auto name = [&](const NetworkNode& n) {
    switch (n.zone) {
      case Zone::Static: return n.competence;
      case Zone::Init: return "init:" + n.competence;
      case Zone::Slice1: return "t0:" + n.competence;
      case Zone::Slice2: return "t1:" + n.competence;
      case Zone::Term: return "term:" + n.competence;
      case Zone::Evidence: return "ev" + std::to_string(n.var) + ":" + n.competence;
    }
    return n.competence;
  };
  std::string out = "digraph network {\n  rankdir=LR;\n  node [shape=ellipse];\n";
  auto cluster = [&](Zone zone, const std::string& label, const std::string& key) {
    std::string body;
    for (const auto& n : network.nodes) {
      if (n.zone != zone) continue;
      body += "    \"" + name(n) + "\"";
      if (zone == Zone::Evidence) {
        auto it = network.evidence.find(n.var);
        body += " [shape=box";
        if (it != network.evidence.end())
          body += ", label=\"" + n.competence + " = " + std::to_string(it->second) + "\"";
        body += "]";
      }
      body += ";\n";
    }
    if (body.empty()) return;
    out += "  subgraph cluster_" + key + " {\n    label=\"" + label + "\";\n" + body + "  }\n";
  };
  cluster(Zone::Static, "Competences", "static");
  cluster(Zone::Init, "Init Conditions", "init");
  std::string plate;
  for (const auto& n : network.nodes)
    if (n.zone == Zone::Slice1 || n.zone == Zone::Slice2) plate += "    \"" + name(n) + "\";\n";
  if (!plate.empty())
    out += "  subgraph cluster_plate {\n    label=\"Temporal Plate\";\n" + plate + "  }\n";
  cluster(Zone::Term, "Term Conditions", "term");
  cluster(Zone::Evidence, "Evidence", "evidence");

  for (const auto& f : network.factors) {
    if (f.scope().size() < 2) continue;
    const auto& child = network.node(f.scope()[0].id);
    for (std::size_t j = 1; j < f.scope().size(); ++j) {
      const auto& parent = network.node(f.scope()[j].id);
      std::string style;
      if (parent.zone == Zone::Slice1 && child.zone == Zone::Slice2) style = " [style=bold]";
      out += "  \"" + name(parent) + "\" -> \"" + name(child) + "\"" + style + ";\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace compdbn
