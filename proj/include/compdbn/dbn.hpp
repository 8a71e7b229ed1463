#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "compdbn/competence_map.hpp"
#include "compdbn/cpd.hpp"
#include "compdbn/inference.hpp"
#include "compdbn/level.hpp"

namespace compdbn {

/// An observed performance: competence `competence` showed `level` in `week`.
struct EvidenceEvent {
  int week;
  std::string competence;
  Level level;

  friend bool operator==(const EvidenceEvent&, const EvidenceEvent&) = default;
};

/// Per-competence beliefs at one time slice.
struct BeliefState {
  int week = 0;
  std::map<std::string, Distribution> beliefs;

  const Distribution& at(const std::string& id) const { return beliefs.at(id); }
};

class DbnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Engine { Elimination, Enumeration };

/// Knobs for the network compiler. The defaults reproduce the reference
/// construction; the others exist for sensitivity probes.
struct DbnOptions {
  bool slice1_map_factors = false;  // also wire map relationships into slice 1
  double temporal_relaxation = 1.0;
  CombineRule combine_rule = CombineRule::Product;
  bool normalize_columns = true;  // false feeds raw fuzzy weights as potentials
  Engine engine = Engine::Elimination;
};

enum class Zone { Static, Init, Slice1, Slice2, Term, Evidence };

struct NetworkNode {
  VarId var;
  std::string competence;
  Zone zone;
};

/// Factor graph for one slice transition (or the static map network).
struct UnrolledNetwork {
  std::vector<NetworkNode> nodes;
  std::vector<Factor> factors;
  Evidence evidence;
  std::vector<VarId> outputs;          // term nodes (static nodes for the t=0 network)
  std::vector<std::string> output_ids;  // competence id per output, same order

  const NetworkNode& node(VarId var) const;
};

/// One node per competence with map factors and flat priors on the roots.
UnrolledNetwork build_static_network(const CompetenceMap& map, const DbnOptions& options = {});

/// Init -> slice 1 -> slice 2 -> term network for a single step. Init nodes
/// carry `prior` as unary factors; each event adds an observed evidence node
/// under its slice-2 competence.
UnrolledNetwork unroll(const CompetenceMap& map, const BeliefState& prior,
                       std::span<const EvidenceEvent> evidence, const DbnOptions& options = {});

/// Marginals of the network outputs as a belief state (week left at 0).
BeliefState infer(const UnrolledNetwork& network, Engine engine = Engine::Elimination);

BeliefState initial_beliefs(const CompetenceMap& map, const DbnOptions& options = {});

/// Advances `beliefs` by one slice using the events observed in that slice.
BeliefState step(const CompetenceMap& map, const BeliefState& beliefs,
                 std::span<const EvidenceEvent> evidence, const DbnOptions& options = {});

/// Beliefs for weeks 0..horizon; events are attached to the step producing
/// their week.
std::vector<BeliefState> rollout(const CompetenceMap& map, std::span<const EvidenceEvent> schedule,
                                 int horizon, const DbnOptions& options = {});

struct OracleReport {
  double max_discrepancy = 0.0;  // largest |elimination - enumeration| marginal entry
  int slices = 0;                // networks compared, including the t=0 network
};

/// Runs the rollout with variable elimination and, at every slice, compares
/// the posteriors with joint enumeration on the same network.
OracleReport oracle_check(const CompetenceMap& map, std::span<const EvidenceEvent> schedule,
                          int horizon, const DbnOptions& options = {});

/// GraphViz rendering with init, temporal plate and term clusters.
std::string network_to_dot(const UnrolledNetwork& network);

}  // namespace compdbn
