#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "compdbn/dbn.hpp"
#include "compdbn/metrics.hpp"

namespace compdbn {

/// A scripted student: evidence events over a course horizon.
struct StudentProfile {
  std::string name;
  std::vector<EvidenceEvent> schedule;  // sorted by week
  int horizon;
};

/// L2M, M2H and LT_M2H on the bundled submap's project-specific competences.
std::vector<StudentProfile> builtin_profiles();

/// Throws std::invalid_argument for unknown names.
StudentProfile builtin_profile(std::string_view name);

/// Rows for weeks 0..horizon, competences in id order within a week.
std::vector<TraceRow> run_profile(const CompetenceMap& map, const StudentProfile& profile,
                                  const DbnOptions& options = {});

std::vector<TraceRow> trace_rows(const std::vector<BeliefState>& trajectory);

/// Random evidence for tests and oracle checks: each week, each competence is
/// observed with probability 1/2 at a uniformly drawn level. Deterministic
/// for a given seed on every platform.
std::vector<EvidenceEvent> random_schedule(const CompetenceMap& map, int horizon,
                                           std::uint64_t seed);

/// Evidence schedule CSV: header `week,competence,level`, level as 0/1/2.
std::vector<EvidenceEvent> parse_evidence_csv(std::string_view text);
std::vector<EvidenceEvent> load_evidence_file(const std::string& path);

/// Trace CSV with header `week,competence,avg,uncertainty,p_low,p_medium,p_high`.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

/// Parses the trace CSV back; used for analysis input.
std::vector<TraceRow> parse_trace_csv(std::string_view text);

}  // namespace compdbn
