#include "compdbn/profiles.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <stdexcept>

#include "compdbn/csv.hpp"

namespace compdbn {

namespace {

constexpr const char* kPropose = "propose_on_project";
constexpr const char* kContribute = "contribute_to_project";
constexpr const char* kCollaborate = "collaborate_in_project";

// First-term course: the same competences are assessed in the same weeks for
// every profile, only the observed levels differ.
std::vector<EvidenceEvent> first_term(const std::array<int, 8>& levels) {
  static constexpr std::array<int, 8> weeks{1, 2, 4, 5, 7, 10, 11, 14};
  static constexpr std::array<const char*, 8> comps{kPropose,    kContribute, kPropose,
                                                    kContribute, kCollaborate, kPropose,
                                                    kContribute, kCollaborate};
  std::vector<EvidenceEvent> out;
  for (std::size_t i = 0; i < weeks.size(); ++i)
    out.push_back({weeks[i], comps[i], static_cast<Level>(levels[i])});
  return out;
}

}  // namespace

std::vector<StudentProfile> builtin_profiles() {
  StudentProfile l2m{"L2M", first_term({0, 0, 1, 0, 0, 1, 1, 1}), 16};
  StudentProfile m2h{"M2H", first_term({1, 1, 2, 1, 1, 2, 2, 0}), 16};
  StudentProfile lt{"LT_M2H", first_term({1, 1, 2, 1, 1, 2, 2, 2}), 37};
  lt.schedule.push_back({23, kPropose, Level::High});
  lt.schedule.push_back({24, kContribute, Level::High});
  lt.schedule.push_back({25, kCollaborate, Level::High});
  lt.schedule.push_back({35, kCollaborate, Level::High});
  return {l2m, m2h, lt};
}

StudentProfile builtin_profile(std::string_view name) {
  for (auto& p : builtin_profiles())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown profile '" + std::string(name) +
                              "' (expected L2M, M2H or LT_M2H)");
}

std::vector<TraceRow> trace_rows(const std::vector<BeliefState>& trajectory) {
  std::vector<TraceRow> rows;
  for (const auto& state : trajectory)
    for (const auto& [id, p] : state.beliefs) rows.push_back(make_trace_row(state.week, id, p));
  return rows;
}

std::vector<TraceRow> run_profile(const CompetenceMap& map, const StudentProfile& profile,
                                  const DbnOptions& options) {
  return trace_rows(rollout(map, profile.schedule, profile.horizon, options));
}

std::vector<EvidenceEvent> random_schedule(const CompetenceMap& map, int horizon,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<EvidenceEvent> events;
  for (int week = 1; week <= horizon; ++week) {
    for (const auto& id : map.ids()) {
      const std::uint64_t draw = rng();
      if ((draw & 1U) == 0) continue;
      events.push_back({week, id, static_cast<Level>((draw >> 1) % 3)});
    }
  }
  return events;
}

std::vector<EvidenceEvent> parse_evidence_csv(std::string_view text) {
  const auto table = csv::parse(text, {"week", "competence", "level"});
  std::vector<EvidenceEvent> events;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    const int week = csv::parse_int(row[0], line);
    if (week < 1) throw csv::CsvError("line " + std::to_string(line) + ": week must be >= 1");
    if (row[1].empty()) throw csv::CsvError("line " + std::to_string(line) + ": empty competence");
    const auto level = level_from_code(csv::parse_int(row[2], line));
    if (!level) throw csv::CsvError("line " + std::to_string(line) + ": level must be 0, 1 or 2");
    events.push_back({week, row[1], *level});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.week < b.week; });
  return events;
}

std::vector<EvidenceEvent> load_evidence_file(const std::string& path) {
  return parse_evidence_csv(csv::read_file(path));
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "week,competence,avg,uncertainty,p_low,p_medium,p_high\n";
  for (const auto& r : rows) {
    out << r.week << ',' << r.competence << ',' << csv::format_number(r.average) << ','
        << csv::format_number(r.uncertainty) << ',' << csv::format_number(r.p[0]) << ','
        << csv::format_number(r.p[1]) << ',' << csv::format_number(r.p[2]) << '\n';
  }
}

std::vector<TraceRow> parse_trace_csv(std::string_view text) {
  const auto table =
      csv::parse(text, {"week", "competence", "avg", "uncertainty", "p_low", "p_medium", "p_high"});
  std::vector<TraceRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    TraceRow r{csv::parse_int(row[0], line), row[1], csv::parse_double(row[2], line),
               csv::parse_double(row[3], line),
               {csv::parse_double(row[4], line), csv::parse_double(row[5], line),
                csv::parse_double(row[6], line)}};
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace compdbn
