// compdbn: compile competence maps into dynamic Bayesian student models and
// trace beliefs over time.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "compdbn/analysis.hpp"
#include "compdbn/competence_map.hpp"
#include "compdbn/cpd.hpp"
#include "compdbn/csv.hpp"
#include "compdbn/dbn.hpp"
#include "compdbn/profiles.hpp"

namespace {

using namespace compdbn;

enum Exit : int { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CompetenceMap load_map_or_bundled(const std::string& path) {
  return path.empty() ? bundled_submap() : load_map_file(path);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

struct RunConfig {
  std::string map_path;
  std::string evidence_path;
  std::string profile;
  int horizon = -1;
  std::string out_path;
  std::string dot_path;
  bool all_profiles = false;
  bool slice1_map_factors = false;
  double temporal_relaxation = 1.0;
  std::uint64_t seed = 1;

  DbnOptions options() const {
    DbnOptions o;
    o.slice1_map_factors = slice1_map_factors;
    o.temporal_relaxation = temporal_relaxation;
    return o;
  }
};

int cmd_validate(const std::string& path) {
  const CompetenceMap map = parse_map_syntax(read_map_file(path));
  const auto diags = validate(map);
  for (const auto& d : diags)
    std::cerr << path << ": " << diagnostic_kind_name(d.kind) << " at " << d.locus << ": "
              << d.message << '\n';
  if (!diags.empty()) return kFailure;
  std::cout << path << ": ok (" << map.size() << " competences, " << map.edges().size()
            << " edges)\n";
  return kOk;
}

int cmd_tables(const std::string& rel, int n, double relaxation) {
  ConditionalTable table = identity_table();
  if (rel == "specialization") {
    table = specialization_table();
  } else if (rel == "inclusion") {
    if (n < 1) throw UsageError("--n >= 1 is required for the inclusion table");
    table = inclusion_table(n);
  } else if (rel == "evidence") {
    table = evidence_table();
  } else if (rel == "temporal") {
    table = temporal_table(relaxation);
  } else if (rel != "identity") {
    throw UsageError("unknown relationship '" + rel + "'");
  }
  if (rel != "inclusion" && n >= 0) throw UsageError("--n only applies to the inclusion table");

  std::ostringstream out;
  out << "relationship,parent,child,raw,normalized\n";
  for (Level parent : kAllLevels) {
    for (Level child : kAllLevels) {
      const std::size_t col = to_index(parent);
      out << relationship_name(table.relationship()) << ',' << level_name(parent) << ','
          << level_name(child) << ',' << csv::format_number(table.raw_entry(child, col)) << ','
          << csv::format_number(table.entry(child, col)) << '\n';
    }
  }
  std::cout << out.str();
  return kOk;
}

int cmd_compile(const std::string& map_path, bool dot, bool unrolled) {
  const CompetenceMap map = load_map_or_bundled(map_path);
  if (!dot) {
    std::cout << serialize_map(map);
  } else if (unrolled) {
    std::cout << network_to_dot(unroll(map, initial_beliefs(map), {}));
  } else {
    std::cout << map_to_dot(map);
  }
  return kOk;
}

std::string trace_csv(const CompetenceMap& map, const StudentProfile& profile,
                      const DbnOptions& options) {
  std::ostringstream out;
  write_trace_csv(out, run_profile(map, profile, options));
  return out.str();
}

int cmd_trace(const RunConfig& cfg) {
  const CompetenceMap map = load_map_or_bundled(cfg.map_path);
  const DbnOptions options = cfg.options();

  if (cfg.all_profiles) {
    if (cfg.out_path.empty()) throw UsageError("--all-profiles needs --out <directory>");
    std::filesystem::create_directories(cfg.out_path);
    std::vector<std::future<std::string>> jobs;
    const auto profiles = builtin_profiles();
    for (const auto& p : profiles) {
      StudentProfile prof = p;
      if (cfg.horizon >= 0) prof.horizon = cfg.horizon;
      jobs.push_back(std::async(std::launch::async, [&map, prof, options] {
        return trace_csv(map, prof, options);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i)
      write_text((std::filesystem::path(cfg.out_path) / (profiles[i].name + ".csv")).string(),
                 jobs[i].get());
    return kOk;
  }

  StudentProfile profile;
  if (!cfg.profile.empty()) {
    try {
      profile = builtin_profile(cfg.profile);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    profile.name = "custom";
    profile.schedule = load_evidence_file(cfg.evidence_path);
    profile.horizon = 0;
    for (const auto& ev : profile.schedule) profile.horizon = std::max(profile.horizon, ev.week);
  }
  if (cfg.horizon >= 0) profile.horizon = cfg.horizon;

  const auto trajectory = rollout(map, profile.schedule, profile.horizon, options);
  std::ostringstream out;
  write_trace_csv(out, trace_rows(trajectory));
  write_text(cfg.out_path, out.str());

  if (!cfg.dot_path.empty()) {
    // Network of the last step, with that week's evidence attached.
    std::vector<EvidenceEvent> last;
    for (const auto& ev : profile.schedule)
      if (ev.week == profile.horizon) last.push_back(ev);
    const BeliefState& before =
        trajectory.size() > 1 ? trajectory[trajectory.size() - 2] : trajectory.back();
    write_text(cfg.dot_path, network_to_dot(unroll(map, before, last, options)));
  }
  return kOk;
}

int cmd_oracle_check(const RunConfig& cfg, int weeks) {
  const CompetenceMap map = load_map_or_bundled(cfg.map_path);
  std::vector<EvidenceEvent> schedule;
  if (!cfg.evidence_path.empty()) {
    schedule = load_evidence_file(cfg.evidence_path);
  } else if (!cfg.profile.empty()) {
    schedule = builtin_profile(cfg.profile).schedule;
  } else {
    schedule = random_schedule(map, weeks, cfg.seed);
  }
  std::erase_if(schedule, [&](const EvidenceEvent& e) { return e.week > weeks; });
  const OracleReport report = oracle_check(map, schedule, weeks, cfg.options());
  const bool ok = report.max_discrepancy <= 1e-9;
  std::cout << "slices compared: " << report.slices << '\n'
            << "max discrepancy: " << csv::format_number(report.max_discrepancy) << '\n'
            << (ok ? "ok" : "FAILED: discrepancy above 1e-9") << '\n';
  return ok ? kOk : kFailure;
}

int cmd_analyze(const std::string& system_path, const std::string& reference_path,
                const std::string& profile, const std::string& out_path, bool text) {
  const auto system = parse_trace_csv(csv::read_file(system_path));
  const auto reference = parse_reference_csv(csv::read_file(reference_path));
  const AnalysisReport report = analyze(system, reference, profile);
  write_text(out_path, report_csv(report));
  if (text) std::cerr << report_text(report);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competence-map dynamic Bayesian student models"};
  app.require_subcommand(1);

  std::string map_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a competence map file");
  validate_cmd->add_option("map", map_path, "Map file")->required();

  std::string rel;
  int n = -1;
  double relaxation = 1.0;
  auto* tables_cmd = app.add_subcommand("tables", "Dump a conditional probability table as CSV");
  tables_cmd
      ->add_option("--rel", rel, "specialization, inclusion, evidence, temporal or identity")
      ->required();
  tables_cmd->add_option("--n", n, "Sub-competence count (inclusion only)");
  tables_cmd->add_option("--temporal-relaxation", relaxation, "Off-diagonal sigma scale")
      ->check(CLI::PositiveNumber);

  bool dot = false, unrolled = false;
  auto* compile_cmd = app.add_subcommand("compile", "Print a map in canonical form or as DOT");
  compile_cmd->add_option("--map", map_path, "Map file (default: bundled submap)");
  compile_cmd->add_flag("--dot", dot, "Emit GraphViz");
  compile_cmd->add_flag("--unrolled", unrolled, "With --dot: render the one-step network");

  RunConfig cfg;
  auto add_model_flags = [&cfg](CLI::App* cmd) {
    cmd->add_option("--map", cfg.map_path, "Map file (default: bundled submap)");
    cmd->add_flag("--slice1-map-factors", cfg.slice1_map_factors,
                  "Also apply map relationships in the first slice");
    cmd->add_option("--temporal-relaxation", cfg.temporal_relaxation, "Off-diagonal sigma scale")
        ->check(CLI::PositiveNumber);
  };

  auto* trace_cmd = app.add_subcommand("trace", "Roll beliefs forward and write a trace CSV");
  add_model_flags(trace_cmd);
  auto* profile_opt = trace_cmd->add_option("--profile", cfg.profile, "L2M, M2H or LT_M2H");
  auto* evidence_opt = trace_cmd->add_option("--evidence", cfg.evidence_path, "Evidence CSV");
  auto* all_opt = trace_cmd->add_flag("--all-profiles", cfg.all_profiles,
                                      "Trace every builtin profile into --out/<name>.csv");
  profile_opt->excludes(evidence_opt)->excludes(all_opt);
  evidence_opt->excludes(all_opt);
  trace_cmd->add_option("--horizon", cfg.horizon, "Last week (default: profile horizon)")
      ->check(CLI::NonNegativeNumber);
  trace_cmd->add_option("--out", cfg.out_path, "Output file (default: stdout)");
  trace_cmd->add_option("--dot", cfg.dot_path, "Write the last step's network as DOT");

  int weeks = 5;
  auto* oracle_cmd =
      app.add_subcommand("oracle-check", "Compare elimination against joint enumeration");
  add_model_flags(oracle_cmd);
  oracle_cmd->add_option("--weeks", weeks, "Slices to roll out")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--seed", cfg.seed, "Seed for the random evidence schedule");
  auto* o_profile = oracle_cmd->add_option("--profile", cfg.profile, "Use a builtin schedule");
  auto* o_evidence = oracle_cmd->add_option("--evidence", cfg.evidence_path, "Evidence CSV");
  o_profile->excludes(o_evidence);

  std::string system_path, reference_path, analyze_profile, report_path;
  bool text = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compare a trace against teacher estimates");
  analyze_cmd->add_option("--system", system_path, "Trace CSV")->required();
  analyze_cmd->add_option("--reference", reference_path, "Teacher response CSV")->required();
  analyze_cmd->add_option("--profile", analyze_profile, "Profile to select from the reference");
  analyze_cmd->add_option("--out", report_path, "Report CSV (default: stdout)");
  analyze_cmd->add_flag("--text", text, "Also print a readable summary to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(map_path);
    if (*tables_cmd) return cmd_tables(rel, n, relaxation);
    if (*compile_cmd) return cmd_compile(map_path, dot, unrolled);
    if (*trace_cmd) {
      if (cfg.profile.empty() && cfg.evidence_path.empty() && !cfg.all_profiles)
        throw UsageError("trace needs --profile, --evidence or --all-profiles");
      return cmd_trace(cfg);
    }
    if (*oracle_cmd) return cmd_oracle_check(cfg, weeks);
    if (*analyze_cmd)
      return cmd_analyze(system_path, reference_path, analyze_profile, report_path, text);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
