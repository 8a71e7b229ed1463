#include "compdbn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "compdbn/csv.hpp"

namespace compdbn {

namespace {

double interpolate(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median_of(std::vector<double> v) { return quartiles(v).median; }

EstimateSeries series_of(const std::vector<WeekComparison>& weeks, double WeekComparison::*field) {
  std::vector<std::pair<int, double>> pts;
  for (const auto& w : weeks) pts.emplace_back(w.week, w.*field);
  return EstimateSeries(std::move(pts));
}

EstimateSeries teacher_series(const std::vector<WeekComparison>& weeks, double Quartiles::*field) {
  std::vector<std::pair<int, double>> pts;
  for (const auto& w : weeks) pts.emplace_back(w.week, w.teacher.*field);
  return EstimateSeries(std::move(pts));
}

}  // namespace

Quartiles quartiles(std::span<const double> values) {
  if (values.empty()) throw AnalysisError("quartiles of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {interpolate(sorted, 0.25), interpolate(sorted, 0.5), interpolate(sorted, 0.75)};
}

IqrSummary iqr_consistency(const std::vector<std::vector<double>>& per_question_values) {
  if (per_question_values.empty()) throw AnalysisError("no questions to summarize");
  std::vector<double> iqrs;
  iqrs.reserve(per_question_values.size());
  for (const auto& responses : per_question_values) {
    if (responses.empty()) throw AnalysisError("question without responses");
    iqrs.push_back(quartiles(responses).iqr());
  }
  const Quartiles q = quartiles(iqrs);
  const auto [mn, mx] = std::minmax_element(iqrs.begin(), iqrs.end());
  return {*mn, q.q1, q.median, q.q3, *mx, q.iqr()};
}

EstimateSeries::EstimateSeries(std::vector<std::pair<int, double>> points)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i > 0 && points_[i].first <= points_[i - 1].first)
      throw AnalysisError("series weeks must be strictly increasing");
    const double v = points_[i].second;
    if (!(v >= 0.0 && v <= 2.0))
      throw AnalysisError("series value " + csv::format_number(v) + " outside [0, 2]");
  }
}

std::vector<int> EstimateSeries::weeks() const {
  std::vector<int> out;
  for (const auto& [w, v] : points_) out.push_back(w);
  return out;
}

std::vector<double> EstimateSeries::values() const {
  std::vector<double> out;
  for (const auto& [w, v] : points_) out.push_back(v);
  return out;
}

double pearson(const EstimateSeries& a, const EstimateSeries& b) {
  std::map<int, double> bw(b.points().begin(), b.points().end());
  std::vector<double> x, y;
  for (const auto& [w, v] : a.points()) {
    auto it = bw.find(w);
    if (it == bw.end()) continue;
    x.push_back(v);
    y.push_back(it->second);
  }
  if (x.size() != a.size() || x.size() != b.size())
    throw AnalysisError("series weeks do not line up (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + " points, " + std::to_string(x.size()) +
                        " shared)");
  if (x.size() < 2) throw AnalysisError("correlation needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  // Relative threshold: a series that is constant up to rounding has no variance.
  auto flat = [](double ss, double mean, double count) {
    return ss <= count * 1e-24 * std::max(1.0, mean * mean);
  };
  if (flat(sxx, mx, n) || flat(syy, my, n)) throw AnalysisError("series has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double range_coverage(const EstimateSeries& system, const EstimateSeries& q1_series,
                      const EstimateSeries& q3_series) {
  if (system.weeks() != q1_series.weeks() || system.weeks() != q3_series.weeks())
    throw AnalysisError("system and quartile series cover different weeks");
  if (system.size() == 0) throw AnalysisError("coverage of an empty series");
  std::size_t inside = 0;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const double v = system.points()[i].second;
    if (q1_series.points()[i].second <= v && v <= q3_series.points()[i].second) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(system.size());
}

double certainty_to_uncertainty(double certainty) { return (2.0 - certainty) / 2.0; }

std::vector<TeacherResponse> parse_reference_csv(std::string_view text) {
  const auto table =
      csv::parse(text, {"profile", "week", "competence", "respondent", "estimate", "certainty"});
  std::vector<TeacherResponse> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    TeacherResponse r{row[0],
                      csv::parse_int(row[1], line),
                      row[2],
                      row[3],
                      csv::parse_double(row[4], line),
                      csv::parse_double(row[5], line)};
    if (r.estimate < 0.0 || r.estimate > 2.0 || r.certainty < 0.0 || r.certainty > 2.0)
      throw AnalysisError("line " + std::to_string(line) + ": values must lie in [0, 2]");
    out.push_back(std::move(r));
  }
  return out;
}

AnalysisReport analyze(const std::vector<TraceRow>& system,
                       const std::vector<TeacherResponse>& reference, const std::string& profile) {
  std::set<std::string> profiles;
  for (const auto& r : reference) profiles.insert(r.profile);
  std::string selected = profile;
  if (selected.empty()) {
    if (profiles.size() != 1)
      throw AnalysisError("reference holds " + std::to_string(profiles.size()) +
                          " profiles; choose one");
    selected = *profiles.begin();
  } else if (!profiles.count(selected)) {
    throw AnalysisError("reference has no rows for profile '" + selected + "'");
  }

  std::map<std::pair<int, std::string>, const TraceRow*> sys;
  for (const auto& row : system) sys[{row.week, row.competence}] = &row;

  // competence -> week -> responses
  std::map<std::string, std::map<int, std::vector<const TeacherResponse*>>> grouped;
  for (const auto& r : reference)
    if (r.profile == selected) grouped[r.competence][r.week].push_back(&r);

  AnalysisReport report;
  std::vector<std::vector<double>> est_questions, unc_questions;
  for (const auto& [competence, weeks] : grouped) {
    CompetenceComparison cmp{competence, {}, 0.0, 0.0};
    for (const auto& [week, responses] : weeks) {
      auto it = sys.find({week, competence});
      if (it == sys.end())
        throw AnalysisError("system trace has no row for " + competence + " at week " +
                            std::to_string(week));
      std::vector<double> est, unc;
      for (const auto* r : responses) {
        est.push_back(r->estimate);
        unc.push_back(certainty_to_uncertainty(r->certainty));
      }
      cmp.weeks.push_back({week, it->second->average, quartiles(est), it->second->uncertainty,
                           median_of(unc)});
      est_questions.push_back(std::move(est));
      unc_questions.push_back(std::move(unc));
    }
    const auto sys_series = series_of(cmp.weeks, &WeekComparison::system);
    cmp.pearson_r = pearson(sys_series, teacher_series(cmp.weeks, &Quartiles::median));
    cmp.coverage = range_coverage(sys_series, teacher_series(cmp.weeks, &Quartiles::q1),
                                  teacher_series(cmp.weeks, &Quartiles::q3));
    report.competences.push_back(std::move(cmp));
  }
  if (report.competences.empty()) throw AnalysisError("nothing to compare");
  report.estimate_consistency = iqr_consistency(est_questions);
  report.uncertainty_consistency = iqr_consistency(unc_questions);
  return report;
}

std::string report_csv(const AnalysisReport& report) {
  using csv::format_number;
  std::ostringstream out;
  out << "competence,weeks,pearson_r,coverage,system_mean,teacher_median_mean\n";
  for (const auto& c : report.competences) {
    double s = 0.0, t = 0.0;
    for (const auto& w : c.weeks) {
      s += w.system;
      t += w.teacher.median;
    }
    const double n = static_cast<double>(c.weeks.size());
    out << c.competence << ',' << c.weeks.size() << ',' << format_number(c.pearson_r) << ','
        << format_number(c.coverage) << ',' << format_number(s / n) << ','
        << format_number(t / n) << '\n';
  }
  return out.str();
}

std::string report_text(const AnalysisReport& report) {
  using csv::format_number;
  std::ostringstream out;
  for (const auto& c : report.competences) {
    out << c.competence << ": r = " << format_number(c.pearson_r)
        << ", coverage = " << format_number(c.coverage) << '\n';
    out << "  week  system  q1  median  q3  system_unc  teacher_unc\n";
    for (const auto& w : c.weeks) {
      out << "  " << w.week << "  " << format_number(w.system) << "  "
          << format_number(w.teacher.q1) << "  " << format_number(w.teacher.median) << "  "
          << format_number(w.teacher.q3) << "  " << format_number(w.system_uncertainty) << "  "
          << format_number(w.teacher_uncertainty_median) << '\n';
    }
  }
  auto summary = [&](const char* label, const IqrSummary& s) {
    out << label << ": max " << format_number(s.max) << ", q3 " << format_number(s.q3)
        << ", median " << format_number(s.median) << ", q1 " << format_number(s.q1) << ", min "
        << format_number(s.min) << ", IQR " << format_number(s.iqr) << '\n';
  };
  out << "consistency of responses (per-question IQR)\n";
  summary("  estimate", report.estimate_consistency);
  summary("  uncertainty", report.uncertainty_consistency);
  return out.str();
}

}  // namespace compdbn
