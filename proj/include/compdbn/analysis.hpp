#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "compdbn/metrics.hpp"

namespace compdbn {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Quartiles {
  double q1;
  double median;
  double q3;

  double iqr() const { return q3 - q1; }
};

/// Linear interpolation at positions p * (n - 1) of the sorted values.
Quartiles quartiles(std::span<const double> values);

struct IqrSummary {
  double min;
  double q1;
  double median;
  double q3;
  double max;
  double iqr;  // IQR of the per-question IQRs
};

/// Five-number summary of per-question IQRs, plus their own IQR.
IqrSummary iqr_consistency(const std::vector<std::vector<double>>& per_question_values);

/// Weekly estimates on the 0..2 level scale.
class EstimateSeries {
 public:
  EstimateSeries() = default;
  explicit EstimateSeries(std::vector<std::pair<int, double>> points);

  const std::vector<std::pair<int, double>>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::vector<int> weeks() const;
  std::vector<double> values() const;

 private:
  std::vector<std::pair<int, double>> points_;
};

/// Product-moment correlation of two series joined on week.
double pearson(const EstimateSeries& a, const EstimateSeries& b);

/// Fraction of weeks with q1 <= system <= q3.
double range_coverage(const EstimateSeries& system, const EstimateSeries& q1_series,
                      const EstimateSeries& q3_series);

/// One row of a teacher reference file.
struct TeacherResponse {
  std::string profile;
  int week;
  std::string competence;
  std::string respondent;
  double estimate;   // 0, 0.5, 1, 1.5 or 2
  double certainty;  // same scale, 2 = fully certain
};

/// Certainty on the 0..2 scale turned into a 0..1 uncertainty.
double certainty_to_uncertainty(double certainty);

/// CSV with header `profile,week,competence,respondent,estimate,certainty`.
std::vector<TeacherResponse> parse_reference_csv(std::string_view text);

struct WeekComparison {
  int week;
  double system;
  Quartiles teacher;
  double system_uncertainty;
  double teacher_uncertainty_median;
};

struct CompetenceComparison {
  std::string competence;
  std::vector<WeekComparison> weeks;
  double pearson_r;
  double coverage;
};

struct AnalysisReport {
  std::vector<CompetenceComparison> competences;
  IqrSummary estimate_consistency;
  IqrSummary uncertainty_consistency;
};

/// Compares a system trace against teacher responses. `profile` selects rows
/// of the reference file; empty means the file must hold a single profile.
AnalysisReport analyze(const std::vector<TraceRow>& system,
                       const std::vector<TeacherResponse>& reference,
                       const std::string& profile = {});

std::string report_csv(const AnalysisReport& report);
std::string report_text(const AnalysisReport& report);

}  // namespace compdbn
