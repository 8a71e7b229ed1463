#include "compdbn/metrics.hpp"

#include <cmath>

namespace compdbn {

namespace {

void require_distribution(const Distribution& p) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || x > 1.0 + 1e-9) throw MetricError("probability outside [0, 1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw MetricError("distribution does not sum to 1");
}

}  // namespace

double average(const Distribution& p) {
  require_distribution(p);
  return p[1] + 2.0 * p[2];
}

double uncertainty(const Distribution& p) {
  require_distribution(p);
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s += x * std::log(x);
  const double u = s / std::log(1.0 / 3.0);
  // Rounding can push a uniform distribution a hair past 1 or a point mass below 0.
  return u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u);
}

TraceRow make_trace_row(int week, std::string competence, const Distribution& p) {
  return {week, std::move(competence), average(p), uncertainty(p), p};
}

}  // namespace compdbn
