#pragma once

#include <stdexcept>
#include <string>

#include "compdbn/level.hpp"

namespace compdbn {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Expected level code, sum p(i) * i, in [0, 2].
double average(const Distribution& p);

/// Shannon entropy normalized by ln 3, in [0, 1]. 0 * ln 0 counts as 0.
double uncertainty(const Distribution& p);

/// One competence at one week of a belief trace.
struct TraceRow {
  int week;
  std::string competence;
  double average;
  double uncertainty;
  Distribution p;
};

TraceRow make_trace_row(int week, std::string competence, const Distribution& p);

}  // namespace compdbn
