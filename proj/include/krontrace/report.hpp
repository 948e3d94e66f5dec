#pragma once
#include <string>
#include <vector>

#include "krontrace/errors.hpp"

namespace kt {

struct ReportFit {
  double exponent = 0;  // log-log slope
  double constant = 0;  // multiplier, exp(intercept)
  double residual = 0;  // max absolute log deviation
  int points = 0;
};

struct ReportSample {
  std::string label;
  double x = 0;      // abscissa: radius, level, time, ...
  double lhs = 0;    // the two sides being compared, when meaningful
  double rhs = 0;
  double value = 0;  // the quantity whose spread the report tracks
};

struct Report {
  std::string name;
  std::vector<ReportSample> samples;
  double min_value = 0;
  double max_value = 0;
  double ratio = 0;  // max/min, inf when min is not positive
  bool has_fit = false;
  ReportFit fit;
  bool pass = true;
  std::string note;
};

// fills min/max/ratio from the sample values
void finalize(Report& r);

// least squares of log y on log x; inputs must be positive
ReportFit exponent_fit(const std::vector<double>& x,
                       const std::vector<double>& y);

// up to max_count indices spread evenly over [0, total); all of them when
// total fits. Deterministic, no randomness.
std::vector<int> spread_indices(int total, int max_count);

}  // namespace kt
