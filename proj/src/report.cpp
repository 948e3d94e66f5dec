#include "krontrace/report.hpp"

#include <cmath>
#include <limits>

namespace kt {

void finalize(Report& r) {
  if (r.samples.empty()) {
    r.min_value = r.max_value = 0;
    r.ratio = std::numeric_limits<double>::infinity();
    return;
  }
  r.min_value = r.max_value = r.samples[0].value;
  for (const ReportSample& s : r.samples) {
    r.min_value = std::min(r.min_value, s.value);
    r.max_value = std::max(r.max_value, s.value);
  }
  r.ratio = r.min_value > 0 ? r.max_value / r.min_value
                            : std::numeric_limits<double>::infinity();
}

ReportFit exponent_fit(const std::vector<double>& x,
                       const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionMismatch("fit input lengths");
  const int n = (int)x.size();
  if (n < 2) throw DegenerateFit("need at least two points");
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0))
      throw DegenerateFit("nonpositive value at point " + std::to_string(i));
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0)) throw DegenerateFit("all abscissae equal");
  ReportFit f;
  f.points = n;
  f.exponent = sxy / sxx;
  f.constant = std::exp(my - f.exponent * mx);
  for (int i = 0; i < n; ++i) {
    double p = my + f.exponent * (lx[i] - mx);
    f.residual = std::max(f.residual, std::abs(ly[i] - p));
  }
  return f;
}

std::vector<int> spread_indices(int total, int max_count) {
  std::vector<int> out;
  if (total <= 0 || max_count <= 0) return out;
  if (total <= max_count) {
    out.resize(total);
    for (int i = 0; i < total; ++i) out[i] = i;
    return out;
  }
  for (int k = 0; k < max_count; ++k)
    out.push_back((int)((long long)k * total / max_count));
  return out;
}

}  // namespace kt
