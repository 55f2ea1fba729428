#pragma once
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ips {

// Welford accumulator; exact mean and unbiased sample variance.
struct RunningStats {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    double d = x - mean;
    mean += d / double(count);
    m2 += d * (x - mean);
  }
  void merge(const RunningStats& o) {
    if (o.count == 0) return;
    if (count == 0) { *this = o; return; }
    double d = o.mean - mean;
    long long nc = count + o.count;
    m2 += o.m2 + d * d * double(count) * double(o.count) / double(nc);
    mean += d * double(o.count) / double(nc);
    count = nc;
  }
  double variance() const { return count > 1 ? m2 / double(count - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  // standard error of the mean
  double se() const { return count > 0 ? std::sqrt(variance() / double(count)) : 0.0; }
};

inline double mean_of(const std::vector<double>& v) {
  RunningStats s;
  for (double x : v) s.add(x);
  return s.mean;
}

inline double se_of(const std::vector<double>& v) {
  RunningStats s;
  for (double x : v) s.add(x);
  return s.se();
}

struct LineFit {
  double slope = 0.0, intercept = 0.0;
  double slope_se = 0.0, intercept_se = 0.0;
  double residual_rms = 0.0;
};

// Ordinary least squares y ~ intercept + slope * x with homoskedastic errors;
// standard errors from the residual variance (needs >= 3 points, else se = 0).
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  size_t m = x.size();
  if (m != y.size() || m < 2) throw std::invalid_argument("fit_line needs >= 2 paired points");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < m; ++i) { sx += x[i]; sy += y[i]; }
  double mx = sx / double(m), my = sy / double(m);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (size_t i = 0; i < m; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / double(m));
  if (m > 2) {
    double s2 = ss / double(m - 2);
    f.slope_se = std::sqrt(s2 / sxx);
    f.intercept_se = std::sqrt(s2 * (1.0 / double(m) + mx * mx / sxx));
  }
  return f;
}

}  // namespace ips
