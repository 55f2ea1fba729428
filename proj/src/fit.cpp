#include "ips/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ips/estimators.hpp"
#include "ips/stats.hpp"

namespace ips {

double profile_spread(const std::vector<double>& s, const FitOptions& opt) {
  int n = int(s.size());
  if (n < 2 * opt.min_window + 1)
    throw std::invalid_argument("profile_spread: profile shorter than the minimum window");
  if (opt.window_factor <= 0 || opt.min_window < 1)
    throw std::invalid_argument("profile_spread: bad window options");

  int wmax = std::max(opt.min_window, n / 4);
  wmax = std::min(wmax, (n - 1) / 2);
  int center = int(std::max_element(s.begin(), s.end()) - s.begin());
  if (s[center] <= 0) throw std::runtime_error("profile_spread: no positive peak");

  int w = wmax;
  double sigma = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (windowed_mass(s, center, w) <= 0)
      throw std::runtime_error("profile_spread: window mass not positive");
    double mu = windowed_mean(s, center, w);
    int shift = int(std::lround(mu));
    center = ((center + shift) % n + n) % n;
    sigma = windowed_spread(s, center, w);
    int next = std::clamp(int(std::lround(opt.window_factor * sigma)), opt.min_window, wmax);
    if (next == w && shift == 0) return sigma;
    w = next;
  }
  return sigma;
}

ExponentFit fit_dynamic_exponent(const std::vector<double>& times,
                                 const std::vector<std::vector<double>>& profiles,
                                 const FitOptions& opt) {
  size_t m = times.size();
  if (m != profiles.size())
    throw std::invalid_argument("fit_dynamic_exponent: times and profiles differ in length");
  if (m < 5) throw std::invalid_argument("fit_dynamic_exponent: need at least 5 time points");
  for (size_t i = 0; i < m; ++i) {
    if (!(times[i] > 0)) throw std::invalid_argument("fit_dynamic_exponent: times must be positive");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("fit_dynamic_exponent: times must increase strictly");
  }

  ExponentFit fit;
  fit.spreads.resize(m);
  for (size_t i = 0; i < m; ++i) {
    fit.spreads[i] = profile_spread(profiles[i], opt);
    if (fit.spreads[i] <= 0)
      throw std::runtime_error("fit_dynamic_exponent: zero width at t=" +
                               std::to_string(times[i]));
  }
  for (size_t i = 0; i + 1 < m; ++i)
    if (fit.spreads[i + 1] < fit.spreads[i] * (1.0 - opt.monotone_slack))
      throw std::runtime_error("fit_dynamic_exponent: width decreases beyond slack between t=" +
                               std::to_string(times[i]) + " and t=" +
                               std::to_string(times[i + 1]) + " (" +
                               std::to_string(fit.spreads[i]) + " -> " +
                               std::to_string(fit.spreads[i + 1]) + ")");

  std::vector<double> x(m), y(m);
  for (size_t i = 0; i < m; ++i) {
    x[i] = std::log(times[i]);
    y[i] = std::log(fit.spreads[i]);
  }
  LineFit line = fit_line(x, y);
  if (line.slope <= 0)
    throw std::runtime_error("fit_dynamic_exponent: width does not grow with time");

  double my = 0;
  for (double v : y) my += v;
  my /= double(m);
  double ss_tot = 0, ss_res = 0;
  for (size_t i = 0; i < m; ++i) {
    double r = y[i] - (line.intercept + line.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.exponent = 1.0 / line.slope;
  fit.std_error = line.slope_se / (line.slope * line.slope);
  fit.window_lo = times.front();
  fit.window_hi = times.back();
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

const char* fluctuation_class_name(FluctuationClass c) {
  switch (c) {
    case FluctuationClass::ew: return "EW";
    case FluctuationClass::kpz: return "KPZ";
    default: return "inconclusive";
  }
}

CrossoverReport classify_crossover(
    const std::vector<std::pair<double, ExponentFit>>& fits, double ew_band,
    double kpz_band) {
  if (fits.empty()) throw std::invalid_argument("classify_crossover: empty fit table");
  if (!(ew_band >= kpz_band))
    throw std::invalid_argument("classify_crossover: decision bands overlap");
  CrossoverReport rep;
  rep.ew_band = ew_band;
  rep.kpz_band = kpz_band;
  for (const auto& [gamma, fit] : fits) {
    CrossoverRow row;
    row.gamma = gamma;
    row.exponent = fit.exponent;
    row.std_error = fit.std_error;
    if (fit.exponent > ew_band)
      row.label = FluctuationClass::ew;
    else if (fit.exponent < kpz_band)
      row.label = FluctuationClass::kpz;
    else
      row.label = FluctuationClass::inconclusive;
    rep.rows.push_back(row);
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const CrossoverRow& a, const CrossoverRow& b) { return a.gamma < b.gamma; });
  return rep;
}

}  // namespace ips
