#pragma once

#include <utility>
#include <vector>

namespace ips {

// power-law fit of the spreading width of correlation profiles,
// sigma(t) = c t^{1/z}; exponent holds z
struct ExponentFit {
  double exponent = 0.0;
  double std_error = 0.0;
  double window_lo = 0.0;  // first and last times entering the fit
  double window_hi = 0.0;
  double r_squared = 0.0;
  std::vector<double> spreads;  // measured widths, one per input time
};

struct FitOptions {
  int min_window = 3;           // smallest half-width in sites
  double window_factor = 4.0;   // target half-width = factor * width
  int max_iterations = 32;
  double monotone_slack = 0.1;  // tolerated fractional dip between widths
};

// second-moment width of one profile about its peak; the window recentres on
// the local mean and adapts its half-width to ~4 widths, capped at a quarter
// ring so far-field noise stays out
double profile_spread(const std::vector<double>& s, const FitOptions& opt = {});

// log-log least squares of width against time; profiles must be handed over
// in the frame of the tracked mode, times strictly increasing and positive
ExponentFit fit_dynamic_exponent(const std::vector<double>& times,
                                 const std::vector<std::vector<double>>& profiles,
                                 const FitOptions& opt = {});

enum class FluctuationClass { ew, kpz, inconclusive };

const char* fluctuation_class_name(FluctuationClass c);

struct CrossoverRow {
  double gamma = 0.0;
  double exponent = 0.0;
  double std_error = 0.0;
  FluctuationClass label = FluctuationClass::inconclusive;
};

struct CrossoverReport {
  std::vector<CrossoverRow> rows;  // ascending in gamma
  double ew_band = 0.0;            // exponent above -> ew
  double kpz_band = 0.0;           // exponent below -> kpz
};

// decision table over an asymmetry-strength grid; bands overridable
CrossoverReport classify_crossover(
    const std::vector<std::pair<double, ExponentFit>>& fits, double ew_band = 1.8,
    double kpz_band = 1.65);

}  // namespace ips
