#pragma once
#include <vector>

#include "ips/engine.hpp"
#include "ips/fields.hpp"
#include "ips/model.hpp"
#include "ips/testfn.hpp"

namespace ips {

// translation frame moving at `velocity` sites per unit macroscopic time;
// fields are evaluated against the test function translated by v t
struct MovingFrame {
  double velocity = 0.0;
  int species = -1;
};

// nearest integer site shift accumulated by time t
int frame_shift(const MovingFrame& frame, double t);
// does the shift leave [-n/2, n/2] within the horizon? (wrap-around warning)
bool frame_wraps(const MovingFrame& frame, double horizon, int n);

// f translated s sites to the right: g(x) = f(x - s), tables rotated in step
TestFunction translate(const TestFunction& f, int s);

// mean and standard error of a scalar estimate over an ensemble
struct EstimateWithError {
  double value = 0;
  double se = 0;
};

// fluctuation field of a recorded sample, in the given frame
double density_field(const TrajectoryRecord& rec, const Lattice& lat, const TestFunction& f,
                     double mean, const MovingFrame& frame, size_t sample_index,
                     int species = -1);

// net signed crossings of a bond up to a recorded sample (per species track)
double current_field(const TrajectoryRecord& rec, const Lattice& lat, int bond,
                     size_t sample_index, int track = 0);

// Post-hoc decomposition Y_t = Y_0 + I_t + K_t + M_t evaluated on the recorded
// sample grid with trapezoid quadrature for the two drift integrals; M is the
// pointwise remainder, so the telescoping identity holds by construction. The
// integrands agree with the event-driven tracker; quadrature bias falls with
// the grid spacing.
struct DecompositionSeries {
  std::vector<double> t, y, i_term, k_term, m_term;
};
DecompositionSeries martingale_decomposition(const TrajectoryRecord& rec,
                                             const NearestExclusion& m, const Lattice& lat,
                                             const TestFunction& f, double rho);

// Block-replacement residual: ensemble second moment of
//   int_0^t sum_x v(x) { xi_x xi_{x+1} - (box_L xi)_x^2 + chi(rho)/L } ds
// where box_L is the centered right box average over L sites. Trapezoid rule
// on the recorded grid; refuses grids with fewer than 100 points in [0, t].
EstimateWithError bg_residual(const std::vector<TrajectoryRecord>& ensemble,
                              const Lattice& lat, const std::vector<double>& v, double t,
                              int box, double rho);

// the two sides of the energy estimates: second moments of the linear term
//   int_s^t Y_r(lap_n f) dr
// and of the mollifier gap A^eps - A^delta with
//   A^eps = int_s^t sum_x grad_n f(x) (box_{eps n} xi)_x^2 dr
struct EnergyStats {
  EstimateWithError linear_term;
  EstimateWithError mollifier_gap;
};
EnergyStats energy_estimate_stats(const std::vector<TrajectoryRecord>& ensemble,
                                  const Lattice& lat, const TestFunction& f, double eps,
                                  double delta, double s, double t, double rho);

// stationary space-time correlation S(d) = E[ xi_{x+d}(t_b) xi_x(t_a) ],
// translation- and ensemble-averaged via circular FFT correlation; species
// pairs select centered label indicators for multi-species states
std::vector<double> structure_function(const std::vector<TrajectoryRecord>& ensemble,
                                       const Lattice& lat, size_t sample_a,
                                       size_t sample_b, double mean_a, double mean_b,
                                       int species_a = -1, int species_b = -1);

// window statistics of a correlation profile about a (frame) center, reading
// displacements cyclically
double windowed_mass(const std::vector<double>& s, int center, int window);
double windowed_mean(const std::vector<double>& s, int center, int window);
double windowed_spread(const std::vector<double>& s, int center, int window);

// centered occupation (or label-indicator) vector of one configuration
std::vector<double> centered_sites(const Configuration& c, double mean, int species = -1);

}  // namespace ips
