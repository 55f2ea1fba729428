#pragma once
#include <vector>

#include "ips/engine.hpp"
#include "ips/model.hpp"
#include "ips/testfn.hpp"

namespace ips {

// density fluctuation field Y(f) = n^{-1/2} sum_x f(x/n) (eta_x - mean);
// species >= 0 evaluates the centered indicator of that label instead
double fluctuation_field(const Configuration& c, const TestFunction& f, double mean,
                         int species = -1);

// one snapshot of the decomposition Y_t = Y_0 + I_t + K_t + M_t
struct FieldSample {
  double t = 0;
  double y = 0;        // Y_t(f)
  double drift_sym = 0;   // I_t: accumulated symmetric drift
  double drift_asym = 0;  // K_t: accumulated weak-asymmetry drift
  double qv = 0;          // accumulated predictable quadratic variation
  double y0 = 0;
  double martingale() const { return y - y0 - drift_sym - drift_asym; }
};

// Exact event-driven tracker of the fluctuation field along one trajectory of
// the nearest-neighbour exclusion family under the diffusive clock:
//   Y_t(f) - Y_0(f) = I_t + K_t + M_t
//   I_t = int_0^t (1/2) Y_s(lap_n f) ds
//   K_t = int_0^t h sqrt(n) sum_x grad_n f(x) (eta_x + eta_{x+1} - 2 eta_x eta_{x+1}) ds,
//         h = a/n^gamma the asymmetric rate part
//   <M>_t = int_0^t (1/n) sum_x (grad_n f(x))^2 [p+ 1{(1,0) at x} + p- 1{(0,1) at x}] ds
// Every sum is maintained incrementally, O(1) per event, and the time
// integrals are exact (the state is piecewise constant).
class MartingaleTracker {
 public:
  MartingaleTracker(const NearestExclusion& m, const Lattice& lat, const TestFunction& f,
                    double rho);

  // observer interface for simulate()
  void elapse(const Configuration& c, double dt);
  void on_event(const Configuration& c, const Event& e);
  void sample(double t, const Configuration& c);

  const std::vector<FieldSample>& samples() const { return samples_; }
  // instantaneous integrands, exposed for exact cross-checks
  double drift_integrand(const Configuration& c) const;
  double qv_rate(const Configuration& c) const;
  // largest deviation between the incrementally maintained sums and a fresh
  // recomputation from c; test hook
  double tracking_error(const Configuration& c) const;

 private:
  void init_sums(const Configuration& c);
  double bond_b(const Configuration& c, int x) const;  // eta_x+eta_{x+1}-2 eta_x eta_{x+1}
  double bond_qv(const Configuration& c, int x) const;

  NearestExclusion model_;
  Lattice lat_;
  TestFunction f_;
  double rho_;
  double h_;          // a / n^gamma
  double p_plus_, p_minus_;

  bool init_ = false;
  double y_ = 0, y0_ = 0;
  double y_lap_ = 0;       // Y(lap_n f)
  double sum_b_ = 0;       // sum grad_n f(x) b_x
  double sum_qv_ = 0;      // sum (grad_n f(x))^2 [p+ 1{10} + p- 1{01}]
  double acc_i_ = 0, acc_k_ = 0, acc_qv_ = 0;
  std::vector<FieldSample> samples_;
};

// stationary mean of the quadratic-variation rate under Bernoulli(rho)
double exact_qv_rate(const NearestExclusion& m, const Lattice& lat, const TestFunction& f,
                     double rho);

// realized quadratic variation of the martingale over the recorded mesh
double realized_qv(const std::vector<FieldSample>& samples);

// per-site occupation (or species-indicator) profile of an ensemble of states
std::vector<double> mean_profile(const std::vector<Configuration>& states,
                                 const Lattice& lat, int species = -1);

}  // namespace ips
