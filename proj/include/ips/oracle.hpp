#pragma once
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ips/measure.hpp"
#include "ips/model.hpp"

namespace ips {

// Exact finite-state reference: enumerates the communicating sector of a small
// system, assembles the generator, and evaluates distributions, transient
// expectations and Dirichlet-form quantities to near machine precision.
// Everything here runs in microscopic (un-accelerated) time; callers multiply
// by the clock factor themselves.
class ExactChain {
 public:
  // The state space is the conserved sector of `representative` (all particle
  // or species counts equal), or every admissible state for the reservoir
  // family. Sizes are meant for n <= ~12 exclusion / ~9 species.
  ExactChain(const RateModel& model, const Lattice& lat, const Configuration& representative);

  int size() const { return int(states_.size()); }
  const Configuration& state(int i) const { return states_[i]; }
  int index_of(const Configuration& c) const;
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& generator() const { return q_; }

  // unnormalized product-measure weights restricted to the sector
  std::vector<double> product_weights(const ProductMeasure& m) const;
  static std::vector<double> normalized(std::vector<double> w);

  // ||nu^T Q||_inf / ||nu||_inf for the (unnormalized is fine) row vector nu
  double stationarity_residual(const std::vector<double>& nu) const;

  // nu^T e^{Q t} by uniformization, Poisson tails below 1e-13
  std::vector<double> evolve(const std::vector<double>& nu, double t) const;
  // E_nu[g(eta_t)]
  double transient_expectation(const std::vector<double>& nu, const std::vector<double>& g,
                               double t) const;
  // int_0^t E_nu[g(eta_s)] ds, exact closed form through Poisson tail sums
  double time_integrated_expectation(const std::vector<double>& nu,
                                     const std::vector<double>& g, double t) const;

  // carre du champ: Gamma(g)(sigma) = sum_{sigma'} Q(sigma,sigma') (g'-g)^2
  std::vector<double> gamma_g(const std::vector<double>& g) const;
  // apply the generator to an observable
  std::vector<double> generator_apply(const std::vector<double>& g) const;

  // smallest nonzero decay rate: -max{ Re lambda : Re lambda < -tol }; dense
  double spectral_gap() const;

  // mean of g under the weight vector
  double expectation(const std::vector<double>& nu, const std::vector<double>& g) const;

 private:
  uint64_t encode(const Configuration& c) const;
  void build_space(const Configuration& representative);
  void build_generator();

  RateModel model_;
  Lattice lat_;
  std::vector<Configuration> states_;
  std::unordered_map<uint64_t, int> index_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> q_;
  double uniformization_rate_ = 0;
};

}  // namespace ips
