#pragma once
#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "ips/lattice.hpp"

namespace ips {

// scalar profile on a uniform torus grid; values live at cell centers
// u_i = (i + 1/2)/m so block-averaged lattice profiles align with it
struct GridFunction {
  std::vector<double> values;
  double time = 0.0;

  int size() const { return int(values.size()); }
};

GridFunction grid_from_function(const std::function<double(double)>& f, int m);
// torus integral (1/m) sum
double grid_mass(const GridFunction& g);

// spectral heat solver, exact per Fourier mode
GridFunction solve_heat(const GridFunction& init, double t, double diffusivity);

// spectral fractional heat solver: multiplier exp(-c |2 pi k|^alpha t)
GridFunction solve_fractional_heat(const GridFunction& init, double t, double alpha_exp,
                                   double c);

// d/dt rho = 1/2 lap rho + (1 - 2 b_plus) grad(rho(1-rho));
// central second-order finite differences in conservative form, RK2 in time
GridFunction solve_viscous_burgers(const GridFunction& init, double t, double b_plus);

// d/dt rho = (1 - 2 b_plus) grad(rho(1-rho)); Godunov finite volumes
GridFunction solve_inviscid_burgers(const GridFunction& init, double t, double b_plus);

// coupled two-density system d/dt rho = lap rho - grad(X(rho) g), where
// g = (E_A - E_C, E_B - E_C); aborts if the simplex constraint decays
std::pair<GridFunction, GridFunction> solve_two_species(const GridFunction& a,
                                                        const GridFunction& b, double t,
                                                        const std::array<double, 3>& fields);

// stationary time covariance of Fourier mode k of the Ornstein-Uhlenbeck
// field dY = A lap Y dt + sqrt(2 A chi) grad dW:
//   E[Y_t(k) conj(Y_0(k))] = static_variance * exp(-A (2 pi k)^2 t)
double ou_mode_covariance(int k, double t, double a_coef, double static_variance);

// block-averaged occupation (or species) profile of a configuration on a
// coarser grid of `blocks` cells; n must be divisible by blocks
std::vector<double> block_profile(const Configuration& c, int blocks, int species = -1);

enum class ProfileNorm { l1, linf };

// norm of the difference between an empirical profile and a PDE solution;
// when sizes differ by an integer factor the finer side is block-averaged
// down (piecewise-constant aggregation) before comparison
double hydro_compare(const std::vector<double>& empirical, const GridFunction& pde,
                     ProfileNorm norm);

}  // namespace ips
