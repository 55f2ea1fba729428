#pragma once
#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "ips/lattice.hpp"

namespace ips {

// Nearest-neighbour exclusion on the ring. A particle at x jumps to x+1 with
// rate p(1) = b_plus + a/n^gamma and to x-1 with rate p(-1) = b_minus -
// a/n^gamma, target occupancy permitting. The weakly asymmetric family used
// throughout the experiments is wasep(lambda, gamma) with rates
// 1/2 +- lambda/(2 n^gamma); note the factory stores a = lambda/2.
struct NearestExclusion {
  double b_plus = 0.5, b_minus = 0.5;
  double a = 0.0;
  double gamma = 0.0;

  double p_plus(int n) const { return b_plus + a / std::pow(double(n), gamma); }
  double p_minus(int n) const { return b_minus - a / std::pow(double(n), gamma); }
};

inline NearestExclusion ssep() { return NearestExclusion{0.5, 0.5, 0.0, 0.0}; }
inline NearestExclusion asep(double b_plus, double b_minus) {
  return NearestExclusion{b_plus, b_minus, 0.0, 0.0};
}
// rates 1/2 +- lambda/(2 n^gamma)
inline NearestExclusion wasep(double lambda, double gamma) {
  return NearestExclusion{0.5, 0.5, lambda / 2.0, gamma};
}

// Exclusion with jump law p(z) = c_sign(z)/|z|^{1+alpha}, alpha in (0,2),
// displacements folded mod n and truncated to |z| <= min(max_range, n/2).
struct LongJumpExclusion {
  double alpha = 1.5;
  double c_plus = 1.0, c_minus = 1.0;
  int max_range = 1 << 20;

  int range(const Lattice& lat) const { return std::min(max_range, lat.n / 2); }
  double p(long long z) const {
    if (z == 0) return 0.0;
    double c = z > 0 ? c_plus : c_minus;
    return c / std::pow(std::abs(double(z)), 1.0 + alpha);
  }
};

// Ring exclusion whose bond (n-1,0) carries rates alpha_sb/(2 n^beta_sb) +-
// a/n^gamma while every other bond carries 1/2 +- a/n^gamma. The asymmetric
// part is uniform across bonds, which keeps the Bernoulli product measure
// exactly stationary.
struct SlowBond {
  double alpha_sb = 1.0;
  double beta_sb = 1.0;
  double a = 0.0;
  double gamma = 0.0;

  double bulk_plus(int n) const { return 0.5 + a / std::pow(double(n), gamma); }
  double bulk_minus(int n) const { return 0.5 - a / std::pow(double(n), gamma); }
  double slow_base(int n) const { return 0.5 * alpha_sb / std::pow(double(n), beta_sb); }
  double slow_plus(int n) const { return slow_base(n) + a / std::pow(double(n), gamma); }
  double slow_minus(int n) const { return slow_base(n) - a / std::pow(double(n), gamma); }
};

// Open segment {1,...,n-1} with bulk rates 1/2 +- a/n^gamma and boundary
// injection/removal: site 1 fills at alpha_res/n^theta and empties at
// (1-alpha_res)/n^theta; site n-1 fills at beta_res/n^theta and empties at
// (1-beta_res)/n^theta.
struct BoundaryReservoir {
  double theta = 0.0;
  double alpha_res = 0.5, beta_res = 0.5;
  double a = 0.0;
  double gamma = 0.0;

  double bulk_plus(int n) const { return 0.5 + a / std::pow(double(n), gamma); }
  double bulk_minus(int n) const { return 0.5 - a / std::pow(double(n), gamma); }
  double boundary_scale(int n) const { return std::pow(double(n), -theta); }
};

// Three-species exchange on the ring: adjacent unlike labels (alpha,beta) at
// (x,x+1) swap with rate exp((E_alpha - E_beta)/(2 n^gamma)). Swaps of equal
// labels are no-ops and never scheduled.
struct AbcExchange {
  std::array<double, 3> fields{0.0, 0.0, 0.0};
  double gamma = 1.0;

  double rate(int a, int b, int n) const {
    return std::exp((fields[a] - fields[b]) / (2.0 * std::pow(double(n), gamma)));
  }
};

using RateModel =
    std::variant<NearestExclusion, LongJumpExclusion, SlowBond, BoundaryReservoir, AbcExchange>;

// exchange rate for the ordered label pair (a,b); equals 1 for equal labels
inline double abc_bond_rate(const AbcExchange& m, int a, int b, int n) {
  return m.rate(a, b, n);
}

enum class EventKind : uint8_t { exchange, jump, inject, remove };

// One admissible transition of the un-accelerated chain.
//   exchange: bond x, swaps sites (x, y)
//   jump:     particle moves x -> y (long-jump family)
//   inject/remove: boundary site x
struct Event {
  EventKind kind;
  int x = 0;
  int y = 0;
  double rate = 0.0;
};

// Throws std::invalid_argument when parameters or rates are inconsistent at
// this lattice size (negative rates, bad exponents, wrong topology).
void validate_model(const RateModel& model, const Lattice& lat);

StateKind state_kind(const RateModel& model);

// All events with positive rate out of `c`: the support of the generator row.
std::vector<Event> event_catalog(const RateModel& model, const Configuration& c,
                                 const Lattice& lat);

void apply_event(Configuration& c, const Event& e);

// Un-accelerated rate of the exchange event across bond x in the current
// configuration (0 when the bond carries no admissible exchange).
double bond_rate(const RateModel& model, const Configuration& c, const Lattice& lat, int x);

// Signed microscopic current across bond x: rate of mass crossing left-to-right
// minus right-to-left. For the species models, the current of the indicator of
// `species`. Undefined (throws) for the long-jump family, where mass crosses a
// bond from many sources.
double instantaneous_current(const RateModel& model, const Configuration& c,
                             const Lattice& lat, int x, int species = 1);

std::string model_name(const RateModel& model);

}  // namespace ips
