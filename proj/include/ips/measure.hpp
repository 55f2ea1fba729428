#pragma once
#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "ips/lattice.hpp"
#include "ips/rng.hpp"

namespace ips {

inline double chi(double rho) { return rho * (1.0 - rho); }

// Homogeneous product measures: Bernoulli(rho) occupation, or i.i.d. species
// labels with P(A)=rho_a, P(B)=rho_b, P(C)=1-rho_a-rho_b. Parameters are kept
// strictly inside the open simplex so that static covariances are
// non-degenerate.
struct ProductMeasure {
  StateKind kind = StateKind::exclusion;
  double rho = 0.5;             // exclusion density
  double rho_a = 1.0 / 3, rho_b = 1.0 / 3;  // species densities

  static ProductMeasure bernoulli(double rho) {
    if (!(rho > 0.0 && rho < 1.0))
      throw std::invalid_argument("bernoulli density must lie in (0,1)");
    ProductMeasure m;
    m.kind = StateKind::exclusion;
    m.rho = rho;
    return m;
  }
  static ProductMeasure abc(double rho_a, double rho_b) {
    if (!(rho_a > 0.0 && rho_b > 0.0 && rho_a + rho_b < 1.0))
      throw std::invalid_argument("species densities must lie in the open simplex");
    ProductMeasure m;
    m.kind = StateKind::species;
    m.rho_a = rho_a;
    m.rho_b = rho_b;
    return m;
  }

  double rho_c() const { return 1.0 - rho_a - rho_b; }
  // mean of the site value used by fluctuation fields: occupation for
  // exclusion, species-a indicator otherwise
  double mean(int species = 1) const {
    if (kind == StateKind::exclusion) return rho;
    return species == 0 ? rho_a : species == 1 ? rho_b : rho_c();
  }
  double static_variance() const { return chi(rho); }

  double species_density(int a) const {
    return a == 0 ? rho_a : a == 1 ? rho_b : rho_c();
  }
  // single-site covariance of centered species indicators
  double site_cov(int a, int b) const {
    double pa = species_density(a), pb = species_density(b);
    return a == b ? pa * (1.0 - pa) : -pa * pb;
  }
  // covariance of the two conserved indicators (A,B)
  Eigen::Matrix2d gamma_cov() const {
    Eigen::Matrix2d g;
    g << site_cov(0, 0), site_cov(0, 1), site_cov(1, 0), site_cov(1, 1);
    return g;
  }
};

inline uint8_t sample_site(const ProductMeasure& m, Rng& rng) {
  if (m.kind == StateKind::exclusion) return m.rho > rng.uniform() ? 1 : 0;
  double u = rng.uniform();
  if (u < m.rho_a) return 0;
  if (u < m.rho_a + m.rho_b) return 1;
  return 2;
}

inline Configuration sample_configuration(const ProductMeasure& m, const Lattice& lat,
                                          uint64_t seed) {
  Rng rng(seed);
  Configuration c;
  c.kind = m.kind;
  c.sites.assign(lat.n, 0);
  for (int x = lat.first_site(); x < lat.n; ++x) c.sites[x] = sample_site(m, rng);
  return c;
}

// Slowly varying product measure: site x is drawn with density profile(x/n).
// Exclusion profile: one density in (0,1). Species profile: (rho_a, rho_b).
struct ProfileMeasure {
  StateKind kind = StateKind::exclusion;
  std::vector<double> rho;                 // exclusion, size n
  std::vector<std::pair<double, double>> rho_ab;  // species, size n

  static ProfileMeasure exclusion_profile(std::vector<double> densities) {
    for (double r : densities)
      if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("profile density outside [0,1]");
    ProfileMeasure p;
    p.kind = StateKind::exclusion;
    p.rho = std::move(densities);
    return p;
  }
  static ProfileMeasure species_profile(std::vector<std::pair<double, double>> densities) {
    for (auto [a, b] : densities)
      if (!(a >= 0.0 && b >= 0.0 && a + b <= 1.0))
        throw std::invalid_argument("species profile outside the simplex");
    ProfileMeasure p;
    p.kind = StateKind::species;
    p.rho_ab = std::move(densities);
    return p;
  }
};

inline Configuration sample_configuration(const ProfileMeasure& m, const Lattice& lat,
                                          uint64_t seed) {
  Rng rng(seed);
  Configuration c;
  c.kind = m.kind;
  c.sites.assign(lat.n, 0);
  for (int x = lat.first_site(); x < lat.n; ++x) {
    if (m.kind == StateKind::exclusion) {
      if (int(m.rho.size()) != lat.n) throw std::invalid_argument("profile size mismatch");
      c.sites[x] = rng.uniform() < m.rho[x] ? 1 : 0;
    } else {
      if (int(m.rho_ab.size()) != lat.n) throw std::invalid_argument("profile size mismatch");
      auto [a, b] = m.rho_ab[x];
      double u = rng.uniform();
      c.sites[x] = u < a ? 0 : (u < a + b ? 1 : 2);
    }
  }
  return c;
}

}  // namespace ips
