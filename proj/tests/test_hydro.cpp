#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "ips/fft.hpp"
#include "ips/hydro.hpp"
#include "ips/rng.hpp"

using namespace ips;

namespace {
constexpr double kPi = 3.14159265358979323846;

double linf(const GridFunction& a, const GridFunction& b) {
  double m = 0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

// circular center of mass of a profile via the phase of its first mode
double bump_center(const GridFunction& g) {
  std::complex<double> c1 = 0;
  const int m = g.size();
  for (int i = 0; i < m; ++i) {
    double u = (i + 0.5) / m;
    c1 += g.values[i] * std::exp(std::complex<double>(0, -2 * kPi * u));
  }
  double u0 = -std::arg(c1) / (2 * kPi);
  return u0 - std::floor(u0);
}

double circular_shift(double after, double before) {
  double d = after - before;
  d -= std::round(d);
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("hydro");

TEST_CASE("heat solver is exact on eigenfunctions and conserves mass") {
  const int m = 64;
  GridFunction flat = grid_from_function([](double) { return 0.7; }, m);
  GridFunction out = solve_heat(flat, 0.3, 1.0);
  CHECK(linf(out, flat) < 1e-13);
  CHECK(out.time == doctest::Approx(0.3));

  GridFunction wave = grid_from_function([](double u) { return std::cos(2 * kPi * u); }, m);
  double t = 0.05;
  GridFunction decayed = solve_heat(wave, t, 1.0);
  double factor = std::exp(-4 * kPi * kPi * t);
  for (int i = 0; i < m; ++i)
    CHECK(std::abs(decayed.values[i] - factor * wave.values[i]) < 1e-12);

  GridFunction bumpy = grid_from_function(
      [](double u) { return 0.5 + 0.2 * std::sin(2 * kPi * u) + 0.1 * std::cos(6 * kPi * u); },
      m);
  CHECK(std::abs(grid_mass(solve_heat(bumpy, 0.2, 0.5)) - grid_mass(bumpy)) < 1e-12);
  CHECK(linf(solve_heat(bumpy, 0.0, 1.0), bumpy) < 1e-12);
}

TEST_CASE("fractional heat solver") {
  const int m = 64;
  GridFunction init = grid_from_function(
      [](double u) { return 0.5 + 0.2 * std::sin(2 * kPi * u) + 0.05 * std::cos(4 * kPi * u); },
      m);
  // exponent 2 coincides with the heat semigroup
  GridFunction a = solve_fractional_heat(init, 0.07, 2.0, 0.8);
  GridFunction b = solve_heat(init, 0.07, 0.8);
  CHECK(linf(a, b) < 1e-13);

  // single mode decays by the fractional multiplier
  GridFunction wave = grid_from_function([](double u) { return std::sin(2 * kPi * u); }, m);
  double t = 0.1, alpha = 1.5, c = 0.7;
  GridFunction dec = solve_fractional_heat(wave, t, alpha, c);
  double factor = std::exp(-c * std::pow(2 * kPi, alpha) * t);
  for (int i = 0; i < m; ++i)
    CHECK(std::abs(dec.values[i] - factor * wave.values[i]) < 1e-12);

  CHECK(std::abs(grid_mass(dec) - grid_mass(wave)) < 1e-12);
  CHECK_THROWS_AS(solve_fractional_heat(init, 0.1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_fractional_heat(init, 0.1, 2.5, 1.0), std::invalid_argument);
}

TEST_CASE("viscous solver: constants, mass, and second-order convergence") {
  auto profile = [](double u) { return 0.5 + 0.1 * std::sin(2 * kPi * u); };
  const double t = 0.1;

  GridFunction flat = grid_from_function([](double) { return 0.42; }, 64);
  CHECK(linf(solve_viscous_burgers(flat, 0.3, 1.0), flat) == 0.0);

  GridFunction init = grid_from_function(profile, 128);
  GridFunction evolved = solve_viscous_burgers(init, t, 1.0);
  CHECK(std::abs(grid_mass(evolved) - grid_mass(init)) < 1e-10);

  // symmetric case: drift coefficient vanishes, so the scheme solves the heat
  // equation; measure its order against the spectral solution on each grid
  double err[2];
  int idx = 0;
  for (int m : {64, 128}) {
    GridFunction i0 = grid_from_function(profile, m);
    err[idx++] = linf(solve_viscous_burgers(i0, t, 0.5), solve_heat(i0, t, 0.5));
  }
  double order_sym = std::log2(err[0] / err[1]);
  CHECK(order_sym > 1.8);

  // nonlinear case: Richardson self-convergence between grid pairs
  auto coarse_err = [&](int m) {
    GridFunction fine = solve_viscous_burgers(grid_from_function(profile, 2 * m), t, 1.0);
    GridFunction coarse = solve_viscous_burgers(grid_from_function(profile, m), t, 1.0);
    return hydro_compare(fine.values, coarse, ProfileNorm::linf);
  };
  double e1 = coarse_err(64), e2 = coarse_err(128);
  CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("viscous solver advects a low bump rightward for b_plus = 1") {
  const int m = 256;
  GridFunction init = grid_from_function([](double u) {
    double c = 0.5 + 0.5 * std::cos(2 * kPi * (u - 0.3));
    return 0.05 + 0.15 * std::pow(c, 8);
  }, m);
  GridFunction out = solve_viscous_burgers(init, 0.05, 1.0);
  double shift = circular_shift(bump_center(out), bump_center(init));
  CHECK(shift > 0.02);
  CHECK(shift < 0.06);
}

TEST_CASE("entropy solver: frozen shock, rarefaction, conservation") {
  const int m = 128;
  GridFunction flat = grid_from_function([](double) { return 0.3; }, m);
  CHECK(linf(solve_inviscid_burgers(flat, 0.5, 1.0), flat) == 0.0);

  // increasing step 0 -> 1 across the middle: in this concave flux that jump
  // is a stationary admissible shock, and Godunov keeps it frozen.  (The wrap
  // interface of the same data is a rarefaction, so only cells out of its
  // reach are compared.)
  GridFunction up = grid_from_function([](double u) { return u < 0.5 ? 0.0 : 1.0; }, m);
  GridFunction frozen = solve_inviscid_burgers(up, 0.2, 1.0);
  double shock_err = 0;
  for (int i = int(0.44 * m); i < int(0.57 * m); ++i)
    shock_err = std::max(shock_err, std::abs(frozen.values[i] - up.values[i]));
  CHECK(shock_err < 1e-13);
  CHECK(std::abs(grid_mass(frozen) - 0.5) < 1e-12);

  // decreasing step 1 -> 0 opens a rarefaction fan around the interface
  GridFunction down = grid_from_function([](double u) { return u < 0.5 ? 1.0 : 0.0; }, m);
  GridFunction fan = solve_inviscid_burgers(down, 0.1, 1.0);
  CHECK(std::abs(grid_mass(fan) - 0.5) < 1e-12);
  for (double v : fan.values) {
    CHECK(v >= -1e-12);
    CHECK(v <= 1 + 1e-12);
  }
  int mid = m / 2;
  CHECK(fan.values[mid + 2] > 1e-3);          // fan reached past the jump
  CHECK(fan.values[mid + 2] < 0.5);           // but only partially filled
  CHECK(std::abs(fan.values[m / 10] - 1.0) < 1e-13);   // far field untouched
  CHECK(std::abs(fan.values[9 * m / 10]) < 1e-13);
}

TEST_CASE("two-species solver: decoupling, conservation, drift direction") {
  const int m = 128;
  auto wave = [](double u) { return 1.0 / 3 + 0.05 * std::sin(2 * kPi * u); };
  GridFunction a0 = grid_from_function(wave, m);
  GridFunction b0 = grid_from_function([](double) { return 1.0 / 3; }, m);

  // equal fields decouple into diffusivity-1 heat equations
  auto [ah, bh] = solve_two_species(a0, b0, 0.02, {3.0, 3.0, 3.0});
  CHECK(linf(bh, b0) < 1e-12);
  double err[2];
  int idx = 0;
  for (int g : {64, 128}) {
    GridFunction ai = grid_from_function(wave, g);
    GridFunction bi = grid_from_function([](double) { return 1.0 / 3; }, g);
    auto [au, bu] = solve_two_species(ai, bi, 0.02, {3.0, 3.0, 3.0});
    err[idx++] = linf(au, solve_heat(ai, 0.02, 1.0));
  }
  CHECK(std::log2(err[0] / err[1]) > 1.8);

  // constant simplex point is stationary under any fields
  GridFunction ca = grid_from_function([](double) { return 1.0 / 3; }, m);
  auto [cs, cb] = solve_two_species(ca, ca, 0.1, {0.9, 0.4, -0.2});
  CHECK(linf(cs, ca) < 1e-12);
  CHECK(linf(cb, ca) < 1e-12);

  // generic fields conserve each species' mass
  GridFunction gb = grid_from_function(
      [](double u) { return 1.0 / 3 - 0.04 * std::cos(2 * kPi * u); }, m);
  auto [ma, mb] = solve_two_species(a0, gb, 0.02, {0.8, 0.3, 0.0});
  CHECK(std::abs(grid_mass(ma) - grid_mass(a0)) < 1e-10);
  CHECK(std::abs(grid_mass(mb) - grid_mass(gb)) < 1e-10);

  // a lone low bump of the first species rides its field difference rightward
  GridFunction bump = grid_from_function([](double u) {
    double c = 0.5 + 0.5 * std::cos(2 * kPi * (u - 0.3));
    return 0.05 + 0.15 * std::pow(c, 8);
  }, m);
  GridFunction empty = grid_from_function([](double) { return 0.0; }, m);
  auto [da, db] = solve_two_species(bump, empty, 0.05, {1.0, 0.0, 0.0});
  CHECK(linf(db, empty) < 1e-12);
  double shift = circular_shift(bump_center(da), bump_center(bump));
  CHECK(shift > 0.02);
  CHECK(shift < 0.06);

  // leaving the simplex is refused with a diagnostic
  GridFunction bad = grid_from_function([](double) { return 1.2; }, m);
  CHECK_THROWS_AS(solve_two_species(bad, empty, 0.0, {0.0, 0.0, 0.0}), std::runtime_error);
}

TEST_CASE("mode covariance closed form and simulated cross-check") {
  CHECK(ou_mode_covariance(1, 0.0, 0.5, 0.25) == doctest::Approx(0.25));
  CHECK(ou_mode_covariance(0, 5.0, 0.5, 0.25) == doctest::Approx(0.25));
  double expected = 0.25 * std::exp(-0.98696044010893586);
  CHECK(ou_mode_covariance(1, 0.05, 0.5, 0.25) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ou_mode_covariance(1, 0.1, 0.5, 0.25) < ou_mode_covariance(1, 0.05, 0.5, 0.25));
  CHECK_THROWS_AS(ou_mode_covariance(1, 0.1, 0.0, 0.25), std::invalid_argument);

  // Euler-Maruyama integration of the mode equation reproduces the lag
  // covariance within sampling error
  const double a_coef = 0.5, chi_val = 0.25, k = 1.0;
  const double rate = a_coef * std::pow(2 * kPi * k, 2);
  const double noise = std::sqrt(2 * a_coef * chi_val) * 2 * kPi * k;
  const double dt = 5e-4, horizon = 400.0, lag = 0.05;
  const int steps = int(horizon / dt), lag_steps = int(lag / dt);
  Rng rng(321);
  std::vector<double> path(steps);
  double y = 0;
  for (int s = 0; s < steps; ++s) {
    double g1 = std::sqrt(-2.0 * std::log(rng.uniform_pos())) *
                std::cos(2 * kPi * rng.uniform());
    y += -rate * y * dt + noise * std::sqrt(dt) * g1;
    path[s] = y;
  }
  int burn = steps / 10;
  double acc = 0;
  int count = 0;
  for (int s = burn; s + lag_steps < steps; ++s) {
    acc += path[s] * path[s + lag_steps];
    ++count;
  }
  double emp = acc / count;
  CHECK(std::abs(emp - expected) < 0.018);  // ~4 effective standard errors
}

TEST_CASE("profiles, coarsening, and comparison norms") {
  Configuration c = configuration_from_string("11001010");
  auto p4 = block_profile(c, 4);
  CHECK(p4 == std::vector<double>{1.0, 0.0, 0.5, 0.5});
  auto p2 = block_profile(c, 2);
  CHECK(p2 == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(block_profile(c, 3), std::invalid_argument);

  Configuration s = configuration_from_string("AABBCCAB");
  CHECK(block_profile(s, 4, 0) == std::vector<double>{1.0, 0.0, 0.0, 0.5});
  CHECK(block_profile(s, 4, 2) == std::vector<double>{0.0, 0.0, 1.0, 0.0});

  GridFunction g;
  g.values = {0.2, 0.4, 0.6, 0.8};
  CHECK(hydro_compare(g.values, g, ProfileNorm::l1) == 0.0);
  std::vector<double> emp = {0.3, 0.4, 0.5, 0.8};
  CHECK(hydro_compare(emp, g, ProfileNorm::l1) == doctest::Approx(0.05));
  CHECK(hydro_compare(emp, g, ProfileNorm::linf) == doctest::Approx(0.1));
  // finer empirical grid is block-averaged down to the PDE grid
  std::vector<double> fine = {0.2, 0.4, 0.4, 0.4, 0.7, 0.5, 0.8, 0.8};
  CHECK(hydro_compare(fine, g, ProfileNorm::l1) == doctest::Approx(0.025));
  std::vector<double> ragged = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(hydro_compare(ragged, g, ProfileNorm::l1), std::invalid_argument);

  GridFunction centers = grid_from_function([](double u) { return u; }, 4);
  CHECK(centers.values[0] == doctest::Approx(0.125));
  CHECK(centers.values[3] == doctest::Approx(0.875));
}

TEST_SUITE_END();
