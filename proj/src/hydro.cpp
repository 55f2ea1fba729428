#include "ips/hydro.hpp"

#include <cmath>
#include <stdexcept>

#include "ips/fft.hpp"

namespace ips {

namespace {
constexpr double kPi = 3.14159265358979323846;

// apply a real symmetric Fourier multiplier lam(|k|) to the samples
GridFunction spectral_multiply(const GridFunction& init,
                               const std::function<double(double)>& lam, double t) {
  const int m = init.size();
  std::vector<cplx> a(m);
  for (int i = 0; i < m; ++i) a[i] = init.values[i];
  a = fft(std::move(a), -1);
  for (int j = 0; j < m; ++j) {
    double k = j <= m / 2 ? j : j - m;
    a[j] *= lam(std::abs(k));
  }
  a = fft(std::move(a), +1);
  GridFunction out;
  out.time = init.time + t;
  out.values.resize(m);
  for (int i = 0; i < m; ++i) out.values[i] = a[i].real() / m;
  return out;
}

void check_grid(const GridFunction& g) {
  if (g.size() < 2) throw std::invalid_argument("grid too small");
}
}  // namespace

GridFunction grid_from_function(const std::function<double(double)>& f, int m) {
  if (m < 2) throw std::invalid_argument("grid too small");
  GridFunction g;
  g.values.resize(m);
  for (int i = 0; i < m; ++i) g.values[i] = f((i + 0.5) / m);
  return g;
}

double grid_mass(const GridFunction& g) {
  double s = 0;
  for (double v : g.values) s += v;
  return s / g.size();
}

GridFunction solve_heat(const GridFunction& init, double t, double diffusivity) {
  check_grid(init);
  if (t < 0) throw std::invalid_argument("negative time");
  return spectral_multiply(
      init, [&](double k) { return std::exp(-diffusivity * std::pow(2 * kPi * k, 2) * t); },
      t);
}

GridFunction solve_fractional_heat(const GridFunction& init, double t, double alpha_exp,
                                   double c) {
  check_grid(init);
  if (t < 0) throw std::invalid_argument("negative time");
  if (!(alpha_exp > 0 && alpha_exp <= 2))
    throw std::invalid_argument("stability exponent outside (0, 2]");
  return spectral_multiply(
      init, [&](double k) { return std::exp(-c * std::pow(2 * kPi * k, alpha_exp) * t); },
      t);
}

namespace {

// one conservative RK2 (Heun) step of d rho/dt = D lap rho - m d/dx phi(rho),
// with phi given per cell; central differences
void drift_diffusion_rhs(const std::vector<double>& rho, double diff, double drift_coef,
                         std::vector<double>& out) {
  const int m = int(rho.size());
  const double m2 = double(m) * m;
  for (int i = 0; i < m; ++i) {
    int up = i + 1 == m ? 0 : i + 1;
    int dn = i == 0 ? m - 1 : i - 1;
    double lap = m2 * (rho[up] + rho[dn] - 2 * rho[i]);
    double gu = rho[up] * (1 - rho[up]);
    double gd = rho[dn] * (1 - rho[dn]);
    out[i] = diff * lap + drift_coef * 0.5 * m * (gu - gd);
  }
}

}  // namespace

GridFunction solve_viscous_burgers(const GridFunction& init, double t, double b_plus) {
  check_grid(init);
  if (t < 0) throw std::invalid_argument("negative time");
  const int m = init.size();
  const double diff = 0.5;
  const double drift = 1.0 - 2.0 * b_plus;
  const double dx = 1.0 / m;
  double dt = 0.4 * std::min(dx * dx / (2 * diff), dx / std::max(std::abs(drift), 1e-12));
  int steps = t > 0 ? int(std::ceil(t / dt)) : 0;
  if (steps > 0) dt = t / steps;

  std::vector<double> rho = init.values, k1(m), k2(m), mid(m);
  for (int s = 0; s < steps; ++s) {
    drift_diffusion_rhs(rho, diff, drift, k1);
    for (int i = 0; i < m; ++i) mid[i] = rho[i] + dt * k1[i];
    drift_diffusion_rhs(mid, diff, drift, k2);
    for (int i = 0; i < m; ++i) rho[i] += 0.5 * dt * (k1[i] + k2[i]);
  }
  GridFunction out;
  out.time = init.time + t;
  out.values = std::move(rho);
  return out;
}

namespace {

// Godunov numerical flux for q(u) = coef * u * (1 - u) (extremum at 1/2)
double godunov_flux(double l, double r, double coef) {
  auto q = [&](double u) { return coef * u * (1 - u); };
  if (l <= r) {
    double v = std::min(q(l), q(r));
    if (l <= 0.5 && 0.5 <= r && coef < 0) v = std::min(v, q(0.5));
    return v;
  }
  double v = std::max(q(l), q(r));
  if (r <= 0.5 && 0.5 <= l && coef > 0) v = std::max(v, q(0.5));
  return v;
}

}  // namespace

GridFunction solve_inviscid_burgers(const GridFunction& init, double t, double b_plus) {
  check_grid(init);
  if (t < 0) throw std::invalid_argument("negative time");
  const int m = init.size();
  // d/dt rho + d/dx q = 0 with q(rho) = (2 b_plus - 1) rho (1 - rho)
  const double coef = 2.0 * b_plus - 1.0;
  const double dx = 1.0 / m;
  double dt = 0.4 * dx / std::max(std::abs(coef), 1e-12);
  int steps = t > 0 ? int(std::ceil(t / dt)) : 0;
  if (steps > 0) dt = t / steps;

  std::vector<double> rho = init.values, flux(m);
  for (int s = 0; s < steps; ++s) {
    for (int i = 0; i < m; ++i) {
      int up = i + 1 == m ? 0 : i + 1;
      flux[i] = godunov_flux(rho[i], rho[up], coef);  // through face i+1/2
    }
    for (int i = 0; i < m; ++i) {
      int dn = i == 0 ? m - 1 : i - 1;
      rho[i] -= dt / dx * (flux[i] - flux[dn]);
    }
  }
  GridFunction out;
  out.time = init.time + t;
  out.values = std::move(rho);
  return out;
}

std::pair<GridFunction, GridFunction> solve_two_species(const GridFunction& a,
                                                        const GridFunction& b, double t,
                                                        const std::array<double, 3>& fields) {
  check_grid(a);
  if (a.size() != b.size()) throw std::invalid_argument("grid size mismatch");
  if (t < 0) throw std::invalid_argument("negative time");
  const int m = a.size();
  const double ga = fields[0] - fields[2], gb = fields[1] - fields[2];
  const double dx = 1.0 / m;
  // diffusivity 1; drift speed bounded by the field differences
  double speed = std::abs(ga) + std::abs(gb);
  double dt = 0.4 * std::min(dx * dx / 2.0, dx / std::max(speed, 1e-12));
  int steps = t > 0 ? int(std::ceil(t / dt)) : 0;
  if (steps > 0) dt = t / steps;

  auto phi = [&](const std::vector<double>& ra, const std::vector<double>& rb, int i,
                 bool first) {
    double pa = ra[i], pb = rb[i];
    if (first) return pa * (1 - pa) * ga - pa * pb * gb;  // (X g)_A
    return -pa * pb * ga + pb * (1 - pb) * gb;            // (X g)_B
  };
  auto rhs = [&](const std::vector<double>& ra, const std::vector<double>& rb,
                 std::vector<double>& oa, std::vector<double>& ob) {
    const double m2 = double(m) * m;
    for (int i = 0; i < m; ++i) {
      int up = i + 1 == m ? 0 : i + 1;
      int dn = i == 0 ? m - 1 : i - 1;
      oa[i] = m2 * (ra[up] + ra[dn] - 2 * ra[i]) -
              0.5 * m * (phi(ra, rb, up, true) - phi(ra, rb, dn, true));
      ob[i] = m2 * (rb[up] + rb[dn] - 2 * rb[i]) -
              0.5 * m * (phi(ra, rb, up, false) - phi(ra, rb, dn, false));
    }
  };

  std::vector<double> ra = a.values, rb = b.values;
  std::vector<double> ka1(m), kb1(m), ka2(m), kb2(m), ma(m), mb(m);
  for (int s = 0; s < steps; ++s) {
    rhs(ra, rb, ka1, kb1);
    for (int i = 0; i < m; ++i) ma[i] = ra[i] + dt * ka1[i], mb[i] = rb[i] + dt * kb1[i];
    rhs(ma, mb, ka2, kb2);
    for (int i = 0; i < m; ++i) {
      ra[i] += 0.5 * dt * (ka1[i] + ka2[i]);
      rb[i] += 0.5 * dt * (kb1[i] + kb2[i]);
    }
  }
  const double tol = 1e-6;
  for (int i = 0; i < m; ++i)
    if (ra[i] < -tol || rb[i] < -tol || ra[i] + rb[i] > 1 + tol)
      throw std::runtime_error("density left the simplex at cell " + std::to_string(i));

  std::pair<GridFunction, GridFunction> out;
  out.first.time = a.time + t;
  out.first.values = std::move(ra);
  out.second.time = b.time + t;
  out.second.values = std::move(rb);
  return out;
}

double ou_mode_covariance(int k, double t, double a_coef, double static_variance) {
  if (!(a_coef > 0)) throw std::invalid_argument("relaxation coefficient must be positive");
  return static_variance * std::exp(-a_coef * std::pow(2 * kPi * k, 2) * std::abs(t));
}

std::vector<double> block_profile(const Configuration& c, int blocks, int species) {
  const int n = c.size();
  if (blocks < 1 || n % blocks != 0)
    throw std::invalid_argument("block count must divide the lattice size");
  const int width = n / blocks;
  std::vector<double> out(blocks, 0.0);
  for (int i = 0; i < blocks; ++i) {
    double s = 0;
    for (int j = 0; j < width; ++j) {
      uint8_t v = c.sites[i * width + j];
      s += species < 0 ? double(v) : (v == species ? 1.0 : 0.0);
    }
    out[i] = s / width;
  }
  return out;
}

namespace {
std::vector<double> coarsen(const std::vector<double>& fine, int target) {
  int ratio = int(fine.size()) / target;
  std::vector<double> out(target, 0.0);
  for (int i = 0; i < target; ++i) {
    for (int j = 0; j < ratio; ++j) out[i] += fine[size_t(i) * ratio + j];
    out[i] /= ratio;
  }
  return out;
}
}  // namespace

double hydro_compare(const std::vector<double>& empirical, const GridFunction& pde,
                     ProfileNorm norm) {
  std::vector<double> a = empirical, b = pde.values;
  if (a.size() != b.size()) {
    if (a.size() > b.size() && a.size() % b.size() == 0)
      a = coarsen(a, int(b.size()));
    else if (b.size() > a.size() && b.size() % a.size() == 0)
      b = coarsen(b, int(a.size()));
    else
      throw std::invalid_argument("incompatible profile grids");
  }
  double acc = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    if (norm == ProfileNorm::linf)
      acc = std::max(acc, d);
    else
      acc += d;
  }
  return norm == ProfileNorm::l1 ? acc / double(a.size()) : acc;
}

}  // namespace ips
