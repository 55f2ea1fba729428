#include "ips/modes.hpp"

#include <cmath>
#include <stdexcept>

namespace ips {

Eigen::Matrix2d mobility_matrix(double rho_a, double rho_b) {
  Eigen::Matrix2d x;
  x << rho_a * (1 - rho_a), -rho_a * rho_b, -rho_a * rho_b, rho_b * (1 - rho_b);
  return x;
}

Eigen::Vector2d drive_vector(const std::array<double, 3>& fields) {
  return {fields[0] - fields[2], fields[1] - fields[2]};
}

Eigen::Matrix2d current_jacobian(double rho_a, double rho_b,
                                 const std::array<double, 3>& fields) {
  Eigen::Vector2d g = drive_vector(fields);
  Eigen::Matrix2d j;
  j << (1 - 2 * rho_a) * g[0] - rho_b * g[1], -rho_a * g[1],
       -rho_b * g[0], -rho_a * g[0] + (1 - 2 * rho_b) * g[1];
  return j;
}

namespace {

Eigen::Vector2d left_eigenvector(const Eigen::Matrix2d& j, double lam) {
  Eigen::Vector2d u(j(1, 0), lam - j(0, 0));
  Eigen::Vector2d v(lam - j(1, 1), j(0, 1));
  return u.norm() >= v.norm() ? u : v;
}

Eigen::Vector2d right_eigenvector(const Eigen::Matrix2d& j, double lam) {
  Eigen::Vector2d u(j(0, 1), lam - j(0, 0));
  Eigen::Vector2d v(lam - j(1, 1), j(1, 0));
  return u.norm() >= v.norm() ? u : v;
}

ModeInfo make_mode(const Eigen::Matrix2d& j, double lam, const Eigen::Vector2d& g,
                   double gscale) {
  ModeInfo m;
  m.eigenvalue = lam;
  Eigen::Vector2d w = left_eigenvector(j, lam);
  m.coeff = std::abs(w[0]) > 1e-12 * w.norm() ? (w / w[0]).eval() : (w / w[1]).eval();
  m.excite = right_eigenvector(j, lam).normalized();
  // constant Hessians of the two drift-flux components
  Eigen::Matrix2d ha, hb;
  ha << -2 * g[0], -g[1], -g[1], 0;
  hb << 0, -g[0], -g[0], -2 * g[1];
  Eigen::Matrix2d hw = m.coeff[0] * ha + m.coeff[1] * hb;
  m.self_coupling = m.excite.dot(hw * m.excite);
  m.predicted =
      std::abs(m.self_coupling) > 1e-9 * gscale ? ModeClass::kpz : ModeClass::diffusive;
  return m;
}

}  // namespace

NormalModeSpec normal_modes(double rho_a, double rho_b,
                            const std::array<double, 3>& fields) {
  if (!(rho_a > 0 && rho_b > 0 && rho_a + rho_b < 1))
    throw std::invalid_argument("densities must lie in the open simplex");
  Eigen::Matrix2d j = current_jacobian(rho_a, rho_b, fields);
  Eigen::Vector2d g = drive_vector(fields);
  double gscale = std::max(std::abs(g[0]), std::abs(g[1]));

  double tr = j.trace();
  double disc = tr * tr - 4 * j.determinant();
  if (disc < -1e-12 * std::max(1.0, gscale * gscale))
    throw std::runtime_error("current Jacobian has complex spectrum");

  NormalModeSpec spec;
  spec.splitting = std::sqrt(std::max(disc, 0.0));
  if (spec.splitting <= 1e-12 * std::max(1.0, gscale)) {
    spec.degenerate = true;
    spec.primary.eigenvalue = spec.secondary.eigenvalue = tr / 2;
    spec.primary.coeff = {1, 0};
    spec.secondary.coeff = {0, 1};
    spec.primary.excite = {1, 0};
    spec.secondary.excite = {0, 1};
    return spec;
  }

  double lo = (tr - spec.splitting) / 2, hi = (tr + spec.splitting) / 2;
  ModeInfo a = make_mode(j, hi, g, gscale);
  ModeInfo b = make_mode(j, lo, g, gscale);
  bool swap = std::abs(b.self_coupling) > std::abs(a.self_coupling);
  spec.primary = swap ? b : a;
  spec.secondary = swap ? a : b;
  return spec;
}

double frame_velocity(const ModeInfo& mode, int n, double gamma) {
  return mode.eigenvalue * std::pow(double(n), 2.0 - gamma);
}

FirstMomentCheck mct_first_moment(
    const std::vector<double>& times,
    const std::array<std::vector<std::vector<double>>, 4>& s,
    const Eigen::Matrix2d& jacobian, const Eigen::Matrix2d& static_cov,
    double accel_per_drift) {
  if (times.empty()) throw std::invalid_argument("no sample times");
  size_t n = 0;
  for (const auto& pair : s) {
    if (pair.size() != times.size())
      throw std::invalid_argument("series length does not match sample times");
    for (const auto& row : pair) {
      if (n == 0) n = row.size();
      if (row.size() != n || n < 2)
        throw std::invalid_argument("displacement rows must share one ring size");
    }
  }

  FirstMomentCheck out;
  out.predicted_rate = accel_per_drift * (jacobian * static_cov);
  Eigen::Matrix2d tm_sum = Eigen::Matrix2d::Zero();
  double tt_sum = 0;
  for (size_t ti = 0; ti < times.size(); ++ti) {
    Eigen::Matrix2d m;
    for (int p = 0; p < 4; ++p) {
      double acc = 0;
      for (size_t d = 0; d < n; ++d) {
        double ds = d <= n / 2 ? double(d) : double(d) - double(n);
        acc += ds * s[p][ti][d];
      }
      m(p / 2, p % 2) = acc;
    }
    Eigen::Matrix2d gap = m - out.predicted_rate * times[ti];
    out.max_abs_residual =
        std::max(out.max_abs_residual, gap.cwiseAbs().maxCoeff());
    tm_sum += times[ti] * m;
    tt_sum += times[ti] * times[ti];
  }
  out.fitted_rate = tt_sum > 0 ? (tm_sum / tt_sum).eval() : Eigen::Matrix2d::Zero().eval();
  return out;
}

}  // namespace ips
