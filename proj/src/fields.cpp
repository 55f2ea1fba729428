#include "ips/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "ips/measure.hpp"

namespace ips {

double fluctuation_field(const Configuration& c, const TestFunction& f, double mean,
                         int species) {
  if (f.n() != c.size()) throw std::invalid_argument("test function size mismatch");
  double s = 0;
  for (int x = 0; x < c.size(); ++x) {
    double v = species < 0 ? double(c.sites[x]) : double(c.sites[x] == species);
    s += f.value[x] * (v - mean);
  }
  return s / std::sqrt(double(c.size()));
}

MartingaleTracker::MartingaleTracker(const NearestExclusion& m, const Lattice& lat,
                                     const TestFunction& f, double rho)
    : model_(m), lat_(lat), f_(f), rho_(rho) {
  if (!lat.ring()) throw std::invalid_argument("field tracking runs on the ring");
  if (f.n() != lat.n) throw std::invalid_argument("test function size mismatch");
  h_ = m.a / std::pow(double(lat.n), m.gamma);
  p_plus_ = m.p_plus(lat.n);
  p_minus_ = m.p_minus(lat.n);
}

double MartingaleTracker::bond_b(const Configuration& c, int x) const {
  double a = c.sites[x], b = c.sites[lat_.bond_right(x)];
  return a + b - 2.0 * a * b;
}

double MartingaleTracker::bond_qv(const Configuration& c, int x) const {
  int a = c.sites[x], b = c.sites[lat_.bond_right(x)];
  double g = f_.grad_fwd[x];
  if (a == 1 && b == 0) return g * g * p_plus_;
  if (a == 0 && b == 1) return g * g * p_minus_;
  return 0.0;
}

void MartingaleTracker::init_sums(const Configuration& c) {
  y_ = fluctuation_field(c, f_, rho_);
  y0_ = y_;
  y_lap_ = 0;
  sum_b_ = 0;
  sum_qv_ = 0;
  for (int x = 0; x < lat_.n; ++x) {
    y_lap_ += f_.lap[x] * (double(c.sites[x]) - rho_);
    sum_b_ += f_.grad_fwd[x] * bond_b(c, x);
    sum_qv_ += bond_qv(c, x);
  }
  y_lap_ /= std::sqrt(double(lat_.n));
  init_ = true;
}

void MartingaleTracker::elapse(const Configuration& c, double dt) {
  if (!init_) init_sums(c);
  acc_i_ += dt * 0.5 * y_lap_;
  acc_k_ += dt * h_ * std::sqrt(double(lat_.n)) * sum_b_;
  acc_qv_ += dt * sum_qv_ / double(lat_.n);
}

void MartingaleTracker::on_event(const Configuration& c, const Event& e) {
  if (!init_) init_sums(c);
  if (e.kind != EventKind::exchange) throw std::logic_error("tracker expects exchanges");
  int x = e.x, y = e.y;
  int sx = c.sites[x], sy = c.sites[y];
  double sqn = std::sqrt(double(lat_.n));
  // particle moved right iff site x held it
  double dir = sx == 1 ? 1.0 : -1.0;
  y_ += f_.grad_fwd[x] * dir / (sqn * double(lat_.n));
  y_lap_ += (f_.lap[y] - f_.lap[x]) * dir / sqn;

  // affected bonds: (x-1,x), the swapped bond (x,y), (y,y+1). The swapped
  // bond's symmetric term eta+eta-2 eta eta is invariant; its qv pattern flips.
  int xm = lat_.fold(x - 1);
  int z = lat_.bond_right(y);
  auto b_of = [](int a, int b) { return double(a + b) - 2.0 * double(a * b); };
  auto qv_of = [&](int bond, int a, int b) {
    double g = f_.grad_fwd[bond];
    if (a == 1 && b == 0) return g * g * p_plus_;
    if (a == 0 && b == 1) return g * g * p_minus_;
    return 0.0;
  };
  sum_b_ += f_.grad_fwd[xm] * (b_of(c.sites[xm], sy) - b_of(c.sites[xm], sx));
  sum_b_ += f_.grad_fwd[y] * (b_of(sx, c.sites[z]) - b_of(sy, c.sites[z]));
  sum_qv_ += qv_of(xm, c.sites[xm], sy) - qv_of(xm, c.sites[xm], sx);
  sum_qv_ += qv_of(x, sy, sx) - qv_of(x, sx, sy);
  sum_qv_ += qv_of(y, sx, c.sites[z]) - qv_of(y, sy, c.sites[z]);
}

void MartingaleTracker::sample(double t, const Configuration& c) {
  if (!init_) init_sums(c);
  FieldSample s;
  s.t = t;
  s.y = y_;
  s.drift_sym = acc_i_;
  s.drift_asym = acc_k_;
  s.qv = acc_qv_;
  s.y0 = y0_;
  samples_.push_back(s);
}

double MartingaleTracker::drift_integrand(const Configuration& c) const {
  double ylap = 0, sb = 0;
  for (int x = 0; x < lat_.n; ++x) {
    ylap += f_.lap[x] * (double(c.sites[x]) - rho_);
    sb += f_.grad_fwd[x] * (double(c.sites[x]) + c.sites[lat_.bond_right(x)] -
                            2.0 * c.sites[x] * c.sites[lat_.bond_right(x)]);
  }
  ylap /= std::sqrt(double(lat_.n));
  return 0.5 * ylap + h_ * std::sqrt(double(lat_.n)) * sb;
}

double MartingaleTracker::qv_rate(const Configuration& c) const {
  double s = 0;
  for (int x = 0; x < lat_.n; ++x) s += bond_qv(c, x);
  return s / double(lat_.n);
}

double MartingaleTracker::tracking_error(const Configuration& c) const {
  double y = fluctuation_field(c, f_, rho_);
  double ylap = 0, sb = 0, sqv = 0;
  for (int x = 0; x < lat_.n; ++x) {
    ylap += f_.lap[x] * (double(c.sites[x]) - rho_);
    sb += f_.grad_fwd[x] * bond_b(c, x);
    sqv += bond_qv(c, x);
  }
  ylap /= std::sqrt(double(lat_.n));
  double e = std::abs(y - y_);
  e = std::max(e, std::abs(ylap - y_lap_));
  e = std::max(e, std::abs(sb - sum_b_));
  e = std::max(e, std::abs(sqv - sum_qv_));
  return e;
}

double exact_qv_rate(const NearestExclusion& m, const Lattice& lat, const TestFunction& f,
                     double rho) {
  double s = 0;
  for (int x = 0; x < lat.n; ++x) s += f.grad_fwd[x] * f.grad_fwd[x];
  return (m.b_plus + m.b_minus) * chi(rho) * s / double(lat.n);
}

double realized_qv(const std::vector<FieldSample>& samples) {
  double s = 0;
  for (size_t i = 1; i < samples.size(); ++i) {
    double d = samples[i].martingale() - samples[i - 1].martingale();
    s += d * d;
  }
  return s;
}

std::vector<double> mean_profile(const std::vector<Configuration>& states,
                                 const Lattice& lat, int species) {
  std::vector<double> prof(lat.n, 0.0);
  if (states.empty()) return prof;
  for (const Configuration& c : states) {
    if (c.size() != lat.n) throw std::invalid_argument("state size mismatch");
    for (int x = 0; x < lat.n; ++x)
      prof[x] += species < 0 ? double(c.sites[x]) : double(c.sites[x] == species);
  }
  for (double& v : prof) v /= double(states.size());
  return prof;
}

}  // namespace ips
