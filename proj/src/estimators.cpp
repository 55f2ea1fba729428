#include "ips/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "ips/fft.hpp"
#include "ips/measure.hpp"
#include "ips/stats.hpp"

namespace ips {

int frame_shift(const MovingFrame& frame, double t) {
  return int(std::llround(frame.velocity * t));
}

bool frame_wraps(const MovingFrame& frame, double horizon, int n) {
  return std::abs(frame.velocity) * horizon > 0.5 * n;
}

TestFunction translate(const TestFunction& f, int s) {
  const int n = f.n();
  TestFunction g;
  g.name = f.name;
  g.value.resize(n);
  g.grad_fwd.resize(n);
  g.lap.resize(n);
  for (int x = 0; x < n; ++x) {
    int src = int(((long long)(x)-s) % n);
    if (src < 0) src += n;
    g.value[x] = f.value[src];
    g.grad_fwd[x] = f.grad_fwd[src];
    g.lap[x] = f.lap[src];
  }
  return g;
}

double density_field(const TrajectoryRecord& rec, const Lattice& lat, const TestFunction& f,
                     double mean, const MovingFrame& frame, size_t sample_index,
                     int species) {
  if (sample_index >= rec.states.size()) throw std::out_of_range("no such sample");
  if (f.n() != lat.n) throw std::invalid_argument("test function size mismatch");
  int s = frame_shift(frame, rec.times[sample_index]);
  if (s == 0) return fluctuation_field(rec.states[sample_index], f, mean, species);
  return fluctuation_field(rec.states[sample_index], translate(f, s), mean, species);
}

double current_field(const TrajectoryRecord& rec, const Lattice& lat, int bond,
                     size_t sample_index, int track) {
  if (rec.currents.empty()) throw std::invalid_argument("currents were not recorded");
  if (sample_index >= rec.currents.size()) throw std::out_of_range("no such sample");
  if (bond < lat.first_bond() || bond >= lat.first_bond() + lat.bond_count())
    throw std::out_of_range("no such bond");
  return rec.currents[sample_index][size_t(track) * lat.bond_count() + size_t(bond) -
                                    size_t(lat.first_bond())];
}

std::vector<double> centered_sites(const Configuration& c, double mean, int species) {
  std::vector<double> out(c.size());
  for (int x = 0; x < c.size(); ++x) {
    double v = species < 0 ? double(c.sites[x]) : (c.sites[x] == species ? 1.0 : 0.0);
    out[x] = v - mean;
  }
  return out;
}

namespace {

// centered right box average (1/box) sum_{y=x+1}^{x+box} eta_y - rho for every
// x, via one prefix-sum pass
std::vector<double> box_field(const Configuration& c, int box, double rho) {
  const int n = c.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (int x = 0; x < n; ++x) prefix[x + 1] = prefix[x] + c.sites[x];
  std::vector<double> out(n);
  for (int x = 0; x < n; ++x) {
    int lo = x + 1, hi = x + 1 + box;  // [lo, hi) cyclically
    double s;
    if (hi <= n)
      s = prefix[hi] - prefix[lo];
    else if (lo >= n)
      s = prefix[hi - n] - prefix[lo - n];
    else
      s = (prefix[n] - prefix[lo]) + prefix[hi - n];
    out[x] = s / box - rho;
  }
  return out;
}

// indices of recorded samples inside [lo, hi]; demands both endpoints on the
// grid (1e-9) so trapezoid integrals cover exactly the requested range
std::vector<size_t> grid_range(const TrajectoryRecord& rec, double lo, double hi) {
  std::vector<size_t> idx;
  for (size_t j = 0; j < rec.times.size(); ++j)
    if (rec.times[j] >= lo - 1e-12 && rec.times[j] <= hi + 1e-12) idx.push_back(j);
  if (idx.empty() || std::abs(rec.times[idx.front()] - lo) > 1e-9 ||
      std::abs(rec.times[idx.back()] - hi) > 1e-9)
    throw std::invalid_argument("sample grid does not cover the requested range");
  return idx;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
  double s = 0;
  for (size_t j = 1; j < t.size(); ++j) s += 0.5 * (t[j] - t[j - 1]) * (v[j] + v[j - 1]);
  return s;
}

}  // namespace

DecompositionSeries martingale_decomposition(const TrajectoryRecord& rec,
                                             const NearestExclusion& m, const Lattice& lat,
                                             const TestFunction& f, double rho) {
  if (!lat.ring()) throw std::invalid_argument("decomposition needs the ring");
  if (f.n() != lat.n) throw std::invalid_argument("test function size mismatch");
  if (rec.states.size() != rec.times.size() || rec.times.empty())
    throw std::invalid_argument("record has no sampled states");
  const int n = lat.n;
  const double sq = std::sqrt(double(n));
  const double h = m.a / std::pow(double(n), m.gamma);

  DecompositionSeries out;
  size_t count = rec.times.size();
  out.t = rec.times;
  out.y.resize(count);
  out.i_term.assign(count, 0.0);
  out.k_term.assign(count, 0.0);
  out.m_term.assign(count, 0.0);

  std::vector<double> gi(count), gk(count);
  for (size_t j = 0; j < count; ++j) {
    const Configuration& c = rec.states[j];
    double y = 0, ylap = 0, sb = 0;
    for (int x = 0; x < n; ++x) {
      double bar = double(c.sites[x]) - rho;
      y += f.value[x] * bar;
      ylap += f.lap[x] * bar;
      double ex = c.sites[x], ey = c.sites[lat.bond_right(x)];
      sb += f.grad_fwd[x] * (ex + ey - 2.0 * ex * ey);
    }
    out.y[j] = y / sq;
    gi[j] = 0.5 * ylap / sq;
    gk[j] = h * sq * sb;
  }
  for (size_t j = 1; j < count; ++j) {
    double dt = out.t[j] - out.t[j - 1];
    out.i_term[j] = out.i_term[j - 1] + 0.5 * dt * (gi[j] + gi[j - 1]);
    out.k_term[j] = out.k_term[j - 1] + 0.5 * dt * (gk[j] + gk[j - 1]);
  }
  for (size_t j = 0; j < count; ++j)
    out.m_term[j] = out.y[j] - out.y[0] - out.i_term[j] - out.k_term[j];
  return out;
}

EstimateWithError bg_residual(const std::vector<TrajectoryRecord>& ensemble,
                              const Lattice& lat, const std::vector<double>& v, double t,
                              int box, double rho) {
  if (!lat.ring()) throw std::invalid_argument("block replacement needs the ring");
  if (int(v.size()) != lat.n) throw std::invalid_argument("weight vector size mismatch");
  if (box < 1 || box > lat.n / 4) throw std::invalid_argument("block size outside [1, n/4]");
  const double correction = chi(rho) / box;

  RunningStats stats;
  for (const TrajectoryRecord& rec : ensemble) {
    auto idx = grid_range(rec, 0.0, t);
    if (idx.size() < 100)
      throw std::invalid_argument("sample grid too coarse for the time integral");
    std::vector<double> times, vals;
    times.reserve(idx.size());
    vals.reserve(idx.size());
    for (size_t j : idx) {
      const Configuration& c = rec.states[j];
      auto bf = box_field(c, box, rho);
      double s = 0;
      for (int x = 0; x < lat.n; ++x) {
        double a = double(c.sites[x]) - rho;
        double b = double(c.sites[lat.bond_right(x)]) - rho;
        s += v[x] * (a * b - bf[x] * bf[x] + correction);
      }
      times.push_back(rec.times[j]);
      vals.push_back(s);
    }
    double integral = trapezoid(times, vals);
    stats.add(integral * integral);
  }
  return {stats.mean, stats.se()};
}

EnergyStats energy_estimate_stats(const std::vector<TrajectoryRecord>& ensemble,
                                  const Lattice& lat, const TestFunction& f, double eps,
                                  double delta, double s, double t, double rho) {
  if (!lat.ring()) throw std::invalid_argument("energy statistics need the ring");
  if (f.n() != lat.n) throw std::invalid_argument("test function size mismatch");
  if (!(eps > delta && delta > 0)) throw std::invalid_argument("need eps > delta > 0");
  if (!(s <= t)) throw std::invalid_argument("need s <= t");
  const int n = lat.n;
  int box_e = std::max(1, int(std::lround(eps * n)));
  int box_d = std::max(1, int(std::lround(delta * n)));
  if (box_e > n / 2) throw std::invalid_argument("mollifier wider than half the ring");
  const double sq = std::sqrt(double(n));

  EnergyStats out;
  if (t - s < 1e-15) {
    out.linear_term = {0.0, 0.0};
    out.mollifier_gap = {0.0, 0.0};
    return out;
  }
  RunningStats lin, gap;
  for (const TrajectoryRecord& rec : ensemble) {
    auto idx = grid_range(rec, s, t);
    std::vector<double> times, lv, gv;
    for (size_t j : idx) {
      const Configuration& c = rec.states[j];
      double ylap = 0;
      for (int x = 0; x < n; ++x) ylap += f.lap[x] * (double(c.sites[x]) - rho);
      auto be = box_field(c, box_e, rho);
      auto bd = box_field(c, box_d, rho);
      double ae = 0, ad = 0;
      for (int x = 0; x < n; ++x) {
        ae += f.grad_fwd[x] * be[x] * be[x];
        ad += f.grad_fwd[x] * bd[x] * bd[x];
      }
      times.push_back(rec.times[j]);
      lv.push_back(ylap / sq);
      gv.push_back(ae - ad);
    }
    double li = trapezoid(times, lv);
    double gi = trapezoid(times, gv);
    lin.add(li * li);
    gap.add(gi * gi);
  }
  out.linear_term = {lin.mean, lin.se()};
  out.mollifier_gap = {gap.mean, gap.se()};
  return out;
}

std::vector<double> structure_function(const std::vector<TrajectoryRecord>& ensemble,
                                       const Lattice& lat, size_t sample_a,
                                       size_t sample_b, double mean_a, double mean_b,
                                       int species_a, int species_b) {
  if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
  std::vector<double> acc(lat.n, 0.0);
  for (const TrajectoryRecord& rec : ensemble) {
    if (sample_a >= rec.states.size() || sample_b >= rec.states.size())
      throw std::out_of_range("no such sample");
    auto a = centered_sites(rec.states[sample_a], mean_a, species_a);
    auto b = centered_sites(rec.states[sample_b], mean_b, species_b);
    auto r = circular_cross_correlation(a, b);
    for (int d = 0; d < lat.n; ++d) acc[d] += r[d];
  }
  for (double& x : acc) x /= double(ensemble.size());
  return acc;
}

namespace {
double at_disp(const std::vector<double>& s, long long r) {
  long long n = (long long)(s.size());
  long long i = ((r % n) + n) % n;
  return s[size_t(i)];
}
}  // namespace

double windowed_mass(const std::vector<double>& s, int center, int window) {
  if (2 * window + 1 > int(s.size())) throw std::invalid_argument("window covers the ring");
  double m = 0;
  for (int r = -window; r <= window; ++r) m += at_disp(s, center + r);
  return m;
}

double windowed_mean(const std::vector<double>& s, int center, int window) {
  double m = windowed_mass(s, center, window);
  if (std::abs(m) < 1e-300) return 0.0;
  double acc = 0;
  for (int r = -window; r <= window; ++r) acc += r * at_disp(s, center + r);
  return acc / m;
}

double windowed_spread(const std::vector<double>& s, int center, int window) {
  double m = windowed_mass(s, center, window);
  if (std::abs(m) < 1e-300) return 0.0;
  double mu = windowed_mean(s, center, window);
  double acc = 0;
  for (int r = -window; r <= window; ++r) {
    double d = r - mu;
    acc += d * d * at_disp(s, center + r);
  }
  double v = acc / m;
  return v > 0 ? std::sqrt(v) : 0.0;
}

}  // namespace ips
