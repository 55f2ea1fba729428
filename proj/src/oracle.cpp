#include "ips/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ips {

namespace {

// Poisson(lambda) pmf over a window covering all but <1e-14 of the mass
struct PoissonWindow {
  int lo = 0;
  std::vector<double> pmf;  // pmf[k - lo]
};

PoissonWindow poisson_window(double lambda) {
  PoissonWindow w;
  if (lambda <= 0) {
    w.pmf = {1.0};
    return w;
  }
  int mode = int(lambda);
  // log pmf, then exponentiate relative to the mode to dodge under/overflow
  auto logpmf = [&](int k) { return -lambda + k * std::log(lambda) - std::lgamma(double(k) + 1.0); };
  double lmode = logpmf(mode);
  int hi = mode;
  std::vector<double> up;
  for (int k = mode;; ++k) {
    double p = std::exp(logpmf(k) - lmode);
    up.push_back(p);
    if (k > mode + 5 && p < 1e-16) { hi = k; break; }
  }
  std::vector<double> down;
  int lo = mode;
  for (int k = mode - 1; k >= 0; --k) {
    double p = std::exp(logpmf(k) - lmode);
    if (p < 1e-16 && k < mode - 5) { lo = k + 1; break; }
    down.push_back(p);
    lo = k;
  }
  w.lo = lo;
  w.pmf.resize(size_t(hi - lo + 1));
  for (size_t j = 0; j < down.size(); ++j) w.pmf[mode - lo - 1 - int(j)] = down[j];
  for (size_t j = 0; j < up.size(); ++j) w.pmf[mode - lo + int(j)] = up[j];
  double norm = 0;
  for (double p : w.pmf) norm += p;
  for (double& p : w.pmf) p /= norm;
  return w;
}

}  // namespace

ExactChain::ExactChain(const RateModel& model, const Lattice& lat,
                       const Configuration& representative)
    : model_(model), lat_(lat) {
  validate_model(model_, lat_);
  if (representative.size() != lat_.n)
    throw std::invalid_argument("representative size mismatch");
  if (representative.kind != state_kind(model_))
    throw std::invalid_argument("representative kind mismatch");
  build_space(representative);
  build_generator();
}

uint64_t ExactChain::encode(const Configuration& c) const {
  uint64_t code = 0;
  if (c.kind == StateKind::exclusion) {
    for (int x = 0; x < c.size(); ++x) code |= uint64_t(c.sites[x] != 0) << x;
  } else {
    for (int x = c.size() - 1; x >= 0; --x) code = code * 3 + c.sites[x];
  }
  return code;
}

void ExactChain::build_space(const Configuration& rep) {
  bool conservative = !std::holds_alternative<BoundaryReservoir>(model_);
  int n = lat_.n;
  if (rep.kind == StateKind::exclusion) {
    if (n > 20) throw std::invalid_argument("exclusion sector too large to enumerate");
    int target = rep.particle_count();
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
      Configuration c;
      c.kind = StateKind::exclusion;
      c.sites.resize(n);
      int count = 0;
      for (int x = 0; x < n; ++x) {
        c.sites[x] = (mask >> x) & 1;
        count += c.sites[x];
      }
      if (!lat_.ring() && c.sites[0] != 0) continue;
      if (conservative && count != target) continue;
      index_.emplace(encode(c), int(states_.size()));
      states_.push_back(std::move(c));
    }
  } else {
    if (n > 12) throw std::invalid_argument("species sector too large to enumerate");
    int na = rep.species_count(0), nb = rep.species_count(1);
    uint64_t top = 1;
    for (int i = 0; i < n; ++i) top *= 3;
    for (uint64_t code = 0; code < top; ++code) {
      Configuration c;
      c.kind = StateKind::species;
      c.sites.resize(n);
      uint64_t v = code;
      int ca = 0, cb = 0;
      for (int x = 0; x < n; ++x) {
        c.sites[x] = uint8_t(v % 3);
        ca += c.sites[x] == 0;
        cb += c.sites[x] == 1;
        v /= 3;
      }
      if (ca != na || cb != nb) continue;
      index_.emplace(encode(c), int(states_.size()));
      states_.push_back(std::move(c));
    }
  }
  if (states_.empty()) throw std::logic_error("empty state space");
}

void ExactChain::build_generator() {
  using T = Eigen::Triplet<double>;
  std::vector<T> trip;
  int m = size();
  for (int i = 0; i < m; ++i) {
    double out = 0;
    Configuration work = states_[i];
    for (const Event& e : event_catalog(model_, states_[i], lat_)) {
      work = states_[i];
      apply_event(work, e);
      auto it = index_.find(encode(work));
      if (it == index_.end()) throw std::logic_error("transition leaves the sector");
      trip.emplace_back(i, it->second, e.rate);
      out += e.rate;
    }
    trip.emplace_back(i, i, -out);
    uniformization_rate_ = std::max(uniformization_rate_, out);
  }
  q_.resize(m, m);
  q_.setFromTriplets(trip.begin(), trip.end());
  uniformization_rate_ *= 1.0 + 1e-12;
}

int ExactChain::index_of(const Configuration& c) const {
  auto it = index_.find(encode(c));
  if (it == index_.end()) throw std::invalid_argument("state outside the sector");
  return it->second;
}

std::vector<double> ExactChain::product_weights(const ProductMeasure& m) const {
  std::vector<double> w(states_.size());
  for (size_t i = 0; i < states_.size(); ++i) {
    double p = 1;
    const Configuration& c = states_[i];
    for (int x = lat_.first_site(); x < lat_.n; ++x) {
      if (m.kind == StateKind::exclusion)
        p *= c.sites[x] ? m.rho : 1.0 - m.rho;
      else
        p *= m.species_density(c.sites[x]);
    }
    w[i] = p;
  }
  return w;
}

std::vector<double> ExactChain::normalized(std::vector<double> w) {
  double s = 0;
  for (double v : w) s += v;
  if (s <= 0) throw std::invalid_argument("weights sum to zero");
  for (double& v : w) v /= s;
  return w;
}

double ExactChain::stationarity_residual(const std::vector<double>& nu) const {
  if (int(nu.size()) != size()) throw std::invalid_argument("weight size mismatch");
  Eigen::Map<const Eigen::VectorXd> v(nu.data(), size());
  Eigen::VectorXd r = q_.transpose() * v;
  double scale = v.lpNorm<Eigen::Infinity>();
  if (scale == 0) throw std::invalid_argument("zero weights");
  return r.lpNorm<Eigen::Infinity>() / scale;
}

std::vector<double> ExactChain::evolve(const std::vector<double>& nu, double t) const {
  if (int(nu.size()) != size()) throw std::invalid_argument("weight size mismatch");
  if (t < 0) throw std::invalid_argument("negative time");
  double lam = uniformization_rate_;
  if (lam == 0 || t == 0) return nu;
  // split long horizons so each Poisson window stays small and well-scaled
  int pieces = 1 + int(lam * t / 600.0);
  double step = t / pieces;
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(nu.data(), size());
  // row-stochastic jump chain P = I + Q/lam applied on the left
  auto left_apply = [&](const Eigen::VectorXd& in) -> Eigen::VectorXd {
    Eigen::VectorXd out = in + (1.0 / lam) * (q_.transpose() * in);
    return out;
  };
  for (int piece = 0; piece < pieces; ++piece) {
    PoissonWindow w = poisson_window(lam * step);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(size());
    Eigen::VectorXd vk = v;
    // advance to the bottom of the window
    for (int k = 0; k < w.lo; ++k) vk = left_apply(vk);
    for (size_t j = 0; j < w.pmf.size(); ++j) {
      acc += w.pmf[j] * vk;
      if (j + 1 < w.pmf.size()) vk = left_apply(vk);
    }
    v = acc;
  }
  return std::vector<double>(v.data(), v.data() + size());
}

double ExactChain::expectation(const std::vector<double>& nu,
                               const std::vector<double>& g) const {
  if (nu.size() != g.size() || int(nu.size()) != size())
    throw std::invalid_argument("size mismatch");
  double s = 0, z = 0;
  for (size_t i = 0; i < nu.size(); ++i) {
    s += nu[i] * g[i];
    z += nu[i];
  }
  return s / z;
}

double ExactChain::transient_expectation(const std::vector<double>& nu,
                                         const std::vector<double>& g, double t) const {
  std::vector<double> v = evolve(normalized(nu), t);
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) s += v[i] * g[i];
  return s;
}

double ExactChain::time_integrated_expectation(const std::vector<double>& nu,
                                               const std::vector<double>& g,
                                               double t) const {
  // int_0^t nu e^{Qs} g ds = (1/lam) sum_k P(N_{lam t} >= k+1) nu P^k g
  if (int(nu.size()) != size() || g.size() != nu.size())
    throw std::invalid_argument("size mismatch");
  if (t < 0) throw std::invalid_argument("negative time");
  if (t == 0) return 0;
  double lam = uniformization_rate_;
  if (lam == 0) return t * expectation(nu, g);
  // same split as evolve: integrate piecewise, propagating the front measure
  int pieces = 1 + int(lam * t / 600.0);
  double step = t / pieces;
  std::vector<double> front = normalized(nu);
  double acc = 0;
  auto left_apply = [&](const Eigen::VectorXd& in) -> Eigen::VectorXd {
    return in + (1.0 / lam) * (q_.transpose() * in);
  };
  Eigen::Map<const Eigen::VectorXd> gv(g.data(), size());
  for (int piece = 0; piece < pieces; ++piece) {
    PoissonWindow w = poisson_window(lam * step);
    // survivor function S_k = P(N >= k+1), computed from the window pmf
    std::vector<double> surv(w.lo + w.pmf.size());
    double below = 0;  // total pmf mass at indices < k+1
    // pmf below the window bottom is negligible; treat as zero
    for (size_t k = 0; k < surv.size(); ++k) {
      if (int(k) >= w.lo) below += w.pmf[k - size_t(w.lo)];
      surv[k] = std::max(0.0, 1.0 - below);
    }
    Eigen::VectorXd vk = Eigen::Map<const Eigen::VectorXd>(front.data(), size());
    for (size_t k = 0; k < surv.size(); ++k) {
      if (surv[k] <= 1e-15) break;
      acc += (1.0 / lam) * surv[k] * vk.dot(gv);
      vk = left_apply(vk);
    }
    // advance the front measure by one step for the next piece
    if (piece + 1 < pieces) front = evolve(front, step);
  }
  return acc;
}

std::vector<double> ExactChain::gamma_g(const std::vector<double>& g) const {
  if (int(g.size()) != size()) throw std::invalid_argument("size mismatch");
  std::vector<double> out(g.size(), 0.0);
  for (int i = 0; i < size(); ++i)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(q_, i); it; ++it) {
      if (it.col() == i) continue;
      double d = g[it.col()] - g[i];
      out[i] += it.value() * d * d;
    }
  return out;
}

std::vector<double> ExactChain::generator_apply(const std::vector<double>& g) const {
  if (int(g.size()) != size()) throw std::invalid_argument("size mismatch");
  Eigen::Map<const Eigen::VectorXd> gv(g.data(), size());
  Eigen::VectorXd out = q_ * gv;
  return std::vector<double>(out.data(), out.data() + size());
}

double ExactChain::spectral_gap() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd(q_);
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense, false);
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double re = es.eigenvalues()[i].real();
    if (re < -1e-9) gap = std::min(gap, -re);
  }
  if (!std::isfinite(gap)) throw std::logic_error("no decaying mode found");
  return gap;
}

}  // namespace ips
