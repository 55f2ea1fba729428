#pragma once
#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ips/model.hpp"
#include "ips/rng.hpp"

namespace ips {

// Macroscopic time t runs the chain for n^theta_exp * t units of jump time:
// 2 is the diffusive clock, alpha the superdiffusive clock of the long-jump
// family, 0 leaves the clock untouched.
struct ScalingSpec {
  double theta_exp = 2.0;
  double accel(int n) const { return std::pow(double(n), theta_exp); }
};

inline ScalingSpec diffusive_scaling() { return ScalingSpec{2.0}; }
inline ScalingSpec unscaled() { return ScalingSpec{0.0}; }

struct SimOptions {
  double horizon = 1.0;                // macroscopic end time
  std::vector<double> sample_times;    // ascending, within [0, horizon]
  bool record_currents = false;        // per-bond signed crossing counters
  uint64_t max_events = ~0ull;         // hard stop; throws when exceeded
};

// Snapshots are left limits: a sample falling exactly on a jump time sees the
// state before the jump.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Configuration> states;
  // record_currents: currents[s][k*bonds+x] = signed crossings of bond x up to
  // times[s], for species k (exclusion: k=0 only; species labels k=0,1,2).
  std::vector<std::vector<double>> currents;
  // reservoir exchanges with the outside, cumulative at each sample time:
  // boundary_flux[s] = {in@left, out@left, in@right, out@right}
  std::vector<std::array<double, 4>> boundary_flux;
  uint64_t events = 0;     // applied transitions (thinning self-loops excluded)
  uint64_t attempts = 0;   // clock rings, self-loops included
  double final_time = 0;
};

namespace detail {

class ClassTable;     // bounded family of constant-rate event classes
class JumpSampler;    // long-jump thinning state

}  // namespace detail

// Exact event-driven CTMC state. One instance per trajectory; O(1) memory per
// site and O(1) work per event.
class EngineCore {
 public:
  EngineCore(const RateModel& model, const Lattice& lat, Configuration init,
             double accel);
  ~EngineCore();
  EngineCore(EngineCore&&) noexcept;
  EngineCore& operator=(EngineCore&&) noexcept;

  const Configuration& state() const { return state_; }
  const Lattice& lattice() const { return lat_; }
  // total macroscopic exit rate of the current state (0 when frozen); for the
  // long-jump family this is the constant thinning envelope, not the exit rate
  double total_rate() const;
  // draw the next transition; nullopt = thinning self-loop. total_rate() > 0.
  std::optional<Event> draw(Rng& rng);
  void apply(const Event& e);
  // recompute every class membership from scratch and compare; test hook
  bool table_consistent() const;

 private:
  RateModel model_;
  Lattice lat_;
  Configuration state_;
  double accel_ = 1.0;
  std::unique_ptr<detail::ClassTable> classes_;
  std::unique_ptr<detail::JumpSampler> jumps_;
};

struct NoopObserver {
  // state c holds on a macroscopic interval of length dt
  void elapse(const Configuration&, double) {}
  // e is about to be applied to c
  void on_event(const Configuration&, const Event&) {}
  // a requested sample time was reached
  void sample(double, const Configuration&) {}
};

namespace detail {
void tally_currents(const RateModel& model, const Configuration& before, const Event& e,
                    const Lattice& lat, std::vector<double>& counters,
                    std::array<double, 4>& flux);
}

template <class Observer>
TrajectoryRecord simulate(const RateModel& model, const Lattice& lat, Configuration init,
                          const ScalingSpec& scaling, const SimOptions& opt, uint64_t seed,
                          Observer&& obs) {
  if (opt.horizon < 0) throw std::invalid_argument("negative horizon");
  for (size_t i = 0; i < opt.sample_times.size(); ++i) {
    double s = opt.sample_times[i];
    if (s < 0 || s > opt.horizon || (i && s < opt.sample_times[i - 1]))
      throw std::invalid_argument("sample times must ascend within [0, horizon]");
  }
  if (opt.record_currents && std::holds_alternative<LongJumpExclusion>(model))
    throw std::invalid_argument("current counters are not defined for long jumps");

  EngineCore core(model, lat, std::move(init), scaling.accel(lat.n));
  Rng rng(seed);
  TrajectoryRecord rec;

  int species_tracks =
      opt.record_currents ? (state_kind(model) == StateKind::species ? 3 : 1) : 0;
  std::vector<double> counters(size_t(species_tracks) * size_t(lat.bond_count()), 0.0);
  std::array<double, 4> flux{0, 0, 0, 0};

  size_t next = 0;
  double t = 0;
  double covered = 0;  // time already charged to obs.elapse
  auto advance_to = [&](double s) {
    if (s > covered) {
      obs.elapse(core.state(), s - covered);
      covered = s;
    }
  };
  // elapse is split at sample times so observer accumulators are current at
  // every sample call
  auto emit_until = [&](double limit) {
    while (next < opt.sample_times.size() && opt.sample_times[next] <= limit) {
      advance_to(opt.sample_times[next]);
      rec.times.push_back(opt.sample_times[next]);
      rec.states.push_back(core.state());
      if (opt.record_currents) {
        rec.currents.push_back(counters);
        rec.boundary_flux.push_back(flux);
      }
      obs.sample(opt.sample_times[next], core.state());
      ++next;
    }
  };

  while (t < opt.horizon) {
    double total = core.total_rate();
    if (total <= 0) break;  // frozen: state holds forever
    double dt = rng.exponential() / total;
    double t_next = t + dt;
    if (t_next >= opt.horizon) {
      emit_until(opt.horizon);
      advance_to(opt.horizon);
      t = opt.horizon;
      break;
    }
    emit_until(t_next);
    advance_to(t_next);
    ++rec.attempts;
    if (auto ev = core.draw(rng)) {
      obs.on_event(core.state(), *ev);
      if (opt.record_currents)
        detail::tally_currents(model, core.state(), *ev, lat, counters, flux);
      core.apply(*ev);
      ++rec.events;
      if (rec.events > opt.max_events) throw std::runtime_error("event budget exceeded");
    }
    t = t_next;
  }
  emit_until(opt.horizon);  // frozen before the horizon: the state holds
  advance_to(opt.horizon);
  rec.final_time = opt.horizon;
  return rec;
}

inline TrajectoryRecord simulate(const RateModel& model, const Lattice& lat,
                                 Configuration init, const ScalingSpec& scaling,
                                 const SimOptions& opt, uint64_t seed) {
  NoopObserver obs;
  return simulate(model, lat, std::move(init), scaling, opt, seed, obs);
}

// Runs fn(k, derive_seed(master_seed, k)) for k = 0..count-1 on `workers`
// threads into a slot-per-task result vector, so the output is identical for
// any worker count.
template <class Fn>
auto parallel_map(int count, uint64_t master_seed, int workers, Fn&& fn)
    -> std::vector<decltype(fn(0, uint64_t{}))> {
  using T = decltype(fn(0, uint64_t{}));
  std::vector<T> out(count);
  if (count == 0) return out;
  workers = std::max(1, std::min(workers, count));
  std::atomic<int> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      int k = cursor.fetch_add(1);
      if (k >= count) return;
      try {
        out[k] = fn(k, derive_seed(master_seed, uint64_t(k)));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace ips
