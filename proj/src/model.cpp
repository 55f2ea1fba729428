#include "ips/model.hpp"

#include <stdexcept>

namespace ips {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

struct Validator {
  const Lattice& lat;

  void operator()(const NearestExclusion& m) const {
    require(lat.ring(), "nearest exclusion runs on the ring");
    require(m.b_plus >= 0 && m.b_minus >= 0, "base rates must be nonnegative");
    require(m.gamma >= 0, "gamma must be nonnegative");
    require(m.p_plus(lat.n) >= 0 && m.p_minus(lat.n) >= 0,
            "asymmetry makes a jump rate negative at this n");
    require(m.p_plus(lat.n) + m.p_minus(lat.n) > 0, "all jump rates vanish");
  }
  void operator()(const LongJumpExclusion& m) const {
    require(lat.ring(), "long-jump exclusion runs on the ring");
    require(m.alpha > 0 && m.alpha < 2, "alpha must lie in (0,2)");
    require(m.c_plus >= 0 && m.c_minus >= 0, "tail constants must be nonnegative");
    require(m.c_plus + m.c_minus > 0, "all jump rates vanish");
    require(m.max_range >= 1, "max_range must be >= 1");
  }
  void operator()(const SlowBond& m) const {
    require(lat.ring(), "slow-bond exclusion runs on the ring");
    require(m.alpha_sb > 0, "slow-bond strength must be positive");
    require(m.beta_sb >= 0 && m.gamma >= 0, "exponents must be nonnegative");
    require(m.bulk_minus(lat.n) >= 0, "bulk asymmetry too strong at this n");
    require(m.slow_minus(lat.n) >= 0, "slow-bond asymmetry too strong at this n");
  }
  void operator()(const BoundaryReservoir& m) const {
    require(!lat.ring(), "reservoir dynamics runs on the segment");
    require(m.theta >= 0 && m.gamma >= 0, "exponents must be nonnegative");
    require(m.alpha_res > 0 && m.alpha_res < 1 && m.beta_res > 0 && m.beta_res < 1,
            "reservoir densities must lie in (0,1)");
    require(m.bulk_minus(lat.n) >= 0, "bulk asymmetry too strong at this n");
  }
  void operator()(const AbcExchange& m) const {
    require(lat.ring(), "species exchange runs on the ring");
    require(m.gamma >= 0, "gamma must be nonnegative");
    for (double e : m.fields) require(std::isfinite(e), "fields must be finite");
  }
};

void check_kind(const Configuration& c, const RateModel& model) {
  if (c.kind != state_kind(model))
    throw std::invalid_argument("configuration kind does not match the model");
}

}  // namespace

void validate_model(const RateModel& model, const Lattice& lat) {
  std::visit(Validator{lat}, model);
}

StateKind state_kind(const RateModel& model) {
  return std::holds_alternative<AbcExchange>(model) ? StateKind::species
                                                    : StateKind::exclusion;
}

std::vector<Event> event_catalog(const RateModel& model, const Configuration& c,
                                 const Lattice& lat) {
  validate_model(model, lat);
  check_kind(c, model);
  if (c.size() != lat.n) throw std::invalid_argument("configuration size mismatch");
  std::vector<Event> ev;

  auto push_exchange = [&](int x, int y, double r) {
    if (r > 0) ev.push_back(Event{EventKind::exchange, x, y, r});
  };

  if (auto* m = std::get_if<NearestExclusion>(&model)) {
    double pp = m->p_plus(lat.n), pm = m->p_minus(lat.n);
    for (int x = 0; x < lat.n; ++x) {
      int y = lat.bond_right(x);
      if (c.sites[x] == 1 && c.sites[y] == 0) push_exchange(x, y, pp);
      if (c.sites[x] == 0 && c.sites[y] == 1) push_exchange(x, y, pm);
    }
  } else if (auto* m = std::get_if<SlowBond>(&model)) {
    for (int x = 0; x < lat.n; ++x) {
      int y = lat.bond_right(x);
      bool slow = (x == lat.n - 1);
      double pp = slow ? m->slow_plus(lat.n) : m->bulk_plus(lat.n);
      double pm = slow ? m->slow_minus(lat.n) : m->bulk_minus(lat.n);
      if (c.sites[x] == 1 && c.sites[y] == 0) push_exchange(x, y, pp);
      if (c.sites[x] == 0 && c.sites[y] == 1) push_exchange(x, y, pm);
    }
  } else if (auto* m = std::get_if<BoundaryReservoir>(&model)) {
    double pp = m->bulk_plus(lat.n), pm = m->bulk_minus(lat.n);
    for (int x = 1; x <= lat.n - 2; ++x) {
      int y = x + 1;
      if (c.sites[x] == 1 && c.sites[y] == 0) push_exchange(x, y, pp);
      if (c.sites[x] == 0 && c.sites[y] == 1) push_exchange(x, y, pm);
    }
    double s = m->boundary_scale(lat.n);
    auto boundary = [&](int x, double fill) {
      if (c.sites[x] == 0) {
        if (fill * s > 0) ev.push_back(Event{EventKind::inject, x, x, fill * s});
      } else {
        double r = (1.0 - fill) * s;
        if (r > 0) ev.push_back(Event{EventKind::remove, x, x, r});
      }
    };
    boundary(1, m->alpha_res);
    boundary(lat.n - 1, m->beta_res);
  } else if (auto* m = std::get_if<AbcExchange>(&model)) {
    for (int x = 0; x < lat.n; ++x) {
      int y = lat.bond_right(x);
      int a = c.sites[x], b = c.sites[y];
      if (a != b) push_exchange(x, y, m->rate(a, b, lat.n));
    }
  } else if (auto* m = std::get_if<LongJumpExclusion>(&model)) {
    int R = m->range(lat);
    for (int x = 0; x < lat.n; ++x) {
      if (c.sites[x] == 0) continue;
      for (int z = -R; z <= R; ++z) {
        if (z == 0) continue;
        int y = lat.fold(x + z);
        if (y == x || c.sites[y] != 0) continue;
        double r = m->p(z);
        if (r > 0) ev.push_back(Event{EventKind::jump, x, y, r});
      }
    }
  }
  return ev;
}

void apply_event(Configuration& c, const Event& e) {
  switch (e.kind) {
    case EventKind::exchange:
      std::swap(c.sites[e.x], c.sites[e.y]);
      break;
    case EventKind::jump:
      c.sites[e.y] = c.sites[e.x];
      c.sites[e.x] = 0;
      break;
    case EventKind::inject:
      c.sites[e.x] = 1;
      break;
    case EventKind::remove:
      c.sites[e.x] = 0;
      break;
  }
}

double bond_rate(const RateModel& model, const Configuration& c, const Lattice& lat, int x) {
  check_kind(c, model);
  if (x < lat.first_bond() || x >= lat.first_bond() + lat.bond_count())
    throw std::out_of_range("bond index");
  int y = lat.bond_right(x);
  int sx = c.sites[x], sy = c.sites[y];

  if (auto* m = std::get_if<NearestExclusion>(&model)) {
    if (sx == 1 && sy == 0) return m->p_plus(lat.n);
    if (sx == 0 && sy == 1) return m->p_minus(lat.n);
    return 0.0;
  }
  if (auto* m = std::get_if<SlowBond>(&model)) {
    bool slow = (x == lat.n - 1);
    if (sx == 1 && sy == 0) return slow ? m->slow_plus(lat.n) : m->bulk_plus(lat.n);
    if (sx == 0 && sy == 1) return slow ? m->slow_minus(lat.n) : m->bulk_minus(lat.n);
    return 0.0;
  }
  if (auto* m = std::get_if<BoundaryReservoir>(&model)) {
    if (sx == 1 && sy == 0) return m->bulk_plus(lat.n);
    if (sx == 0 && sy == 1) return m->bulk_minus(lat.n);
    return 0.0;
  }
  if (auto* m = std::get_if<AbcExchange>(&model)) {
    return sx == sy ? 0.0 : m->rate(sx, sy, lat.n);
  }
  throw std::invalid_argument("long-jump family has no single-bond exchange rate");
}

double instantaneous_current(const RateModel& model, const Configuration& c,
                             const Lattice& lat, int x, int species) {
  check_kind(c, model);
  if (std::holds_alternative<LongJumpExclusion>(model))
    throw std::invalid_argument("bond current undefined for long-jump dynamics");
  int y = lat.bond_right(x);
  if (auto* m = std::get_if<AbcExchange>(&model)) {
    // net rate at which `species` mass crosses the bond rightward
    int a = c.sites[x], b = c.sites[y];
    if (a == b) return 0.0;
    if (a == species) return m->rate(a, b, lat.n);
    if (b == species) return -m->rate(a, b, lat.n);
    return 0.0;
  }
  int sx = c.sites[x], sy = c.sites[y];
  if (sx == 1 && sy == 0) return bond_rate(model, c, lat, x);
  if (sx == 0 && sy == 1) return -bond_rate(model, c, lat, x);
  return 0.0;
}

std::string model_name(const RateModel& model) {
  struct Namer {
    std::string operator()(const NearestExclusion& m) const {
      if (m.a == 0.0) return m.b_plus == m.b_minus ? "ssep" : "asep";
      return "wasep";
    }
    std::string operator()(const LongJumpExclusion&) const { return "longjump"; }
    std::string operator()(const SlowBond&) const { return "slowbond"; }
    std::string operator()(const BoundaryReservoir&) const { return "reservoir"; }
    std::string operator()(const AbcExchange&) const { return "abc"; }
  };
  return std::visit(Namer{}, model);
}

}  // namespace ips
