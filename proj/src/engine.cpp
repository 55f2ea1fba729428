#include "ips/engine.hpp"

#include <algorithm>

namespace ips {
namespace detail {

// Events are grouped into classes of equal rate so drawing is a scan over at
// most kMaxClasses buckets, then an O(1) pick of a member. Members are small
// integer ids: bond index, or n + {0,1} for the two reservoir sites.
class ClassTable {
 public:
  static constexpr int kNone = -1;

  ClassTable(const RateModel& model, const Lattice& lat) : lat_(lat) {
    if (auto* m = std::get_if<NearestExclusion>(&model)) {
      add_class(m->p_plus(lat.n));   // (1,0) bulk
      add_class(m->p_minus(lat.n));  // (0,1) bulk
      kind_ = Kind::nearest;
    } else if (auto* m = std::get_if<SlowBond>(&model)) {
      add_class(m->bulk_plus(lat.n));
      add_class(m->bulk_minus(lat.n));
      add_class(m->slow_plus(lat.n));   // (1,0) at bond n-1
      add_class(m->slow_minus(lat.n));  // (0,1) at bond n-1
      kind_ = Kind::slow;
    } else if (auto* m = std::get_if<BoundaryReservoir>(&model)) {
      double s = m->boundary_scale(lat.n);
      add_class(m->bulk_plus(lat.n));
      add_class(m->bulk_minus(lat.n));
      add_class(m->alpha_res * s);          // left inject
      add_class((1.0 - m->alpha_res) * s);  // left remove
      add_class(m->beta_res * s);           // right inject
      add_class((1.0 - m->beta_res) * s);   // right remove
      kind_ = Kind::reservoir;
    } else if (auto* m = std::get_if<AbcExchange>(&model)) {
      int idx = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          if (a == b) { pair_cls_[a][b] = kNone; continue; }
          pair_cls_[a][b] = idx++;
          add_class(m->rate(a, b, lat.n));
        }
      kind_ = Kind::species;
    } else {
      throw std::logic_error("class table built for a thinning-family model");
    }
    slot_cls_.assign(size_t(lat.n) + 2, kNone);
    slot_idx_.assign(size_t(lat.n) + 2, 0);
  }

  void rebuild(const Configuration& c) {
    for (auto& m : members_) m.clear();
    std::fill(slot_cls_.begin(), slot_cls_.end(), kNone);
    for (int x = lat_.first_bond(); x < lat_.first_bond() + lat_.bond_count(); ++x)
      place(x, classify_bond(c, x));
    if (kind_ == Kind::reservoir) {
      place(lat_.n, c.sites[1] == 0 ? 2 : 3);
      place(lat_.n + 1, c.sites[lat_.n - 1] == 0 ? 4 : 5);
    }
  }

  double total() const {
    double s = 0;
    for (size_t k = 0; k < rate_.size(); ++k) s += rate_[k] * double(members_[k].size());
    return s;
  }

  // u uniform in [0,1): returns (member id, class)
  std::pair<int, int> pick(double u) const {
    double target = u * total();
    int last = kNone;
    for (size_t k = 0; k < rate_.size(); ++k) {
      if (members_[k].empty() || rate_[k] <= 0) continue;
      double w = rate_[k] * double(members_[k].size());
      last = int(k);
      if (target < w) {
        size_t j = std::min(size_t(target / rate_[k]), members_[k].size() - 1);
        return {members_[k][j], int(k)};
      }
      target -= w;
    }
    if (last == kNone) throw std::logic_error("pick on an empty table");
    return {members_[last].back(), last};  // rounding spill: last active class
  }

  Event event_for(int id, int cls, const Configuration&) const {
    if (id < lat_.n) return Event{EventKind::exchange, id, lat_.bond_right(id), rate_[cls]};
    int site = id == lat_.n ? 1 : lat_.n - 1;
    bool inject = (cls == 2 || cls == 4);
    return Event{inject ? EventKind::inject : EventKind::remove, site, site, rate_[cls]};
  }

  // reclassify everything an applied event can have touched
  void refresh(const Configuration& c, const Event& e) {
    auto touch_bonds_around = [&](int site) {
      if (lat_.ring()) {
        reclassify(c, lat_.fold(site - 1));
        reclassify(c, site);
      } else {
        if (site - 1 >= lat_.first_bond() && site - 1 <= last_bond()) reclassify(c, site - 1);
        if (site >= lat_.first_bond() && site <= last_bond()) reclassify(c, site);
      }
      if (kind_ == Kind::reservoir) {
        if (site == 1) place_or_move(lat_.n, c.sites[1] == 0 ? 2 : 3);
        if (site == lat_.n - 1) place_or_move(lat_.n + 1, c.sites[lat_.n - 1] == 0 ? 4 : 5);
      }
    };
    if (e.kind == EventKind::exchange) {
      touch_bonds_around(e.x);
      touch_bonds_around(e.y);
    } else {
      touch_bonds_around(e.x);
    }
  }

  bool consistent(const Configuration& c) const {
    for (int x = lat_.first_bond(); x <= last_bond(); ++x)
      if (slot_cls_[x] != classify_bond(c, x)) return false;
    if (kind_ == Kind::reservoir) {
      if (slot_cls_[lat_.n] != (c.sites[1] == 0 ? 2 : 3)) return false;
      if (slot_cls_[lat_.n + 1] != (c.sites[lat_.n - 1] == 0 ? 4 : 5)) return false;
    }
    for (size_t k = 0; k < members_.size(); ++k)
      for (size_t j = 0; j < members_[k].size(); ++j) {
        int id = members_[k][j];
        if (slot_cls_[id] != int(k) || size_t(slot_idx_[id]) != j) return false;
      }
    return true;
  }

 private:
  enum class Kind { nearest, slow, reservoir, species } kind_ = Kind::nearest;

  int last_bond() const { return lat_.first_bond() + lat_.bond_count() - 1; }

  void add_class(double r) {
    rate_.push_back(r);
    members_.emplace_back();
  }

  int classify_bond(const Configuration& c, int x) const {
    int a = c.sites[x], b = c.sites[lat_.bond_right(x)];
    switch (kind_) {
      case Kind::nearest:
        if (a == 1 && b == 0) return 0;
        if (a == 0 && b == 1) return 1;
        return kNone;
      case Kind::slow: {
        bool slow = (x == lat_.n - 1);
        if (a == 1 && b == 0) return slow ? 2 : 0;
        if (a == 0 && b == 1) return slow ? 3 : 1;
        return kNone;
      }
      case Kind::reservoir:
        if (a == 1 && b == 0) return 0;
        if (a == 0 && b == 1) return 1;
        return kNone;
      case Kind::species:
        return pair_cls_[a][b];
    }
    return kNone;
  }

  void place(int id, int cls) {
    slot_cls_[id] = cls;
    if (cls == kNone) return;
    slot_idx_[id] = int(members_[cls].size());
    members_[cls].push_back(id);
  }

  void remove(int id) {
    int cls = slot_cls_[id];
    if (cls == kNone) return;
    auto& m = members_[cls];
    size_t j = slot_idx_[id];
    int moved = m.back();
    m[j] = moved;
    slot_idx_[moved] = j;
    m.pop_back();
    slot_cls_[id] = kNone;
  }

  void place_or_move(int id, int cls) {
    if (slot_cls_[id] == cls) return;
    remove(id);
    place(id, cls);
  }

  void reclassify(const Configuration& c, int x) { place_or_move(x, classify_bond(c, x)); }

  Lattice lat_;
  std::vector<double> rate_;
  std::vector<std::vector<int>> members_;
  std::vector<int> slot_cls_, slot_idx_;
  int pair_cls_[3][3] = {};
};

// Long jumps by thinning: the envelope assigns every particle the full jump
// law; draws landing on occupied sites (or back on the particle itself after
// folding) are self-loops. Exact in law, and the envelope never changes.
class JumpSampler {
 public:
  JumpSampler(const LongJumpExclusion& m, const Lattice& lat, const Configuration& c)
      : lat_(lat), model_(m) {
    int R = m.range(lat);
    for (int z = -R; z <= R; ++z) {
      if (z == 0) continue;
      disp_.push_back(z);
      cum_.push_back((cum_.empty() ? 0.0 : cum_.back()) + m.p(z));
    }
    envelope_per_particle_ = cum_.back();
    pos_.assign(lat.n, -1);
    for (int x = 0; x < lat.n; ++x)
      if (c.sites[x]) {
        pos_[x] = int(particles_.size());
        particles_.push_back(x);
      }
  }

  double total() const { return envelope_per_particle_ * double(particles_.size()); }

  std::optional<Event> draw(const Configuration& c, Rng& rng) {
    int x = particles_[size_t(rng.below(uint64_t(particles_.size())))];
    double u = rng.uniform() * cum_.back();
    size_t j = size_t(std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
    if (j >= disp_.size()) j = disp_.size() - 1;
    int y = lat_.fold(x + disp_[j]);
    if (y == x || c.sites[y] != 0) return std::nullopt;
    return Event{EventKind::jump, x, y, model_.p(disp_[j])};
  }

  void applied(const Event& e) {
    pos_[e.y] = pos_[e.x];
    particles_[pos_[e.y]] = e.y;
    pos_[e.x] = -1;
  }

 private:
  Lattice lat_;
  LongJumpExclusion model_;
  std::vector<int> disp_;
  std::vector<double> cum_;
  double envelope_per_particle_ = 0;
  std::vector<int> particles_;
  std::vector<int> pos_;
};

void tally_currents(const RateModel& model, const Configuration& before, const Event& e,
                    const Lattice& lat, std::vector<double>& counters,
                    std::array<double, 4>& flux) {
  int bonds = lat.bond_count();
  int b0 = lat.first_bond();
  switch (e.kind) {
    case EventKind::exchange: {
      int col = e.x - b0;
      if (state_kind(model) == StateKind::species) {
        int a = before.sites[e.x], b = before.sites[e.y];
        counters[size_t(a) * bonds + col] += 1.0;  // label a crossed rightward
        counters[size_t(b) * bonds + col] -= 1.0;
      } else {
        counters[col] += before.sites[e.x] == 1 ? 1.0 : -1.0;
      }
      break;
    }
    case EventKind::inject:
      (e.x == 1 ? flux[0] : flux[2]) += 1.0;
      break;
    case EventKind::remove:
      (e.x == 1 ? flux[1] : flux[3]) += 1.0;
      break;
    case EventKind::jump:
      throw std::logic_error("no current tally for long jumps");
  }
}

}  // namespace detail

EngineCore::EngineCore(const RateModel& model, const Lattice& lat, Configuration init,
                       double accel)
    : model_(model), lat_(lat), state_(std::move(init)), accel_(accel) {
  validate_model(model_, lat_);
  if (state_.size() != lat_.n) throw std::invalid_argument("initial state size mismatch");
  if (state_.kind != state_kind(model_))
    throw std::invalid_argument("initial state kind does not match the model");
  if (!lat_.ring() && state_.sites[0] != 0)
    throw std::invalid_argument("segment site 0 must stay empty");
  if (auto* m = std::get_if<LongJumpExclusion>(&model_)) {
    jumps_ = std::make_unique<detail::JumpSampler>(*m, lat_, state_);
  } else {
    classes_ = std::make_unique<detail::ClassTable>(model_, lat_);
    classes_->rebuild(state_);
  }
}

EngineCore::~EngineCore() = default;
EngineCore::EngineCore(EngineCore&&) noexcept = default;
EngineCore& EngineCore::operator=(EngineCore&&) noexcept = default;

double EngineCore::total_rate() const {
  double base = classes_ ? classes_->total() : jumps_->total();
  return base * accel_;
}

std::optional<Event> EngineCore::draw(Rng& rng) {
  if (jumps_) return jumps_->draw(state_, rng);
  auto [id, cls] = classes_->pick(rng.uniform());
  return classes_->event_for(id, cls, state_);
}

void EngineCore::apply(const Event& e) {
  apply_event(state_, e);
  if (jumps_) {
    jumps_->applied(e);
  } else {
    classes_->refresh(state_, e);
  }
}

bool EngineCore::table_consistent() const {
  if (!classes_) return true;
  return classes_->consistent(state_);
}

}  // namespace ips
