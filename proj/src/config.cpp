#include "ips/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ips/csv.hpp"

namespace ips {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(uint8_t(s[a]))) ++a;
  while (b > a && std::isspace(uint8_t(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config error: " + msg); }

std::string where(const ConfigFile::Entry& e) {
  return "[" + e.section + "] " + e.key + " (line " + std::to_string(e.line) + ")";
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text) {
  ConfigFile f;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        fail("malformed section header at line " + std::to_string(lineno));
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) fail("empty section name at line " + std::to_string(lineno));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail("expected key = value at line " + std::to_string(lineno));
    Entry e{section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), lineno};
    if (e.section.empty()) fail("key outside any section at line " + std::to_string(lineno));
    if (e.key.empty()) fail("empty key at line " + std::to_string(lineno));
    for (const Entry& prev : f.entries_)
      if (prev.section == e.section && prev.key == e.key)
        fail("duplicate key " + where(e) + ", first set at line " + std::to_string(prev.line));
    f.entries_.push_back(std::move(e));
  }
  f.used_.assign(f.entries_.size(), 0);
  return f;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
  for (Entry& e : entries_)
    if (e.section == section && e.key == key) {
      e.value = value;
      return;
    }
  entries_.push_back(Entry{section, key, value, 0});
  used_.push_back(0);
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key,
                                          bool mark) const {
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].section == section && entries_[i].key == key) {
      if (mark) used_[i] = 1;
      return &entries_[i];
    }
  return nullptr;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key, false) != nullptr;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key, true);
  if (!e) fail("missing key " + key + " in [" + section + "]");
  return e->value;
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const Entry* e = find(section, key, true);
  return e ? e->value : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key, true);
  if (!e) fail("missing key " + key + " in [" + section + "]");
  try {
    size_t pos = 0;
    double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(where(*e) + ": '" + e->value + "' is not a number");
  }
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long long ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key, true);
  if (!e) fail("missing key " + key + " in [" + section + "]");
  try {
    size_t pos = 0;
    long long v = std::stoll(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(where(*e) + ": '" + e->value + "' is not an integer");
  }
}

long long ConfigFile::get_int_or(const std::string& section, const std::string& key,
                                 long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

uint64_t ConfigFile::get_seed(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key, true);
  if (!e) fail("missing key " + key + " in [" + section + "]");
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(e->value, &pos, 0);
    if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(where(*e) + ": '" + e->value + "' is not an unsigned integer");
  }
}

bool ConfigFile::get_bool_or(const std::string& section, const std::string& key,
                             bool fallback) const {
  const Entry* e = find(section, key, true);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  fail(where(*e) + ": '" + e->value + "' is not a boolean");
}

std::vector<double> ConfigFile::get_double_list(const std::string& section,
                                                const std::string& key) const {
  const Entry* e = find(section, key, true);
  if (!e) fail("missing key " + key + " in [" + section + "]");
  std::istringstream in(e->value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail(where(*e) + ": '" + tok + "' is not a number");
    }
  }
  return out;
}

std::vector<long long> ConfigFile::get_int_list(const std::string& section,
                                                const std::string& key) const {
  const Entry* e = find(section, key, true);
  if (!e) fail("missing key " + key + " in [" + section + "]");
  std::istringstream in(e->value);
  std::vector<long long> out;
  std::string tok;
  while (in >> tok) {
    try {
      size_t pos = 0;
      out.push_back(std::stoll(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail(where(*e) + ": '" + tok + "' is not an integer");
    }
  }
  return out;
}

void ConfigFile::ensure_all_used() const {
  std::string bad;
  for (size_t i = 0; i < entries_.size(); ++i)
    if (!used_[i]) bad += (bad.empty() ? "" : ", ") + where(entries_[i]);
  if (!bad.empty()) fail("unknown keys: " + bad);
}

std::string ConfigFile::canonical_text() const {
  std::map<std::string, std::map<std::string, std::string>> sorted;
  for (const Entry& e : entries_) sorted[e.section][e.key] = e.value;
  std::string out;
  bool first = true;
  for (const auto& [section, keys] : sorted) {
    if (!first) out += '\n';
    first = false;
    out += '[' + section + "]\n";
    for (const auto& [key, value] : keys) out += key + " = " + value + '\n';
  }
  return out;
}

uint64_t ConfigFile::hash() const {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

RateModel model_from(const ConfigFile& f) {
  std::string type = f.get("model", "type");
  if (type == "ssep") return ssep();
  if (type == "asep")
    return asep(f.get_double("model", "b_plus"), f.get_double("model", "b_minus"));
  if (type == "wasep")
    return wasep(f.get_double("model", "lambda"), f.get_double("model", "gamma"));
  if (type == "exclusion")
    return NearestExclusion{f.get_double("model", "b_plus"), f.get_double("model", "b_minus"),
                            f.get_double_or("model", "a", 0.0),
                            f.get_double_or("model", "gamma", 0.0)};
  if (type == "longjump") {
    LongJumpExclusion m;
    m.alpha = f.get_double("model", "alpha");
    m.c_plus = f.get_double_or("model", "c_plus", 1.0);
    m.c_minus = f.get_double_or("model", "c_minus", 1.0);
    m.max_range = int(f.get_int_or("model", "max_range", m.max_range));
    return m;
  }
  if (type == "slowbond") {
    SlowBond m;
    m.alpha_sb = f.get_double_or("model", "alpha_sb", 1.0);
    m.beta_sb = f.get_double_or("model", "beta_sb", 1.0);
    m.a = f.get_double_or("model", "a", 0.0);
    m.gamma = f.get_double_or("model", "gamma", 0.0);
    return m;
  }
  if (type == "reservoir") {
    BoundaryReservoir m;
    m.theta = f.get_double_or("model", "theta", 0.0);
    m.alpha_res = f.get_double("model", "alpha_res");
    m.beta_res = f.get_double("model", "beta_res");
    m.a = f.get_double_or("model", "a", 0.0);
    m.gamma = f.get_double_or("model", "gamma", 0.0);
    return m;
  }
  if (type == "abc")
    return AbcExchange{{f.get_double("model", "e_a"), f.get_double("model", "e_b"),
                        f.get_double("model", "e_c")},
                       f.get_double("model", "gamma")};
  fail("unknown model type '" + type + "'");
}

}  // namespace

ExperimentConfig build_experiment(const ConfigFile& f) {
  ExperimentConfig cfg;

  long long n = f.get_int("lattice", "sites");
  if (n < 3 || n > 1 << 24) fail("[lattice] sites must lie in [3, 2^24]");
  std::string topo = f.get_or("lattice", "topology", "ring");
  if (topo != "ring" && topo != "segment") fail("[lattice] topology must be ring or segment");
  try {
    cfg.lattice = build_lattice(int(n), topo == "ring" ? Topology::ring : Topology::segment);
    cfg.model = model_from(f);
    validate_model(cfg.model, cfg.lattice);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail("[model] " + std::string(e.what()));
  }

  StateKind kind = state_kind(cfg.model);
  try {
    if (kind == StateKind::exclusion)
      cfg.measure = ProductMeasure::bernoulli(f.get_double_or("measure", "rho", 0.5));
    else
      cfg.measure = ProductMeasure::abc(f.get_double_or("measure", "rho_a", 1.0 / 3),
                                        f.get_double_or("measure", "rho_b", 1.0 / 3));
  } catch (const std::exception& e) {
    fail("[measure] " + std::string(e.what()));
  }

  cfg.scaling = ScalingSpec{f.get_double_or("scaling", "theta_exponent", 2.0)};
  cfg.sim.horizon = f.get_double("scaling", "horizon");
  if (!(cfg.sim.horizon >= 0)) fail("[scaling] horizon must be >= 0");
  bool have_count = f.has("scaling", "samples");
  bool have_list = f.has("scaling", "sample_times");
  if (have_count == have_list)
    fail("[scaling] give exactly one of samples and sample_times");
  if (have_count) {
    long long m = f.get_int("scaling", "samples");
    if (m < 2) fail("[scaling] samples must be >= 2");
    for (long long i = 0; i < m; ++i)
      cfg.sim.sample_times.push_back(
          i + 1 == m ? cfg.sim.horizon : cfg.sim.horizon * double(i) / double(m - 1));
  } else {
    cfg.sim.sample_times = f.get_double_list("scaling", "sample_times");
    if (cfg.sim.sample_times.empty()) fail("[scaling] sample_times is empty");
    for (size_t i = 0; i < cfg.sim.sample_times.size(); ++i) {
      double s = cfg.sim.sample_times[i];
      if (s < 0 || s > cfg.sim.horizon ||
          (i && s < cfg.sim.sample_times[i - 1]))
        fail("[scaling] sample_times must ascend within [0, horizon]");
    }
  }
  cfg.sim.record_currents = f.get_bool_or("scaling", "record_currents", false);
  if (cfg.sim.record_currents && std::holds_alternative<LongJumpExclusion>(cfg.model))
    fail("[scaling] record_currents is not defined for the long-jump family");
  if (f.has("scaling", "max_events")) {
    cfg.sim.max_events = f.get_seed("scaling", "max_events");
    if (cfg.sim.max_events == 0) fail("[scaling] max_events must be positive");
  }

  cfg.trajectories = int(f.get_int_or("ensemble", "trajectories", 1));
  if (cfg.trajectories < 1) fail("[ensemble] trajectories must be >= 1");
  cfg.master_seed = f.get_seed("ensemble", "master_seed");
  cfg.workers = int(f.get_int_or("ensemble", "workers", 1));
  if (cfg.workers < 1) fail("[ensemble] workers must be >= 1");

  for (long long k : f.has("estimators", "modes") ? f.get_int_list("estimators", "modes")
                                                  : std::vector<long long>{}) {
    if (k < 1 || k > n / 2) fail("[estimators] modes must lie in [1, sites/2]");
    if (std::count(cfg.modes.begin(), cfg.modes.end(), int(k)))
      fail("[estimators] duplicate mode " + std::to_string(k));
    cfg.modes.push_back(int(k));
  }
  cfg.frame_velocity = f.get_double_or("estimators", "frame_velocity", 0.0);
  cfg.species = int(f.get_int_or("estimators", "species", kind == StateKind::exclusion ? -1 : 0));
  if (kind == StateKind::exclusion && cfg.species != -1)
    fail("[estimators] species selection applies to multi-species models only");
  if (kind == StateKind::species && (cfg.species < 0 || cfg.species > 2))
    fail("[estimators] species must lie in {0, 1, 2}");
  cfg.structure = f.get_bool_or("estimators", "structure", false);
  if (cfg.structure && cfg.lattice.topology != Topology::ring)
    fail("[estimators] structure functions need the ring topology");
  cfg.spread_fit = f.get_bool_or("estimators", "spread_fit", false);
  if (cfg.spread_fit && !cfg.structure)
    fail("[estimators] spread_fit needs structure = true");
  if (cfg.spread_fit && cfg.sim.sample_times.size() < 6)
    fail("[estimators] spread_fit needs at least 6 sample times (5 positive lags)");
  for (long long L : f.has("estimators", "bg_boxes") ? f.get_int_list("estimators", "bg_boxes")
                                                     : std::vector<long long>{}) {
    if (L < 1 || L > n / 4) fail("[estimators] bg_boxes must lie in [1, sites/4]");
    cfg.bg_boxes.push_back(int(L));
  }
  if (!cfg.bg_boxes.empty()) {
    if (kind != StateKind::exclusion)
      fail("[estimators] bg_boxes applies to exclusion models only");
    if (cfg.lattice.topology != Topology::ring)
      fail("[estimators] bg_boxes needs the ring topology");
    if (cfg.sim.sample_times.size() < 100)
      fail("[estimators] bg_boxes needs at least 100 sample times");
  }

  cfg.ew_band = f.get_double_or("fit", "ew_band", 1.8);
  cfg.kpz_band = f.get_double_or("fit", "kpz_band", 1.65);
  if (!(cfg.ew_band >= cfg.kpz_band)) fail("[fit] decision bands overlap");

  cfg.out_dir = f.get("output", "dir");
  if (cfg.out_dir.empty()) fail("[output] dir is empty");

  f.ensure_all_used();
  return cfg;
}

ConfigFile serialize_experiment(const ExperimentConfig& cfg) {
  ConfigFile f;
  auto num = [](double v) { return format_double(v); };

  if (const auto* m = std::get_if<NearestExclusion>(&cfg.model)) {
    f.set("model", "type", "exclusion");
    f.set("model", "b_plus", num(m->b_plus));
    f.set("model", "b_minus", num(m->b_minus));
    f.set("model", "a", num(m->a));
    f.set("model", "gamma", num(m->gamma));
  } else if (const auto* m = std::get_if<LongJumpExclusion>(&cfg.model)) {
    f.set("model", "type", "longjump");
    f.set("model", "alpha", num(m->alpha));
    f.set("model", "c_plus", num(m->c_plus));
    f.set("model", "c_minus", num(m->c_minus));
    f.set("model", "max_range", std::to_string(m->max_range));
  } else if (const auto* m = std::get_if<SlowBond>(&cfg.model)) {
    f.set("model", "type", "slowbond");
    f.set("model", "alpha_sb", num(m->alpha_sb));
    f.set("model", "beta_sb", num(m->beta_sb));
    f.set("model", "a", num(m->a));
    f.set("model", "gamma", num(m->gamma));
  } else if (const auto* m = std::get_if<BoundaryReservoir>(&cfg.model)) {
    f.set("model", "type", "reservoir");
    f.set("model", "theta", num(m->theta));
    f.set("model", "alpha_res", num(m->alpha_res));
    f.set("model", "beta_res", num(m->beta_res));
    f.set("model", "a", num(m->a));
    f.set("model", "gamma", num(m->gamma));
  } else {
    const AbcExchange& abc = std::get<AbcExchange>(cfg.model);
    f.set("model", "type", "abc");
    f.set("model", "e_a", num(abc.fields[0]));
    f.set("model", "e_b", num(abc.fields[1]));
    f.set("model", "e_c", num(abc.fields[2]));
    f.set("model", "gamma", num(abc.gamma));
  }

  f.set("lattice", "sites", std::to_string(cfg.lattice.n));
  f.set("lattice", "topology", cfg.lattice.topology == Topology::ring ? "ring" : "segment");

  if (state_kind(cfg.model) == StateKind::exclusion) {
    f.set("measure", "rho", num(cfg.measure.rho));
  } else {
    f.set("measure", "rho_a", num(cfg.measure.rho_a));
    f.set("measure", "rho_b", num(cfg.measure.rho_b));
  }

  f.set("scaling", "theta_exponent", num(cfg.scaling.theta_exp));
  f.set("scaling", "horizon", num(cfg.sim.horizon));
  std::string times;
  for (double t : cfg.sim.sample_times) times += (times.empty() ? "" : " ") + num(t);
  f.set("scaling", "sample_times", times);
  f.set("scaling", "record_currents", cfg.sim.record_currents ? "true" : "false");
  if (cfg.sim.max_events != ~0ull)
    f.set("scaling", "max_events", std::to_string(cfg.sim.max_events));

  f.set("ensemble", "trajectories", std::to_string(cfg.trajectories));
  f.set("ensemble", "master_seed", std::to_string(cfg.master_seed));
  f.set("ensemble", "workers", std::to_string(cfg.workers));

  if (!cfg.modes.empty()) {
    std::string modes;
    for (int k : cfg.modes) modes += (modes.empty() ? "" : " ") + std::to_string(k);
    f.set("estimators", "modes", modes);
  }
  f.set("estimators", "frame_velocity", num(cfg.frame_velocity));
  f.set("estimators", "species", std::to_string(cfg.species));
  f.set("estimators", "structure", cfg.structure ? "true" : "false");
  f.set("estimators", "spread_fit", cfg.spread_fit ? "true" : "false");
  if (!cfg.bg_boxes.empty()) {
    std::string boxes;
    for (int L : cfg.bg_boxes) boxes += (boxes.empty() ? "" : " ") + std::to_string(L);
    f.set("estimators", "bg_boxes", boxes);
  }

  f.set("fit", "ew_band", num(cfg.ew_band));
  f.set("fit", "kpz_band", num(cfg.kpz_band));

  f.set("output", "dir", cfg.out_dir);
  return f;
}

}  // namespace ips
