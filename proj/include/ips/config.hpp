#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ips/engine.hpp"
#include "ips/lattice.hpp"
#include "ips/measure.hpp"
#include "ips/model.hpp"

namespace ips {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat sectioned key = value text. Full-line comments start with '#' or ';',
// keys live inside a [section], duplicate (section, key) pairs are rejected.
// The canonical form sorts sections and keys, so the content hash ignores
// ordering, comments, and whitespace.
class ConfigFile {
 public:
  struct Entry {
    std::string section, key, value;
    int line = 0;
  };

  static ConfigFile parse_text(const std::string& text);
  static ConfigFile load(const std::string& path);

  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has(const std::string& section, const std::string& key) const;

  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  uint64_t get_seed(const std::string& section, const std::string& key) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;
  std::vector<long long> get_int_list(const std::string& section,
                                      const std::string& key) const;

  // every key a builder did not consume is an unknown parameter
  void ensure_all_used() const;

  std::string canonical_text() const;
  uint64_t hash() const;  // FNV-1a over the canonical text

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  const Entry* find(const std::string& section, const std::string& key, bool mark) const;

  std::vector<Entry> entries_;
  mutable std::vector<char> used_;
};

// Fully validated experiment description; building it touches no simulation.
struct ExperimentConfig {
  RateModel model = ssep();
  Lattice lattice;
  ProductMeasure measure = ProductMeasure::bernoulli(0.5);
  ScalingSpec scaling = diffusive_scaling();
  SimOptions sim;
  int trajectories = 1;
  uint64_t master_seed = 0;
  int workers = 1;

  std::vector<int> modes;       // cosine-mode field series to record
  double frame_velocity = 0.0;  // moving frame for the field series
  int species = -1;             // -1 occupancy, 0..2 species indicator
  bool structure = false;       // space-time correlation against sample 0
  bool spread_fit = false;      // exponent fit over the structure widths
  std::vector<int> bg_boxes;    // block-replacement residual box sizes
  double ew_band = 1.8, kpz_band = 1.65;

  std::string out_dir;

  double tracked_mean() const {
    return species < 0 ? measure.rho : measure.species_density(species);
  }
};

// Validates every referenced parameter (model, lattice, measure, scaling,
// estimator selections) and rejects unknown keys; throws ConfigError.
ExperimentConfig build_experiment(const ConfigFile& f);

// canonical entries for cfg; build_experiment on the result reproduces cfg
ConfigFile serialize_experiment(const ExperimentConfig& cfg);

}  // namespace ips
