#include "ips/run.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "ips/csv.hpp"
#include "ips/estimators.hpp"
#include "ips/fit.hpp"
#include "ips/stats.hpp"
#include "ips/testfn.hpp"

namespace fs = std::filesystem;

namespace ips {

namespace {

void write_plot_script(const ExperimentConfig& cfg, const std::string& out) {
  std::ofstream p(fs::path(out) / "plot.gp", std::ios::binary);
  p << "# gnuplot script over the data files written next to it\n"
       "set datafile separator ','\n"
       "set key left top\n"
       "set terminal pngcairo size 900,600\n";
  if (!cfg.modes.empty()) {
    p << "set output 'fields.png'\n"
         "set xlabel 't'\n"
         "set ylabel 'ensemble variance'\n"
         "plot ";
    for (size_t i = 0; i < cfg.modes.size(); ++i) {
      if (i) p << ", ";
      p << "'field_var_k" << cfg.modes[i] << ".csv' every ::1 using 1:2 "
        << "with linespoints title 'mode " << cfg.modes[i] << "'";
    }
    p << "\n";
  }
  if (cfg.structure) {
    p << "set output 'spread.png'\n"
         "set xlabel 't'\n"
         "set ylabel 'correlation width'\n"
         "set logscale xy\n"
         "plot 'spread.csv' every ::1 using 1:2 with points pt 7 title 'width'\n";
  }
  if (!cfg.bg_boxes.empty()) {
    p << "set output 'residuals.png'\n"
         "unset logscale\n"
         "set xlabel 'box size'\n"
         "set ylabel 'residual second moment'\n"
         "plot 'residuals.csv' every ::1 using 1:2:3 with yerrorbars title 'residual'\n";
  }
}

void write_artifacts(const ConfigFile& file, const ExperimentConfig& cfg,
                     const std::string& out) {
  const Lattice& lat = cfg.lattice;
  int n = lat.n;

  {
    std::ofstream c(fs::path(out) / "config.ini", std::ios::binary);
    c << serialize_experiment(cfg).canonical_text();
  }

  std::vector<TrajectoryRecord> ensemble = parallel_map(
      cfg.trajectories, cfg.master_seed, cfg.workers, [&](int k, uint64_t) {
        Configuration init = sample_configuration(
            cfg.measure, lat, derive_seed(cfg.master_seed, 2 * uint64_t(k)));
        return simulate(cfg.model, lat, std::move(init), cfg.scaling, cfg.sim,
                        derive_seed(cfg.master_seed, 2 * uint64_t(k) + 1));
      });
  const std::vector<double>& times = ensemble[0].times;
  size_t samples = times.size();

  {
    CsvWriter w(out + "/trajectory0.csv");
    std::vector<std::string> cols = {"t"};
    for (int x = lat.first_site(); x < n; ++x) cols.push_back("site_" + std::to_string(x));
    w.header(cols);
    for (size_t s = 0; s < samples; ++s) {
      std::vector<double> row = {times[s]};
      for (int x = lat.first_site(); x < n; ++x)
        row.push_back(double(ensemble[0].states[s].sites[x]));
      w.row(row);
    }
  }

  if (cfg.sim.record_currents) {
    int track = cfg.species < 0 ? 0 : cfg.species;
    int bonds = lat.bond_count();
    CsvWriter w(out + "/trajectory0_currents.csv");
    w.header({"t", "bond", "J"});
    for (size_t s = 0; s < samples; ++s)
      for (int col = 0; col < bonds; ++col)
        w.row({times[s], double(lat.first_bond() + col),
               ensemble[0].currents[s][size_t(track) * bonds + col]});
  }

  double mean = cfg.tracked_mean();
  MovingFrame frame{cfg.frame_velocity, cfg.species};
  for (int k : cfg.modes) {
    TestFunction f = fourier_cos(k, n);
    CsvWriter wm(out + "/field_mean_k" + std::to_string(k) + ".csv");
    CsvWriter wv(out + "/field_var_k" + std::to_string(k) + ".csv");
    wm.header({"t", "value"});
    wv.header({"t", "value"});
    for (size_t s = 0; s < samples; ++s) {
      RunningStats st;
      for (const TrajectoryRecord& rec : ensemble)
        st.add(density_field(rec, lat, f, mean, frame, s, cfg.species));
      wm.row({times[s], st.mean});
      wv.row({times[s], st.variance()});
    }
  }

  if (cfg.structure) {
    CsvWriter w(out + "/structure.csv");
    w.header({"t", "x", "S"});
    std::vector<double> lags;
    std::vector<std::vector<double>> profiles;
    for (size_t s = 0; s < samples; ++s) {
      std::vector<double> prof =
          structure_function(ensemble, lat, 0, s, mean, mean, cfg.species, cfg.species);
      double lag = times[s] - times[0];
      for (int x = 0; x < n; ++x) w.row({lag, double(x), prof[x]});
      if (s > 0 && lag > 0) {
        lags.push_back(lag);
        profiles.push_back(std::move(prof));
      }
    }
    {
      CsvWriter ws(out + "/spread.csv");
      ws.header({"t", "value"});
      for (size_t i = 0; i < lags.size(); ++i)
        ws.row({lags[i], profile_spread(profiles[i])});
    }
    if (cfg.spread_fit) {
      try {
        ExponentFit fit = fit_dynamic_exponent(lags, profiles);
        CsvWriter wf(out + "/fit.csv");
        wf.header({"exponent", "std_error", "window_lo", "window_hi", "r_squared"});
        wf.row({fit.exponent, fit.std_error, fit.window_lo, fit.window_hi, fit.r_squared});
      } catch (const std::exception& e) {
        std::ofstream rej(fs::path(out) / "fit_rejected.txt", std::ios::binary);
        rej << e.what() << "\n";
      }
    }
  }

  if (!cfg.bg_boxes.empty()) {
    TestFunction f = fourier_cos(1, n);
    CsvWriter w(out + "/residuals.csv");
    w.header({"box", "value", "stderr"});
    for (int box : cfg.bg_boxes) {
      EstimateWithError r =
          bg_residual(ensemble, lat, f.grad_fwd, times.back(), box, cfg.measure.rho);
      w.row({double(box), r.value, r.se});
    }
  }

  write_plot_script(cfg, out);

  {
    std::ofstream m(fs::path(out) / "manifest.txt", std::ios::binary);
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)file.hash());
    m << "version = " << kVersion << "\n"
      << "config_hash = " << hex << "\n"
      << "master_seed = " << cfg.master_seed << "\n"
      << "trajectories = " << cfg.trajectories << "\n"
      << "model = " << model_name(cfg.model) << "\n"
      << "sites = " << n << "\n"
      << "seed_rule = splitmix64 stream; trajectory i samples its initial state with "
         "derive_seed(master_seed, 2i) and runs dynamics with derive_seed(master_seed, 2i+1)\n";
  }
}

}  // namespace

std::string resolve_out_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_absolute()) return p.string();
  const char* root = std::getenv(kOutRootEnv);
  if (root && *root) return (fs::path(root) / p).string();
  return p.string();
}

RunResult run_experiment(const std::string& config_path) {
  ConfigFile file;
  ExperimentConfig cfg;
  try {
    file = ConfigFile::load(config_path);
    cfg = build_experiment(file);
  } catch (const std::exception& e) {
    return {1, e.what(), ""};
  }
  std::string out = resolve_out_dir(cfg.out_dir);
  try {
    fs::create_directories(out);
    {
      std::ofstream marker(fs::path(out) / "INCOMPLETE", std::ios::binary);
      marker << "run in progress\n";
    }
    write_artifacts(file, cfg, out);
    fs::remove(fs::path(out) / "INCOMPLETE");
    return {0, "ok", out};
  } catch (const std::exception& e) {
    return {2, std::string("runtime error: ") + e.what(), out};
  }
}

}  // namespace ips
