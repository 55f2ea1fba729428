#include "ips/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "ips/config.hpp"
#include "ips/csv.hpp"
#include "ips/fit.hpp"
#include "ips/modes.hpp"
#include "ips/run.hpp"

namespace ips {

namespace {

std::string hash_hex(uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

int cmd_run(const std::string& path, std::ostream& out, std::ostream& err) {
  RunResult r = run_experiment(path);
  if (r.exit_code == 0)
    out << "ok: artifacts in " << r.out_dir << "\n";
  else
    err << r.message << "\n";
  return r.exit_code;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    ConfigFile f = ConfigFile::load(path);
    build_experiment(f);
    out << "valid; config_hash = " << hash_hex(f.hash()) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
}

int cmd_fit(const std::string& path, std::ostream& out, std::ostream& err) {
  std::vector<double> lags;
  std::vector<std::vector<double>> profiles;
  try {
    CsvTable table = read_csv(path);
    if (table.columns != std::vector<std::string>{"t", "x", "S"})
      throw std::runtime_error("expected columns t,x,S in " + path);
    bool open = false;
    double cur_t = 0;
    std::vector<double> cur;
    auto flush = [&] {
      if (open && cur_t > 0) {
        lags.push_back(cur_t);
        profiles.push_back(cur);
      }
      cur.clear();
    };
    for (const std::vector<double>& row : table.rows) {
      if (!open || row[0] != cur_t) {
        flush();
        cur_t = row[0];
        open = true;
      }
      cur.push_back(row[2]);
    }
    flush();
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  try {
    ExponentFit f = fit_dynamic_exponent(lags, profiles);
    out << "exponent = " << f.exponent << " +/- " << f.std_error << "\n"
        << "window = [" << f.window_lo << ", " << f.window_hi << "], points = "
        << f.spreads.size() << ", r2 = " << f.r_squared << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "fit rejected: " << e.what() << "\n";
    return 2;
  }
}

int cmd_modes(const std::vector<double>& fields, double rho_a, double rho_b, double gamma,
              int sites, std::ostream& out, std::ostream& err) {
  try {
    NormalModeSpec spec = normal_modes(rho_a, rho_b, {fields[0], fields[1], fields[2]});
    out << "densities (" << rho_a << ", " << rho_b << "), fields (" << fields[0] << ", "
        << fields[1] << ", " << fields[2] << ")\n";
    if (spec.degenerate) {
      out << "degenerate spectrum: eigenvalue " << spec.primary.eigenvalue
          << ", classification undetermined\n";
      return 0;
    }
    auto show = [&](const char* label, const ModeInfo& m) {
      out << label << ": eigenvalue " << m.eigenvalue << ", coefficients (" << m.coeff[0]
          << ", " << m.coeff[1] << "), self-coupling " << m.self_coupling << ", class "
          << (m.predicted == ModeClass::kpz
                  ? "kpz"
                  : m.predicted == ModeClass::diffusive ? "diffusive" : "undetermined");
      if (sites > 0)
        out << ", frame velocity " << frame_velocity(m, sites, gamma) << " (n = " << sites
            << ", gamma = " << gamma << ")";
      out << "\n";
    };
    show("primary  ", spec.primary);
    show("secondary", spec.secondary);
    out << "splitting = " << spec.splitting << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"simulation and analysis toolkit for conservative lattice systems"};
  app.require_subcommand(1);

  std::string run_path, validate_path, fit_path;
  CLI::App* run = app.add_subcommand("run", "run an experiment config and write artifacts");
  run->add_option("config", run_path, "experiment config file")->required();
  CLI::App* validate = app.add_subcommand("validate", "check a config without simulating");
  validate->add_option("config", validate_path, "experiment config file")->required();
  CLI::App* fit = app.add_subcommand("fit", "fit the spreading exponent from a t,x,S csv");
  fit->add_option("csv", fit_path, "structure function csv")->required();

  std::vector<double> fields;
  double rho_a = 1.0 / 3, rho_b = 1.0 / 3, gamma = 0.5;
  int sites = 0;
  CLI::App* modes = app.add_subcommand("modes", "print the normal-mode table for a field triple");
  modes->add_option("fields", fields, "field values e_a e_b e_c")->expected(3);
  modes->add_option("--rho-a", rho_a, "first species density");
  modes->add_option("--rho-b", rho_b, "second species density");
  modes->add_option("--gamma", gamma, "asymmetry exponent for the frame velocity");
  modes->add_option("--sites", sites, "ring size; 0 skips frame velocities");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  if (*run) return cmd_run(run_path, out, err);
  if (*validate) return cmd_validate(validate_path, out, err);
  if (*fit) return cmd_fit(fit_path, out, err);
  if (*modes) {
    if (fields.size() != 3) {
      err << "modes needs exactly three field values\n";
      return 1;
    }
    return cmd_modes(fields, rho_a, rho_b, gamma, sites, out, err);
  }
  err << "no subcommand\n";
  return 1;
}

}  // namespace ips
