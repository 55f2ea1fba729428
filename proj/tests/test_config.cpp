#include <string>
#include <vector>

#include "doctest.h"
#include "ips/config.hpp"

using namespace ips;

namespace {

std::string base_config() {
  return "[model]\n"
         "type = ssep\n"
         "[lattice]\n"
         "sites = 64\n"
         "[scaling]\n"
         "horizon = 0.1\n"
         "samples = 3\n"
         "[ensemble]\n"
         "master_seed = 7\n"
         "[output]\n"
         "dir = out\n";
}

ExperimentConfig build_text(const std::string& text) {
  ConfigFile f = ConfigFile::parse_text(text);
  return build_experiment(f);
}

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("parser handles sections, comments, whitespace; canonical form is stable") {
  std::string text =
      "# leading comment\n"
      "[model]\n"
      "type = ssep\n"
      "\n"
      "; alternate comment style\n"
      "[lattice]\n"
      "sites=64\n"
      "topology =  ring\n";
  ConfigFile f = ConfigFile::parse_text(text);
  CHECK(f.get("model", "type") == "ssep");
  CHECK(f.get_int("lattice", "sites") == 64);
  CHECK(f.get("lattice", "topology") == "ring");
  CHECK(f.has("model", "type"));
  CHECK_FALSE(f.has("model", "missing"));

  std::string canon = f.canonical_text();
  CHECK(ConfigFile::parse_text(canon).canonical_text() == canon);

  // reordered sections and extra comments hash identically
  std::string reordered =
      "[lattice]\n"
      "topology = ring\n"
      "sites = 64\n"
      "# moved\n"
      "[model]\n"
      "type = ssep\n";
  CHECK(ConfigFile::parse_text(reordered).hash() == f.hash());

  // any field change moves the hash
  std::string changed =
      "[model]\n"
      "type = ssep\n"
      "[lattice]\n"
      "sites = 65\n"
      "topology = ring\n";
  CHECK(ConfigFile::parse_text(changed).hash() != f.hash());
  std::string extra = text + "extra = 1\n";
  CHECK(ConfigFile::parse_text(extra).hash() != f.hash());
}

TEST_CASE("parser rejects malformed input with line numbers") {
  CHECK_THROWS_WITH_AS(ConfigFile::parse_text("key = 1\n"), doctest::Contains("outside"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(ConfigFile::parse_text("[a]\nnot a pair\n"),
                       doctest::Contains("key = value"), ConfigError);
  CHECK_THROWS_WITH_AS(ConfigFile::parse_text("[a]\nx = 1\nx = 2\n"),
                       doctest::Contains("duplicate"), ConfigError);
  CHECK_THROWS_WITH_AS(ConfigFile::parse_text("[broken\nx = 1\n"),
                       doctest::Contains("section"), ConfigError);
  CHECK_THROWS_WITH_AS(ConfigFile::parse_text("[]\n"), doctest::Contains("section"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(ConfigFile::parse_text("[a]\n= 5\n"), doctest::Contains("empty key"),
                       ConfigError);
  CHECK_THROWS_AS(ConfigFile::load("/nonexistent/path.ini"), ConfigError);
  // line numbers surface in diagnostics
  CHECK_THROWS_WITH_AS(ConfigFile::parse_text("[a]\n\nbad line\n"), doctest::Contains("line 3"),
                       ConfigError);
}

TEST_CASE("typed getters convert and diagnose") {
  ConfigFile f = ConfigFile::parse_text(
      "[s]\n"
      "d = 0.25\n"
      "i = -3\n"
      "u = 0x10\n"
      "b1 = yes\n"
      "b2 = 0\n"
      "bad = 12x\n"
      "list = 1 2.5 -3\n"
      "ints = 4 5 6\n");
  CHECK(f.get_double("s", "d") == 0.25);
  CHECK(f.get_int("s", "i") == -3);
  CHECK(f.get_seed("s", "u") == 16);
  CHECK(f.get_bool_or("s", "b1", false));
  CHECK_FALSE(f.get_bool_or("s", "b2", true));
  CHECK(f.get_bool_or("s", "absent", true));
  CHECK(f.get_double_or("s", "absent", 1.5) == 1.5);
  CHECK(f.get_int_or("s", "absent", 9) == 9);
  CHECK(f.get_or("s", "absent", "zz") == "zz");
  CHECK(f.get_double_list("s", "list") == std::vector<double>{1, 2.5, -3});
  CHECK(f.get_int_list("s", "ints") == std::vector<long long>{4, 5, 6});

  CHECK_THROWS_WITH_AS(f.get_double("s", "bad"), doctest::Contains("not a number"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(f.get_int("s", "d"), doctest::Contains("not an integer"), ConfigError);
  CHECK_THROWS_WITH_AS(f.get("s", "nothing"), doctest::Contains("missing key"), ConfigError);
  CHECK_THROWS_WITH_AS(f.get("t", "d"), doctest::Contains("[t]"), ConfigError);
  CHECK_THROWS_WITH_AS(f.get_int_list("s", "list"), doctest::Contains("not an integer"),
                       ConfigError);
}

TEST_CASE("experiment building fills defaults and validates") {
  ExperimentConfig cfg = build_text(base_config());
  CHECK(std::holds_alternative<NearestExclusion>(cfg.model));
  CHECK(cfg.lattice.n == 64);
  CHECK(cfg.lattice.topology == Topology::ring);
  CHECK(cfg.measure.rho == 0.5);
  CHECK(cfg.scaling.theta_exp == 2.0);
  CHECK(cfg.sim.horizon == 0.1);
  REQUIRE(cfg.sim.sample_times.size() == 3);
  CHECK(cfg.sim.sample_times[1] == 0.05);
  CHECK_FALSE(cfg.sim.record_currents);
  CHECK(cfg.trajectories == 1);
  CHECK(cfg.master_seed == 7);
  CHECK(cfg.workers == 1);
  CHECK(cfg.species == -1);
  CHECK(cfg.modes.empty());
  CHECK(cfg.ew_band == 1.8);
  CHECK(cfg.kpz_band == 1.65);
  CHECK(cfg.out_dir == "out");

  ExperimentConfig abc = build_text(
      "[model]\n"
      "type = abc\n"
      "e_a = -3\n"
      "e_b = 0\n"
      "e_c = 0\n"
      "gamma = 0.5\n"
      "[lattice]\n"
      "sites = 12\n"
      "[measure]\n"
      "rho_a = 0.25\n"
      "rho_b = 0.25\n"
      "[scaling]\n"
      "horizon = 1\n"
      "sample_times = 0 0.5 1\n"
      "[ensemble]\n"
      "master_seed = 1\n"
      "trajectories = 4\n"
      "[output]\n"
      "dir = out\n");
  const auto& m = std::get<AbcExchange>(abc.model);
  CHECK(m.fields[0] == -3.0);
  CHECK(m.gamma == 0.5);
  CHECK(abc.measure.rho_a == 0.25);
  CHECK(abc.species == 0);  // species models track label 0 by default
  CHECK(abc.trajectories == 4);
}

TEST_CASE("experiment building rejects bad parameters before any simulation") {
  auto replaced = [](const std::string& from, const std::string& to) {
    std::string t = base_config();
    size_t p = t.find(from);
    REQUIRE(p != std::string::npos);
    return t.substr(0, p) + to + t.substr(p + from.size());
  };
  auto with = [](const std::string& section, const std::string& extra) {
    std::string t = base_config();
    size_t p = t.find("[" + section + "]\n");
    REQUIRE(p != std::string::npos);
    p += section.size() + 3;
    return t.substr(0, p) + extra + t.substr(p);
  };

  CHECK_THROWS_WITH_AS(build_text(with("output", "rho = 0.5\n")),
                       doctest::Contains("unknown keys"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[measure]\nrho = 1.5\n"),
                       doctest::Contains("[measure]"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(replaced("type = ssep", "type = warp")),
                       doctest::Contains("unknown model"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(replaced("sites = 64", "sites = 2")),
                       doctest::Contains("sites"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(with("lattice", "topology = moebius\n")),
                       doctest::Contains("topology"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(replaced("horizon = 0.1", "horizon = -1")),
                       doctest::Contains("horizon"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(replaced("samples = 3", "samples = 1")),
                       doctest::Contains("samples"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(with("scaling", "sample_times = 0 0.05\n")),
                       doctest::Contains("exactly one"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(replaced("samples = 3", "sample_times = 0 0.2")),
                       doctest::Contains("ascend"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(replaced("samples = 3", "sample_times = 0.05 0.02")),
                       doctest::Contains("ascend"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(with("ensemble", "trajectories = 0\n")),
                       doctest::Contains("trajectories"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(with("ensemble", "workers = 0\n")),
                       doctest::Contains("workers"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[estimators]\nmodes = 0\n"),
                       doctest::Contains("modes"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[estimators]\nmodes = 40\n"),
                       doctest::Contains("modes"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[estimators]\nmodes = 2 2\n"),
                       doctest::Contains("duplicate mode"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[estimators]\nspecies = 1\n"),
                       doctest::Contains("species"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[estimators]\nspread_fit = true\n"),
                       doctest::Contains("structure"), ConfigError);
  CHECK_THROWS_WITH_AS(
      build_text(base_config() + "[estimators]\nstructure = true\nspread_fit = true\n"),
      doctest::Contains("6 sample times"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[estimators]\nbg_boxes = 20\n"),
                       doctest::Contains("bg_boxes"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[estimators]\nbg_boxes = 4\n"),
                       doctest::Contains("100 sample times"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(base_config() + "[fit]\new_band = 1.5\n"),
                       doctest::Contains("bands"), ConfigError);
  CHECK_THROWS_WITH_AS(build_text(replaced("dir = out", "dir =")),
                       doctest::Contains("dir"), ConfigError);

  std::string longjump = base_config();
  longjump = longjump.substr(0, longjump.find("type = ssep")) + "type = longjump\nalpha = 1.5" +
             longjump.substr(longjump.find("type = ssep") + 11);
  CHECK_THROWS_WITH_AS(build_text(longjump.substr(0, longjump.find("[ensemble]")) +
                                  "record_currents = true\n" +
                                  longjump.substr(longjump.find("[ensemble]"))),
                       doctest::Contains("record_currents"), ConfigError);

  // reservoir needs the segment; structure functions then refuse to run
  std::string res =
      "[model]\n"
      "type = reservoir\n"
      "alpha_res = 0.5\n"
      "beta_res = 0.5\n"
      "[lattice]\n"
      "sites = 32\n"
      "topology = segment\n"
      "[scaling]\n"
      "horizon = 0.1\n"
      "samples = 3\n"
      "[ensemble]\n"
      "master_seed = 1\n"
      "[output]\n"
      "dir = out\n";
  CHECK(std::holds_alternative<BoundaryReservoir>(build_text(res).model));
  CHECK_THROWS_WITH_AS(build_text(res + "[estimators]\nstructure = true\n"),
                       doctest::Contains("ring"), ConfigError);
}

TEST_CASE("experiment serialization round-trips losslessly") {
  std::vector<std::string> cases;
  cases.push_back(
      "[model]\n"
      "type = wasep\n"
      "lambda = 2.5\n"
      "gamma = 0.30000000000000004\n"
      "[lattice]\n"
      "sites = 48\n"
      "[measure]\n"
      "rho = 0.4\n"
      "[scaling]\n"
      "horizon = 0.7\n"
      "samples = 5\n"
      "record_currents = true\n"
      "[ensemble]\n"
      "master_seed = 123456789012345\n"
      "trajectories = 3\n"
      "workers = 2\n"
      "[estimators]\n"
      "modes = 1 3\n"
      "frame_velocity = -12.5\n"
      "[output]\n"
      "dir = a/b\n");
  cases.push_back(
      "[model]\n"
      "type = abc\n"
      "e_a = 1\n"
      "e_b = 0.3\n"
      "e_c = 0\n"
      "gamma = 1\n"
      "[lattice]\n"
      "sites = 24\n"
      "[scaling]\n"
      "horizon = 1\n"
      "sample_times = 0 0.25 0.5 0.75 1\n"
      "[ensemble]\n"
      "master_seed = 5\n"
      "[estimators]\n"
      "species = 2\n"
      "[output]\n"
      "dir = out\n");
  cases.push_back(
      "[model]\n"
      "type = longjump\n"
      "alpha = 1.8\n"
      "c_plus = 0.3\n"
      "c_minus = 0.7\n"
      "[lattice]\n"
      "sites = 100\n"
      "[scaling]\n"
      "horizon = 0.2\n"
      "samples = 4\n"
      "theta_exponent = 1.8\n"
      "[ensemble]\n"
      "master_seed = 11\n"
      "[output]\n"
      "dir = out\n");

  for (const std::string& text : cases) {
    ExperimentConfig cfg = build_experiment(ConfigFile::parse_text(text));
    std::string c1 = serialize_experiment(cfg).canonical_text();
    ExperimentConfig cfg2 = build_experiment(ConfigFile::parse_text(c1));
    std::string c2 = serialize_experiment(cfg2).canonical_text();
    CHECK(c1 == c2);
    CHECK(cfg2.sim.sample_times == cfg.sim.sample_times);
    CHECK(cfg2.master_seed == cfg.master_seed);
    CHECK(cfg2.scaling.theta_exp == cfg.scaling.theta_exp);
    CHECK(cfg2.modes == cfg.modes);
    CHECK(cfg2.frame_velocity == cfg.frame_velocity);
    CHECK(cfg2.species == cfg.species);
  }

  // sample counts expand into explicit times that survive the round trip
  ExperimentConfig cfg = build_experiment(ConfigFile::parse_text(cases[0]));
  const auto& w = std::get<NearestExclusion>(cfg.model);
  CHECK(w.a == 1.25);  // stored as half the asymmetry strength
  CHECK(w.gamma == 0.30000000000000004);
  ConfigFile round = serialize_experiment(cfg);
  CHECK(round.get_double_list("scaling", "sample_times") == cfg.sim.sample_times);
}

TEST_SUITE_END();
