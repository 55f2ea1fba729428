#include "doctest.h"
#include "ips/measure.hpp"
#include "ips/model.hpp"

#include <cmath>

using namespace ips;

namespace {

// generator applied to the site value: sum over admissible events of
// rate * (value after - value before)
double generator_on_site(const RateModel& m, const Configuration& c, const Lattice& lat,
                         int x, int species) {
  double acc = 0;
  Configuration work = c;
  for (const Event& e : event_catalog(m, c, lat)) {
    double before = species < 0 ? double(c.sites[x])
                                : (c.sites[x] == species ? 1.0 : 0.0);
    work = c;
    apply_event(work, e);
    double after = species < 0 ? double(work.sites[x])
                               : (work.sites[x] == species ? 1.0 : 0.0);
    acc += e.rate * (after - before);
  }
  return acc;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("weak asymmetry rates at finite n") {
  NearestExclusion m = wasep(1.0, 0.5);
  CHECK(m.p_plus(100) == doctest::Approx(0.55));
  CHECK(m.p_minus(100) == doctest::Approx(0.45));
  CHECK(m.p_plus(10000) == doctest::Approx(0.505));

  NearestExclusion s = ssep();
  CHECK(s.p_plus(8) == doctest::Approx(0.5));
  CHECK(s.p_minus(8) == doctest::Approx(0.5));

  NearestExclusion a = asep(0.7, 0.3);
  CHECK(a.p_plus(8) == doctest::Approx(0.7));
  CHECK(a.p_minus(8) == doctest::Approx(0.3));
}

TEST_CASE("long-jump tail rates") {
  LongJumpExclusion m;
  m.alpha = 1.5;
  m.c_plus = 1.0;
  m.c_minus = 1.0;
  CHECK(m.p(1) == doctest::Approx(1.0));
  CHECK(m.p(2) == doctest::Approx(std::pow(2.0, -2.5)));
  CHECK(m.p(-2) == doctest::Approx(std::pow(2.0, -2.5)));
  CHECK(m.p(0) == 0.0);
  m.c_minus = 0.5;
  CHECK(m.p(-3) == doctest::Approx(0.5 * std::pow(3.0, -2.5)));

  Lattice lat = build_lattice(64, Topology::ring);
  CHECK(m.range(lat) == 32);
  m.max_range = 5;
  CHECK(m.range(lat) == 5);
}

TEST_CASE("species exchange rates") {
  AbcExchange m;
  m.fields = {1.0, 0.0, 0.0};
  m.gamma = 1.0;
  CHECK(abc_bond_rate(m, 0, 1, 10) == doctest::Approx(std::exp(0.05)));
  CHECK(abc_bond_rate(m, 1, 0, 10) == doctest::Approx(std::exp(-0.05)));
  CHECK(abc_bond_rate(m, 1, 2, 10) == doctest::Approx(1.0));
  CHECK(abc_bond_rate(m, 2, 2, 10) == doctest::Approx(1.0));
  // detailed-balance-like reciprocity of the pair rates
  CHECK(abc_bond_rate(m, 0, 2, 10) * abc_bond_rate(m, 2, 0, 10) == doctest::Approx(1.0));
}

TEST_CASE("slow bond and reservoir rate tables") {
  SlowBond sb;
  sb.alpha_sb = 0.8;
  sb.beta_sb = 1.0;
  sb.a = 0.0;
  sb.gamma = 0.0;
  CHECK(sb.bulk_plus(10) == doctest::Approx(0.5));
  CHECK(sb.slow_plus(10) == doctest::Approx(0.5 * 0.8 / 10.0));
  CHECK(sb.slow_minus(10) == doctest::Approx(0.5 * 0.8 / 10.0));

  BoundaryReservoir br;
  br.theta = 1.0;
  br.alpha_res = 0.3;
  br.beta_res = 0.7;
  CHECK(br.boundary_scale(10) == doctest::Approx(0.1));
  CHECK(br.bulk_plus(10) == doctest::Approx(0.5));
}

TEST_CASE("model validation rejects inconsistent parameters") {
  Lattice ring = build_lattice(8, Topology::ring);
  Lattice seg = build_lattice(8, Topology::segment);

  CHECK_NOTHROW(validate_model(ssep(), ring));
  CHECK_THROWS(validate_model(ssep(), seg));

  NearestExclusion too_strong = wasep(20.0, 0.0);  // p_minus = 0.5 - 10 < 0
  CHECK_THROWS(validate_model(too_strong, ring));

  LongJumpExclusion lj;
  lj.alpha = 2.5;
  CHECK_THROWS(validate_model(lj, ring));
  lj.alpha = 1.0;
  CHECK_NOTHROW(validate_model(lj, ring));
  CHECK_THROWS(validate_model(lj, seg));

  BoundaryReservoir br;
  CHECK_NOTHROW(validate_model(br, seg));
  CHECK_THROWS(validate_model(br, ring));
  br.alpha_res = 1.5;
  CHECK_THROWS(validate_model(br, seg));

  AbcExchange abc;
  CHECK_NOTHROW(validate_model(abc, ring));
  CHECK_THROWS(validate_model(abc, seg));
}

TEST_CASE("event catalog for nearest-neighbour exclusion") {
  Lattice lat = build_lattice(4, Topology::ring);
  Configuration c = configuration_from_string("1100");
  auto ev = event_catalog(RateModel{ssep()}, c, lat);
  REQUIRE(ev.size() == 2);
  // bond 1: (1,0) forward; bond 3: (0,1) backward
  bool saw_fwd = false, saw_bwd = false;
  for (const auto& e : ev) {
    CHECK(e.kind == EventKind::exchange);
    if (e.x == 1 && e.y == 2) { saw_fwd = true; CHECK(e.rate == doctest::Approx(0.5)); }
    if (e.x == 3 && e.y == 0) { saw_bwd = true; CHECK(e.rate == doctest::Approx(0.5)); }
  }
  CHECK(saw_fwd);
  CHECK(saw_bwd);

  auto evw = event_catalog(RateModel{wasep(1.0, 0.5)}, c, lat);
  for (const auto& e : evw) {
    if (e.x == 1) CHECK(e.rate == doctest::Approx(0.5 + 0.5 / 2.0));
    if (e.x == 3) CHECK(e.rate == doctest::Approx(0.5 - 0.5 / 2.0));
  }
}

TEST_CASE("event catalog for boundary reservoirs") {
  Lattice lat = build_lattice(6, Topology::segment);
  BoundaryReservoir br;
  br.theta = 0.0;
  br.alpha_res = 0.3;
  br.beta_res = 0.7;

  Configuration empty = configuration_from_string("000000");
  auto ev = event_catalog(RateModel{br}, empty, lat);
  REQUIRE(ev.size() == 2);
  for (const auto& e : ev) {
    CHECK(e.kind == EventKind::inject);
    if (e.x == 1) CHECK(e.rate == doctest::Approx(0.3));
    if (e.x == 5) CHECK(e.rate == doctest::Approx(0.7));
  }

  Configuration full = configuration_from_string("011111");
  auto ev2 = event_catalog(RateModel{br}, full, lat);
  REQUIRE(ev2.size() == 2);
  for (const auto& e : ev2) {
    CHECK(e.kind == EventKind::remove);
    if (e.x == 1) CHECK(e.rate == doctest::Approx(0.7));
    if (e.x == 5) CHECK(e.rate == doctest::Approx(0.3));
  }
}

TEST_CASE("event catalog for long jumps excludes occupied targets") {
  Lattice lat = build_lattice(8, Topology::ring);
  LongJumpExclusion m;
  m.alpha = 1.0;
  Configuration c = configuration_from_string("10000001");
  auto ev = event_catalog(RateModel{m}, c, lat);
  // two particles, R = 4, displacements z in {-4..-1, 1..4} minus occupied targets
  for (const auto& e : ev) {
    CHECK(e.kind == EventKind::jump);
    CHECK(c.sites[e.x] == 1);
    CHECK(c.sites[e.y] == 0);
    int z = e.y - e.x;
    int zf = ((z % 8) + 8) % 8;
    int dist = std::min(zf, 8 - zf);
    CHECK(e.rate == doctest::Approx(1.0 / std::pow(double(dist), 2.0)));
  }
  // particle at 0: targets fold(0±{1..4}) minus site 7 occupied; z=-1 blocked
  int from0 = 0;
  for (const auto& e : ev) from0 += e.x == 0 ? 1 : 0;
  CHECK(from0 == 7);  // z in {-4,-3,-2,1,2,3,4}
}

TEST_CASE("apply_event performs swaps, jumps, injections, removals") {
  Configuration c = configuration_from_string("1100");
  apply_event(c, Event{EventKind::exchange, 1, 2, 1.0});
  CHECK(to_string(c) == "1010");
  apply_event(c, Event{EventKind::jump, 0, 3, 1.0});
  CHECK(to_string(c) == "0011");
  apply_event(c, Event{EventKind::inject, 0, 0, 1.0});
  CHECK(to_string(c) == "1011");
  apply_event(c, Event{EventKind::remove, 3, 3, 1.0});
  CHECK(to_string(c) == "1010");
}

TEST_CASE("bond currents carry sign and magnitude") {
  Lattice lat = build_lattice(4, Topology::ring);
  Configuration c = configuration_from_string("1010");
  RateModel m = wasep(1.0, 0.5);
  double pp = 0.5 + 0.5 / 2.0, pm = 0.5 - 0.5 / 2.0;
  CHECK(instantaneous_current(m, c, lat, 0) == doctest::Approx(pp));
  CHECK(instantaneous_current(m, c, lat, 1) == doctest::Approx(-pm));
  Configuration blocked = configuration_from_string("1100");
  CHECK(instantaneous_current(m, blocked, lat, 0) == 0.0);

  LongJumpExclusion lj;
  CHECK_THROWS(instantaneous_current(RateModel{lj}, c, lat, 0));
}

TEST_CASE("species currents by label") {
  Lattice lat = build_lattice(4, Topology::ring);
  AbcExchange m;
  m.fields = {1.0, 0.0, 0.0};
  m.gamma = 1.0;
  Configuration c = configuration_from_string("ABCC");
  double r01 = std::exp((1.0 - 0.0) / (2.0 * 4.0));
  CHECK(instantaneous_current(RateModel{m}, c, lat, 0, 0) == doctest::Approx(r01));
  CHECK(instantaneous_current(RateModel{m}, c, lat, 0, 1) == doctest::Approx(-r01));
  CHECK(instantaneous_current(RateModel{m}, c, lat, 0, 2) == 0.0);
  CHECK(instantaneous_current(RateModel{m}, c, lat, 2, 2) == 0.0);  // (C,C) frozen
}

TEST_CASE("generator of a site value telescopes into bond currents") {
  // L eta_x = j_{x-1,x} - j_{x,x+1} for every conservative family
  Lattice lat = build_lattice(10, Topology::ring);
  Rng rng(314);

  auto check_identity = [&](const RateModel& m, const Configuration& c, int species) {
    for (int x = 0; x < lat.n; ++x) {
      double lhs = generator_on_site(m, c, lat, x, species);
      double in = instantaneous_current(m, c, lat, lat.fold(x - 1), species);
      double out = instantaneous_current(m, c, lat, x, species);
      CHECK(lhs == doctest::Approx(in - out).epsilon(1e-12));
    }
  };

  for (int rep = 0; rep < 5; ++rep) {
    Configuration c = sample_configuration(ProductMeasure::bernoulli(0.5), lat,
                                           derive_seed(100, rep));
    check_identity(RateModel{wasep(1.0, 0.5)}, c, -1);

    SlowBond sb;
    sb.alpha_sb = 0.8;
    sb.beta_sb = 0.5;
    sb.a = 0.25;
    sb.gamma = 1.0;
    check_identity(RateModel{sb}, c, -1);

    AbcExchange abc;
    abc.fields = {0.9, 0.4, -0.2};
    Configuration s = sample_configuration(ProductMeasure::abc(1.0 / 3, 1.0 / 3), lat,
                                           derive_seed(200, rep));
    for (int a = 0; a < 3; ++a) check_identity(RateModel{abc}, s, a);
  }
}

TEST_CASE("generator identity on the segment interior") {
  Lattice lat = build_lattice(8, Topology::segment);
  BoundaryReservoir br;
  br.theta = 0.5;
  br.a = 0.3;
  br.gamma = 1.0;
  Configuration c = sample_configuration(ProductMeasure::bernoulli(0.4), lat, 55);
  RateModel m{br};
  // sites 2..n-2 touch no reservoir, so the identity holds without boundary flux
  for (int x = 2; x <= lat.n - 2; ++x) {
    double lhs = generator_on_site(m, c, lat, x, -1);
    double in = instantaneous_current(m, c, lat, x - 1, -1);
    double out = instantaneous_current(m, c, lat, x, -1);
    CHECK(lhs == doctest::Approx(in - out).epsilon(1e-12));
  }
}

TEST_CASE("model names") {
  CHECK(model_name(RateModel{ssep()}) == "ssep");
  CHECK(model_name(RateModel{asep(0.7, 0.3)}) == "asep");
  CHECK(model_name(RateModel{wasep(1.0, 0.5)}) == "wasep");
  CHECK(model_name(RateModel{LongJumpExclusion{}}) == "longjump");
  CHECK(model_name(RateModel{SlowBond{}}) == "slowbond");
  CHECK(model_name(RateModel{BoundaryReservoir{}}) == "reservoir");
  CHECK(model_name(RateModel{AbcExchange{}}) == "abc");
}

}  // TEST_SUITE
