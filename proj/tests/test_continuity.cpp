#include <doctest.h>

#include <cmath>

#include "bo/continuity.hpp"
#include "bo/errors.hpp"

using namespace bo;

namespace {

ContinuityConfig base_cfg() {
  ContinuityConfig cfg;
  cfg.base = default_base(2);
  return cfg;
}

}  // namespace

TEST_CASE("probe pairs: closed-form distances") {
  const ContinuityConfig cfg = base_cfg();
  const double delta = default_delta(cfg);
  CHECK(delta == doctest::Approx(std::sqrt(M_PI / 2.0)));
  const double beta = 0.5 + cfg.s;
  SparseState z0;
  z0.s = cfg.s;
  z0.plus[1] = cfg.base[0];
  z0.plus[2] = cfg.base[1];
  for (long m : {3L, 17L, 1000L, 123457L}) {
    const auto [zeta, xi] = build_pair(cfg, m);
    CHECK(distance_plus(zeta, z0, beta) == doctest::Approx(delta).epsilon(1e-12));
    CHECK(distance_plus(zeta, xi, beta) == doctest::Approx(delta * std::pow(double(m), cfg.s / 2)).epsilon(1e-12));
    CHECK(distance_plus(xi, z0, beta) == doctest::Approx(delta * std::sqrt(1.0 + std::pow(double(m), cfg.s))).epsilon(1e-12));
    // only mode m differs
    CHECK(zeta.plus.size() == 3);
    CHECK(xi.plus.size() == 3);
    CHECK(zeta.plus.at(1) == xi.plus.at(1));
  }
}

TEST_CASE("probe pairs: degenerate and invalid configurations") {
  ContinuityConfig cfg = base_cfg();
  cfg.delta = 0.0;
  const auto [zeta, xi] = build_pair(cfg, 10);
  CHECK(zeta.plus == xi.plus);
  CHECK(zeta.plus.size() == 2);

  cfg = base_cfg();
  CHECK_THROWS_AS(build_pair(cfg, 2), InvalidInput);
  CHECK_THROWS_AS(build_pair(cfg, 1), InvalidInput);
  cfg.s = 0.1;
  CHECK_THROWS_AS(build_pair(cfg, 5), InvalidInput);
  cfg.s = -0.5;
  CHECK_THROWS_AS(sweep(cfg), InvalidInput);
  cfg = base_cfg();
  cfg.t = 0.0;
  CHECK_THROWS_AS(sweep(cfg), InvalidInput);
  cfg = base_cfg();
  cfg.max_m = 2;  // nothing above the base support
  CHECK_THROWS_AS(sweep(cfg), NumericalFailure);
}

TEST_CASE("admissible probes satisfy the odd-target filter") {
  ContinuityConfig cfg = base_cfg();
  cfg.k = 3;
  cfg.max_m = 200000;
  const std::vector<long> ms = admissible_probes(cfg);
  REQUIRE(ms.size() >= 3);
  long prev_target = 0;
  for (long m : ms) {
    CHECK(m % 3 == 0);
    CHECK(m > 2);
    const double x = std::pow(double(m) / 3.0, -cfg.s);
    const double odd = 2.0 * std::round((x - 1.0) / 2.0) + 1.0;
    CHECK(std::abs(x - odd) < 0.5);
    CHECK(long(odd) > prev_target);  // one probe per odd target, increasing
    prev_target = long(odd);
  }
  cfg.max_probes = 2;
  CHECK(admissible_probes(cfg).size() == 2);
}

TEST_CASE("sweep: frequency gap, phase and lower bounds, slope") {
  const ContinuityConfig cfg = base_cfg();
  const SweepTable tab = sweep(cfg);
  REQUIRE(tab.rows.size() >= 5);
  for (const ProbeRow& r : tab.rows) {
    CHECK(r.omega_gap_meas == doctest::Approx(r.omega_gap_pred).epsilon(1e-12));
    CHECK(r.phase_bound_ok);
    CHECK(r.lower_bound_ok);
    CHECK(r.dt >= r.lower_bound);
    CHECK(r.d0 == doctest::Approx(tab.delta * std::pow(double(r.m), cfg.s / 2)).epsilon(1e-12));
  }
  // d0 shrinks while dt approaches delta
  CHECK(tab.rows.back().d0 < tab.rows.front().d0);
  CHECK(tab.rows.back().dt > 0.6 * tab.delta);
  CHECK(tab.slope == doctest::Approx(-cfg.s / 2).epsilon(0.05));
}

TEST_CASE("sweep is deterministic") {
  ContinuityConfig cfg = base_cfg();
  cfg.s = -0.3;
  cfg.t = 2.0;
  cfg.max_m = 100000;
  const SweepTable a = sweep(cfg), b = sweep(cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].m == b.rows[i].m);
    CHECK(a.rows[i].dt == b.rows[i].dt);
  }
}
