#include <doctest.h>

#include <cmath>
#include <random>

#include "bo/birkhoff.hpp"
#include "bo/direct_pde.hpp"
#include "bo/errors.hpp"

using namespace bo;

namespace {

Potential data(std::uint64_t seed, int N, double norm) {
  std::mt19937_64 rng(seed);
  return random_real_potential(rng, N, 0.0, norm, 0.5);
}

double l2(const Potential& u) { return sobolev_norm(u, 0.0); }

}  // namespace

TEST_CASE("zero data stays zero") {
  IntegratorConfig cfg;
  cfg.sample_times = {0.0, 0.5, 1.0};
  const Trajectory tr = integrate(Potential(3, 0.0, true), cfg);
  for (const auto& u : tr.u) CHECK(u.is_zero());
  CHECK(isospectral_audit(tr, 32, 10) == 0.0);
}

TEST_CASE("linear flow is exact under the integrating factor") {
  const Potential u0 = data(1, 6, 0.3);
  IntegratorConfig cfg;
  cfg.linear_only = true;
  cfg.dt = 0.1;
  cfg.sample_times = {0.0, 0.7, 1.3};
  const Trajectory tr = integrate(u0, cfg);
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    for (int n = -6; n <= 6; ++n)
      CHECK(std::abs(tr.u[i][n] - u0[n] * std::polar(1.0, double(n) * std::abs(n) * tr.t[i])) < 1e-14);
}

TEST_CASE("conservation laws and mean") {
  const Potential u0 = data(2, 5, 0.05);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.sample_times = {0.0, 0.25, 0.5, 0.75, 1.0};
  const Trajectory tr = integrate(u0, cfg);
  for (const auto& u : tr.u) {
    CHECK(u[0] == cplx(0.0));
    CHECK(std::abs(l2(u) * l2(u) - l2(u0) * l2(u0)) < 1e-10);
    CHECK(std::abs(hamiltonian_phys(u) - hamiltonian_phys(u0)) < 1e-8);
  }
  CHECK(isospectral_audit(tr, 64, 10) < 1e-8);
}

TEST_CASE("RK4 order") {
  const Potential u0 = data(3, 4, 0.5);
  IntegratorConfig cfg;
  cfg.T = 0.5;
  cfg.sample_times = {0.5};
  cfg.dt = 0.0125 / 32;
  const Potential ref = integrate(u0, cfg).u.back();
  cfg.dt = 0.0125;
  const double e1 = l2(integrate(u0, cfg).u.back() - ref);
  cfg.dt = 0.00625;
  const double e2 = l2(integrate(u0, cfg).u.back() - ref);
  CHECK(e1 > 1e-10);  // make sure we measure truncation, not round-off
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("disabling dealiasing breaks isospectrality (negative control)") {
  // data filling the band of a coarse grid: with padding the Lax spectrum is
  // kept, on the aliased coarse grid it drifts
  const Potential u0 = data(4, 7, 0.1);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.sample_times = {0.0, 0.5, 1.0};
  const double clean = isospectral_audit(integrate(u0, cfg), 64, 10);
  cfg.grid_size = 16;
  cfg.dealias = false;
  const double dirty = isospectral_audit(integrate(u0, cfg), 64, 10);
  CHECK(clean < 1e-12);
  CHECK(dirty > 1000 * clean);
}

TEST_CASE("time-derivative residual") {
  // linear data: d/dt u = i n|n| u exactly, plus the quadratic term which we keep
  const Potential u0 = data(5, 3, 0.02);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  std::vector<double> coarse, fine;
  for (int i = 0; i <= 4; ++i) coarse.push_back(0.02 * i);
  for (int i = 0; i <= 8; ++i) fine.push_back(0.01 * i);
  cfg.sample_times = coarse;
  const ResidualReport a = residual(integrate(u0, cfg), 0.0);
  cfg.sample_times = fine;
  const ResidualReport b = residual(integrate(u0, cfg), 0.0);
  CHECK(a.max > 0);
  CHECK(a.max / b.max == doctest::Approx(4.0).epsilon(0.1));  // second-order central difference
  Trajectory z;
  z.t = {0, 0.1, 0.2};
  z.u = {Potential(2, 0.0, true), Potential(2, 0.0, true), Potential(2, 0.0, true)};
  CHECK(residual(z, 0.0).max == 0.0);
  CHECK_THROWS_AS(residual(Trajectory{{0.0}, {Potential()}}, 0.0), InvalidInput);
}

TEST_CASE("input validation") {
  IntegratorConfig cfg;
  cfg.grid_size = 48;
  CHECK_THROWS_AS(integrate(data(6, 3, 0.1), cfg), InvalidInput);
  cfg.grid_size = 16;
  CHECK_THROWS_AS(integrate(data(6, 8, 0.1), cfg), AliasingError);
  Potential c = Potential(2, 0.0, false).with_coefficient(1, 0.1);
  CHECK_THROWS_AS(integrate(c, IntegratorConfig{}), InvalidInput);
}
