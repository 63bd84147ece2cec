#include <doctest.h>

#include <cmath>
#include <random>

#include "bo/birkhoff.hpp"
#include "bo/errors.hpp"
#include "bo/residue.hpp"

using namespace bo;

namespace {

Potential small_real(std::uint64_t seed, int N, double norm, double beta = 0.0) {
  std::mt19937_64 rng(seed);
  return random_real_potential(rng, N, 0.0, norm, beta);
}

}  // namespace

TEST_CASE("closed forms at u = 0") {
  const SpectralData sd = spectrum(Potential(4, 0.0, true), 64);
  const ScalingConstants sc = scaling_constants(sd);
  CHECK(std::abs(sc.kappa[0] - 1.0) < 1e-12);
  for (int n = 1; n <= sd.k_use(); ++n) {
    CHECK(std::abs(double(n) * sc.kappa[n] - 1.0) < 1e-12);
    CHECK(std::abs(sc.mu[n] - 1.0) < 1e-12);
  }
  const EigenChain ch = eigen_chain(sd, 20);
  for (int n = 0; n <= 20; ++n) {
    CHECK((ch.f[n].coeffs() - HardyVector::basis(65, n).coeffs()).norm() < 1e-12);
    CHECK(std::abs(ch.data.a[n] - 1.0) < 1e-12);
    CHECK(std::abs(ch.data.delta[n]) < 1e-12);
  }
  const BirkhoffState z = birkhoff_forward(Potential(4, 0.0, true));
  CHECK(sobolev_norm(z, 0.5) == 0.0);
  for (const auto& [n, v] : pre_birkhoff(sd, 10).entries) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("kappa_0 from the perturbative oracle; positivity for real u") {
  const Potential u = Potential(1, 0.0, true).with_real_mode(1, 0.1);
  const ScalingConstants sc = scaling_constants(spectrum(u, 64));
  CHECK(std::abs(sc.kappa[0] - (1.0 - 0.01 / 1.01)) < 1e-3);
  const Potential r = small_real(3, 6, 0.05);
  const ScalingConstants sr = scaling_constants(spectrum(r, 64));
  for (std::size_t n = 0; n < sr.kappa.size(); ++n) {
    CHECK(sr.kappa[n].real() > 0);
    CHECK(std::abs(sr.kappa[n].imag()) < 1e-14);
    CHECK(sr.mu[n].real() > 0);
  }
  CHECK(sr.kappa_tail < 1e-12);
}

TEST_CASE("emergent normalizations of the chain for real u") {
  const Potential u = small_real(4, 5, 0.05, 0.5);
  const SpectralData sd = spectrum(u, 64);
  const EigenChain ch = eigen_chain(sd, 16);
  CHECK(ch.norm_drift < 1e-8);
  CHECK(ch.chain_drift < 1e-12);
  // <1|f_0> > 0 and <e^{ix} f_{n-1} | f_n> > 0
  const cplx c0 = pair(HardyVector::basis(65, 0), ch.f[0], PairKind::sesquilinear);
  CHECK(c0.real() > 0);
  CHECK(std::abs(c0.imag()) < 1e-14);
  for (int n = 1; n <= 16; ++n) {
    const cplx c = pair(shift(ch.f[n - 1]), ch.f[n], PairKind::sesquilinear);
    CHECK(c.real() > 0);
    CHECK(std::abs(c.imag()) < 1e-12);
  }
}

TEST_CASE("admissibility errors") {
  TransformOptions four;
  four.modes = 4;
  // |alpha_2| < 1/2
  CHECK_THROWS_AS(birkhoff_forward(Potential(1, 0.0, true).with_real_mode(1, 0.6), four), OutOfNeighborhood);
  // |mu_1 - 1| > 1/2
  CHECK_THROWS_AS(birkhoff_forward(Potential(1, 0.0, true).with_real_mode(1, 2.0), four), OutOfNeighborhood);
  CHECK_NOTHROW(birkhoff_forward(Potential(1, 0.0, true).with_real_mode(1, 0.3), four));
  CHECK_THROWS_AS(birkhoff_forward(small_real(1, 4, 0.01), TransformOptions{16, -1, 12}), InvalidInput);
}

TEST_CASE("pre-Birkhoff map and its Taylor series") {
  const Potential u = Potential(3, 0.0, false).with_coefficient(-3, 0.2);
  CHECK(std::abs(psi_series_term(u, 3, 1) - (-0.2 / 3)) < 1e-15);

  const Potential v = small_real(5, 4, 0.01);
  const SpectralData sd = spectrum(v, 64);
  double prev = 1.0;
  for (int d = 1; d <= 4; ++d) {
    const SeriesReport r = series_validate(v, sd, d, 8);
    CHECK(r.max_deviation < prev * 0.2);  // each order gains about a factor |u|
    prev = r.max_deviation;
  }
  CHECK(prev < 1e-9);

  // first-order convergence of Psi(eps v)/eps
  const Potential w = small_real(6, 3, 1.0);
  double errs[3];
  for (int i = 0; i < 3; ++i) {
    const double eps = 1e-3 / std::pow(2.0, i);
    const SeqState psi = pre_birkhoff(spectrum(w.scaled(eps), 64), 3);
    double e = 0;
    for (const auto& [n, val] : psi.entries) e = std::max(e, std::abs(val / eps - (-w[-n] / double(n))));
    errs[i] = e;
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(2.0).epsilon(0.05));
  CHECK(errs[1] / errs[2] == doctest::Approx(2.0).epsilon(0.05));

  const Potential big = Potential(1, 0.0, true).with_real_mode(1, 2.0);
  CHECK_THROWS_AS(series_validate(big, spectrum(big, 64), 6, 4), DivergenceError);
}

TEST_CASE("Birkhoff map: symmetry, linearization, analytic extension") {
  const Potential u = small_real(7, 4, 0.02);
  const BirkhoffState z = birkhoff_forward(u);
  CHECK(z.real);
  for (int n = 1; n <= 4; ++n) CHECK(z.at(-n) == std::conj(z.at(n)));

  const double eps = 1e-4;
  const Potential e = Potential(1, 0.0, true).with_real_mode(1, eps);
  const BirkhoffState ze = birkhoff_forward(e);
  CHECK(std::abs(ze.at(1) + eps) < 10 * eps * eps);

  const BirkhoffState d = d0_phi(Potential(2, 0.0, true).with_real_mode(2, 0.1));
  CHECK(std::abs(d.at(2) - (-0.1 / std::sqrt(2.0))) < 1e-15);
  CHECK(sobolev_norm(d0_phi(Potential(3, 0.0, true)), 0.5) == 0.0);

  // complex u: the two pipelines agree with the real path when u is real but flagged complex
  const Potential uc(u.cutoff(), u.s(), false, u.two_sided());
  const BirkhoffState zc = birkhoff_forward(uc);
  for (int n = 1; n <= 4; ++n) {
    CHECK(std::abs(zc.at(n) - z.at(n)) < 1e-12);
    CHECK(std::abs(zc.at(-n) - z.at(-n)) < 1e-12);
  }
  // and off the real subspace, conj Phi_n(conj u) is the minus side of the mirrored input
  const Potential w = uc.with_coefficient(2, uc[2] + cplx(0.003, -0.001));
  const BirkhoffState zw = birkhoff_forward(w), zwc = birkhoff_forward(involute(w, Involution::conj));
  for (int n = 1; n <= 4; ++n) CHECK(std::abs(zw.at(n) - std::conj(zwc.at(-n))) < 1e-13);
  // first order in the complex direction
  const BirkhoffState lin = d0_phi(w);
  for (int n = -4; n <= 4; ++n)
    if (n) CHECK(std::abs(zw.at(n) - lin.at(n)) < 1e-3);
}

TEST_CASE("Jacobian at zero converges at second order") {
  const Potential v = small_real(8, 4, 1.0);
  double prev = 0;
  for (int i = 0; i < 6; ++i) {
    const double eps = 1e-2 / std::pow(2.0, i);
    const BirkhoffState zp = birkhoff_forward(v.scaled(eps)), zm = birkhoff_forward(v.scaled(-eps));
    const BirkhoffState lin = d0_phi(v);
    double e = 0;
    for (int n = -4; n <= 4; ++n)
      if (n) e = std::max(e, std::abs((zp.at(n) - zm.at(n)) / (2 * eps) - lin.at(n)));
    if (i) CHECK(std::log2(prev / e) > 1.9);
    prev = e;
  }
  CHECK(prev < 1e-7);
}

TEST_CASE("Hamiltonian in actions") {
  CHECK(hamiltonian_from_actions({0.125}) == doctest::Approx(0.109375));
  CHECK(hamiltonian_birkhoff(BirkhoffState::zero(4, 0.0)) == 0.0);
  // two actions by hand: 1*I1 + 4*I2 - (I1+I2)^2 - I2^2
  CHECK(hamiltonian_from_actions({0.1, 0.2}) == doctest::Approx(0.1 + 0.8 - 0.09 - 0.04));
  const Potential u = small_real(9, 5, 0.02, 0.5);
  TransformOptions o;
  o.modes = 20;
  CHECK(std::abs(hamiltonian_phys(u) - hamiltonian_birkhoff(birkhoff_forward(u, o))) < 1e-10);
  // cubic term by hand: u = 2a cos x + 2b cos 2x has mean(u^3) = 6 a^2 b
  const Potential c = Potential(2, 0.0, true).with_real_mode(1, 0.1).with_real_mode(2, 0.2);
  const double quad = 0.5 * (2 * 0.01 + 2 * 2 * 0.04);
  CHECK(hamiltonian_phys(c) == doctest::Approx(quad - 6 * 0.01 * 0.2 / 3).epsilon(1e-14));
}

TEST_CASE("Gardner bracket") {
  const Potential u = small_real(10, 3, 0.01);
  const Functional F = [](const Potential& p) { return p[1]; };
  const Functional G = [](const Potential& p) { return p[-1]; };
  const BracketResult r = gardner_bracket(F, G, u);
  CHECK(std::abs(r.value - cplx(0, -1)) < 1e-12);
  const Functional H = [](const Potential& p) { return p[1] * p[2] + p[-3] * p[-3]; };
  CHECK(std::abs(gardner_bracket(H, H, u).value) < 1e-10);

  TransformOptions o;
  o.modes = 1;
  const Functional z1 = [&](const Potential& p) { return birkhoff_forward(p, o).at(1); };
  const Functional z1c = [&](const Potential& p) { return birkhoff_forward(p, o).at(-1); };
  const BracketResult c = gardner_bracket(z1, z1c, u, 1e-5, 6);
  CHECK(std::abs(c.value - cplx(0, -1)) < 1e-4);

  int warnings = 0;
  auto old = set_warning_sink([&](const std::string&) { ++warnings; });
  const BracketResult tiny = gardner_bracket(z1, z1c, u, 1e-13, 3);
  set_warning_sink(old);
  CHECK(tiny.roundoff_dominated);
  CHECK(warnings == 1);
}

TEST_CASE("canonical relations, bulk") {
  const Potential u = small_real(11, 3, 0.01);
  const CanonicalMatrices cm = canonical_relations(u, 3, TransformOptions{}, 1e-5);
  for (int n = 0; n < 3; ++n)
    for (int m = 0; m < 3; ++m) {
      CHECK(std::abs(cm.plus_conj(n, m) - (n == m ? cplx(0, -1) : cplx{})) < 1e-4);
      CHECK(std::abs(cm.plus_plus(n, m)) < 1e-4);
    }
}

TEST_CASE("spectral delta against the remainder series") {
  const Potential u = small_real(12, 4, 0.01, 0.0);
  const SpectralData sd = spectrum(u, 64);
  const EigenChain ch = eigen_chain(sd, 8);
  for (int n = 1; n <= 8; ++n) {
    const DeltaSeries ds = delta_series(u, n, 3);
    CHECK(std::abs(ch.data.delta[n] - ds.value) < 1e-6);
    CHECK(std::abs(ch.data.delta[n] - delta_series(u, n, 4).value) <= std::abs(ch.data.delta[n] - ds.value) + 1e-15);
  }
}
