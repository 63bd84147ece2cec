#include "bo/direct_pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bo/errors.hpp"
#include "fft.hpp"

namespace bo {

namespace {

bool power_of_two(int n) { return n >= 4 && (n & (n - 1)) == 0; }

// Mode vector indexed n + K, n in [-K, K].
using Modes = std::vector<cplx>;

class Stepper {
 public:
  Stepper(int grid, int K, bool linear_only) : G_(grid), K_(K), linear_only_(linear_only), fft_(grid) {}

  // -i n (u^2)^(n), truncated to the kept band
  Modes nonlinear(const Modes& u) const {
    Modes out(u.size());
    if (linear_only_) return out;
    std::vector<cplx> spec(static_cast<std::size_t>(G_)), phys, back;
    for (int n = -K_; n <= K_; ++n) spec[static_cast<std::size_t>((n + G_) % G_)] = u[static_cast<std::size_t>(n + K_)];
    fft_.backward(spec, phys);
    for (auto& v : phys) v = v * v;
    fft_.forward(phys, back);
    for (int n = -K_; n <= K_; ++n)
      out[static_cast<std::size_t>(n + K_)] = cplx(0.0, -double(n)) * back[static_cast<std::size_t>((n + G_) % G_)] / double(G_);
    return out;
  }

  // Lawson integrating-factor RK4 step of size h
  void step(Modes& u, double h) const {
    const std::size_t L = u.size();
    Modes E(L), E2(L);
    for (int n = -K_; n <= K_; ++n) {
      const double w = double(n) * std::abs(n);
      E[static_cast<std::size_t>(n + K_)] = std::polar(1.0, w * h / 2);
      E2[static_cast<std::size_t>(n + K_)] = std::polar(1.0, w * h);
    }
    Modes tmp(L);
    const Modes k1 = nonlinear(u);
    for (std::size_t i = 0; i < L; ++i) tmp[i] = E[i] * (u[i] + 0.5 * h * k1[i]);
    const Modes k2 = nonlinear(tmp);
    for (std::size_t i = 0; i < L; ++i) tmp[i] = E[i] * u[i] + 0.5 * h * k2[i];
    const Modes k3 = nonlinear(tmp);
    for (std::size_t i = 0; i < L; ++i) tmp[i] = E2[i] * u[i] + h * E[i] * k3[i];
    const Modes k4 = nonlinear(tmp);
    for (std::size_t i = 0; i < L; ++i)
      u[i] = E2[i] * u[i] + (h / 6.0) * (E2[i] * k1[i] + 2.0 * E[i] * (k2[i] + k3[i]) + k4[i]);
  }

 private:
  int G_, K_;
  bool linear_only_;
  detail::Fft fft_;
};

}  // namespace

Trajectory integrate(const Potential& u0, const IntegratorConfig& cfg) {
  if (!u0.is_real()) throw InvalidInput("the direct integrator takes real potentials");
  if (!power_of_two(cfg.grid_size)) throw InvalidInput("grid size must be a power of two >= 4");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.T)) throw InvalidInput("dt must be positive and T finite");
  const int G = cfg.grid_size;
  const int K = cfg.dealias ? static_cast<int>(std::floor(cfg.dealias_fraction * G / 2.0)) : G / 2 - 1;
  if (K < 1) throw InvalidInput("dealiased band is empty");
  if (u0.cutoff() > K)
    throw AliasingError("initial data has modes up to " + std::to_string(u0.cutoff()) + " but the grid keeps " +
                        std::to_string(K));
  if (cfg.dealias && G < 4 * u0.cutoff()) warn("grid_size below 4N; the kept band is tight for these data");

  std::vector<double> times = cfg.sample_times;
  if (times.empty()) times = {0.0, cfg.T};
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
    throw InvalidInput("sample times must be sorted and nonnegative");

  Modes u(static_cast<std::size_t>(2 * K + 1));
  for (int n = -K; n <= K; ++n) u[static_cast<std::size_t>(n + K)] = u0[n];
  const Stepper st(G, K, cfg.linear_only);

  const double max_phase = double(K) * K * cfg.dt;
  if (max_phase > 50.0) warn("dt * K^2 is large; the integrating factor handles it but accuracy may suffer");

  Trajectory tr;
  double now = 0.0;
  for (double target : times) {
    const double span = target - now;
    if (span > 0) {
      const long steps = std::max(1L, static_cast<long>(std::ceil(span / cfg.dt - 1e-9)));
      const double h = span / double(steps);
      for (long i = 0; i < steps; ++i) st.step(u, h);
      now = target;
    }
    for (const auto& v : u)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalFailure("direct integration produced NaN");
    std::vector<cplx> c(u);
    c[static_cast<std::size_t>(K)] = 0.0;  // the mean stays zero; clear round-off
    for (int n = 1; n <= K; ++n) c[static_cast<std::size_t>(K - n)] = std::conj(c[static_cast<std::size_t>(K + n)]);
    tr.t.push_back(target);
    tr.u.emplace_back(K, u0.s(), true, std::move(c));
  }
  return tr;
}

double isospectral_audit(const Trajectory& traj, int M, int k_max) {
  if (traj.u.empty()) return 0.0;
  const SpectralData s0 = spectrum(traj.u.front(), M);
  double drift = 0.0;
  for (std::size_t i = 1; i < traj.u.size(); ++i) {
    const SpectralData si = spectrum(traj.u[i], M);
    for (int n = 0; n <= std::min(k_max, si.k_use()); ++n) drift = std::max(drift, std::abs(si.lambda(n) - s0.lambda(n)));
  }
  return drift;
}

Potential bo_rhs(const Potential& u, int N) {
  int G = 4;
  while (G < 3 * std::max(N, u.cutoff()) + 1) G *= 2;
  const auto x = synthesize(u, G);
  std::vector<cplx> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
  const auto c2 = fourier_coefficients(sq, N);
  std::vector<cplx> out(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n)
    if (n != 0) out[static_cast<std::size_t>(n + N)] = cplx(0.0, double(n)) * (double(std::abs(n)) * u[n] - c2[static_cast<std::size_t>(n + N)]);
  return Potential(N, u.s(), u.is_real(), std::move(out));
}

ResidualReport residual(const Trajectory& traj, double s) {
  if (traj.u.size() < 3) throw InvalidInput("residual needs at least three samples");
  ResidualReport rep;
  for (std::size_t i = 1; i + 1 < traj.u.size(); ++i) {
    const double dt = traj.t[i + 1] - traj.t[i - 1];
    const Potential ddt = (traj.u[i + 1] - traj.u[i - 1]).scaled(1.0 / dt);
    const int N = std::max(ddt.cutoff(), 2 * traj.u[i].cutoff());
    const Potential r = ddt.resized(N) - bo_rhs(traj.u[i], N);
    const double v = sobolev_norm(r, s - 2.0);
    rep.t.push_back(traj.t[i]);
    rep.values.push_back(v);
    rep.max = std::max(rep.max, v);
  }
  return rep;
}

}  // namespace bo
