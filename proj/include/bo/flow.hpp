#pragma once

#include <map>
#include <vector>

#include "bo/birkhoff.hpp"

namespace bo {

struct Frequencies {
  std::vector<cplx> plus;   // omega_n, n = 1..N_b
  std::vector<cplx> minus;  // omega_{-n}
  std::vector<cplx> Omega;  // Omega_n = omega_n - n^2
};

// omega_n = n^2 + Omega_n,
// Omega_n = -2 sum_{k<=n} k zeta_{-k} zeta_k - 2 n sum_{k>n} zeta_{-k} zeta_k,
// omega_{-n} = -n^2 - Omega_n.
Frequencies frequencies(const BirkhoffState& z);

// zeta_n(t) = zeta_n e^{i sign(n) n^2 t} e^{i t Omega_{sign(n)|n|}}
BirkhoffState evolve(const BirkhoffState& z, double t);

// Real-subspace state stored sparsely over positive indices; used for probes
// at very high frequency where dense storage would be wasteful.
struct SparseState {
  double s = 0.0;
  std::map<long, cplx> plus;  // zeta_n, n >= 1; zeta_{-n} = conj(zeta_n)
};

double sobolev_norm_plus(const SparseState& z, double beta);
double distance_plus(const SparseState& a, const SparseState& b, double beta);
// Omega_n for a real sparse state (omega_n - n^2).
double Omega(const SparseState& z, long n);
// Omega_n(a) - Omega_n(b) from modewise action differences (no cancellation
// against the common part of the two states).
double Omega_difference(const SparseState& a, const SparseState& b, long n);
SparseState evolve(const SparseState& z, double t);

struct NewtonOptions {
  int max_iter = 30;
  double tol = 1e-13;      // absolute residual target on the plus coordinates
  double fd_step = 1e-6;   // scaled by max(1, |x_j|)
};

struct FlowConfig {
  std::vector<double> t_grid;
  NewtonOptions newton;
  TransformOptions lax;
  int potential_modes = 0;  // unknown modes of the inverse; 0: the state's N_b
  bool warm_start = false;
};

struct InversionResult {
  Potential u;
  std::vector<double> residuals;
  int iterations = 0;
};

// Newton solve of Phi(u) = target on real potentials with modes 1..N_b.
InversionResult invert(const BirkhoffState& target, const FlowConfig& cfg, const Potential* initial = nullptr);

struct TrajectorySample {
  double t = 0.0;
  Potential u;
  double residual = 0.0;      // final Newton residual
  double action_drift = 0.0;  // max_n |I_n(Phi(u(t))) - I_n(Phi(u0))|
  double increment = 0.0;     // ||u(t) - u(previous t)||_s
};

// Phi^{-1} o S_B^t o Phi per sample time.
std::vector<TrajectorySample> solve_trajectory(const Potential& u0, const FlowConfig& cfg);

}  // namespace bo
