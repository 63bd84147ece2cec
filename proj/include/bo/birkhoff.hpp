#pragma once

#include <functional>
#include <vector>

#include "bo/hardy.hpp"
#include "bo/lax.hpp"

namespace bo {

// Two-sided Birkhoff coordinates (zeta_{-n}, zeta_n), n = 1..N_b.
struct BirkhoffState {
  double s = 0.0;
  bool real = true;
  std::vector<cplx> plus;   // zeta_n at index n-1
  std::vector<cplx> minus;  // zeta_{-n} at index n-1

  static BirkhoffState zero(int modes, double s);
  int modes() const { return static_cast<int>(plus.size()); }
  cplx at(int n) const;  // two-sided access, 0 outside the stored range
  SeqState to_seq() const;
};

// Weighted l^2 norm with <n>^{2 beta}; the natural space is beta = 1/2 + s.
double sobolev_norm(const BirkhoffState& z, double beta);

struct TransformOptions {
  int lax_dim = 64;          // M
  int k_use = -1;            // -1: M/2
  int modes = 0;             // N_b; 0 means the potential's cutoff
  double tol_simple = 1e-8;
  double shift_warn = 1e-10;
  double chain_tol = 1e-6;   // tolerance of the real-path cross assertion
};

struct ScalingConstants {
  std::vector<cplx> kappa;  // kappa_0..kappa_K
  std::vector<cplx> mu;     // mu_0 (= 1, unused), mu_1..mu_K
  double kappa_tail = 0.0;  // |last retained factor - 1|
  double mu_tail = 0.0;
};

ScalingConstants scaling_constants(const SpectralData& sd);

struct ScalingData {
  ScalingConstants constants;
  // Index n = 0..n_max; entry 0 of alpha..nu is unused (set to the u=0 value).
  std::vector<cplx> alpha, beta, delta, nu, a;
  cplx a0{1.0, 0.0};
};

struct EigenChain {
  std::vector<HardyVector> f;  // f_0..f_{n_max}
  ScalingData data;
  double chain_drift = 0.0;  // max_n ||f_n - a_n h_n||
  double norm_drift = 0.0;   // max_n | ||f_n|| - 1 | (meaningful for real u)
};

EigenChain eigen_chain(const SpectralData& sd, int n_max, double shift_warn = 1e-10);

// Psi_n = <1, h_n> = h_n(0), n = 1..n_max; weight beta = 1 + s.
SeqState pre_birkhoff(const SpectralData& sd, int n_max, double s = 0.0);

// Order-m Taylor term of Psi_n (m >= 1), from the explicit residue multi-sums.
cplx psi_series_term(const Potential& u, int n, int order);

struct SeriesReport {
  double max_deviation = 0.0;        // max_n |Psi_n - sum_{m<=d_max} Psi_n^{(m)}|
  std::vector<double> order_norms;   // index m: max_n |Psi_n^{(m)}|
};

SeriesReport series_validate(const Potential& u, const SpectralData& sd, int d_max, int n_max);

struct TransformDiagnostics {
  double kappa_tail = 0.0;
  double mu_tail = 0.0;
  double norm_drift = 0.0;
  double chain_drift = 0.0;
};

struct TransformResult {
  BirkhoffState state;
  TransformDiagnostics diag;
};

TransformResult birkhoff_transform(const Potential& u, const TransformOptions& opts = {});
BirkhoffState birkhoff_forward(const Potential& u, const TransformOptions& opts = {});

// Linearization at zero: n -> -u_hat(n)/sqrt|n|.
BirkhoffState d0_phi(const Potential& u, int modes = 0);

// Actions I_n = |zeta_n|^2 (see README for the normalization).
std::vector<double> actions(const BirkhoffState& z);
double hamiltonian_from_actions(const std::vector<double>& I);
double hamiltonian_birkhoff(const BirkhoffState& z);
// 1/2 sum |n||u_hat(n)|^2 - (1/3) mean(u^3)
double hamiltonian_phys(const Potential& u);

using Functional = std::function<cplx(const Potential&)>;

struct BracketResult {
  cplx value;
  double truncation_estimate = 0.0;  // Richardson estimate of the difference error
  double roundoff_estimate = 0.0;
  bool roundoff_dominated = false;
};

// {F,G}(u) = sum_{0<|k|<=modes} i k dF/du_hat(-k) dG/du_hat(k), central differences.
BracketResult gardner_bracket(const Functional& F, const Functional& G, const Potential& u, double h = 1e-5,
                              int modes = 0);

struct CanonicalMatrices {
  Eigen::MatrixXcd plus_conj;  // {zeta_n, conj zeta_m}, n,m = 1..n_max
  Eigen::MatrixXcd plus_plus;  // {zeta_n, zeta_m}
};

// Bulk evaluation of the canonical brackets from one finite-difference
// Jacobian of all Birkhoff components; conj zeta_m is extended analytically
// as the minus component zeta_{-m}. Differentiation directions run over
// 0 < |k| <= dir_modes (0: twice the larger of the cutoff and n_max).
CanonicalMatrices canonical_relations(const Potential& u, int n_max, const TransformOptions& opts, double h = 1e-5,
                                      int dir_modes = 0);

}  // namespace bo
