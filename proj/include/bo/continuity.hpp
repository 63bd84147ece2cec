#pragma once

#include <utility>
#include <vector>

#include "bo/flow.hpp"

namespace bo {

struct ContinuityConfig {
  double s = -0.4;             // in (-1/2, 0)
  double t = 1.0;              // nonzero
  long k = 1;                  // frequency scale
  std::vector<cplx> base;      // zeta^(0)_n, n = 1..N
  long max_m = 1000000;        // probe search cap
  double delta = -1.0;         // < 0: delta(t) = (pi k^s / (2|t|))^{1/2}
  std::size_t max_probes = 0;  // 0: all admissible probes
};

double default_delta(const ContinuityConfig& cfg);

// Base state with n_base modes zeta_n = amplitude / n.
std::vector<cplx> default_base(int n_base, double amplitude = 0.05);

// (zeta^(m,delta), xi^(m,delta)); asserts the closed-form distances.
std::pair<SparseState, SparseState> build_pair(const ContinuityConfig& cfg, long m);

// Admissible probes m = k n, n > N, dist((k/m)^s, odd) < 1/2; for each odd
// target the probe closest to it is kept.
std::vector<long> admissible_probes(const ContinuityConfig& cfg);

struct ProbeRow {
  long m = 0;
  double delta = 0.0;
  double d0 = 0.0;              // ||zeta - xi||
  double dt = 0.0;              // ||S^t zeta - S^t xi||
  double ratio = 0.0;
  double omega_gap_pred = 0.0;  // 2 delta^2 m^{-s}
  double omega_gap_meas = 0.0;  // |omega_m(zeta) - omega_m(xi)|
  double lower_bound = 0.0;     // (sqrt(1 + m^s) - m^{s/2}) delta
  bool phase_bound_ok = false;  // |e^{i t gap} - 1| > 1
  bool lower_bound_ok = false;
};

struct SweepTable {
  double delta = 0.0;
  std::vector<ProbeRow> rows;
  double slope = 0.0;  // least-squares slope of log(ratio) against log(m)
};

SweepTable sweep(const ContinuityConfig& cfg);

double loglog_slope(const std::vector<ProbeRow>& rows);

}  // namespace bo
