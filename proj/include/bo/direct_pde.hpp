#pragma once

#include <vector>

#include "bo/hardy.hpp"
#include "bo/lax.hpp"

namespace bo {

struct IntegratorConfig {
  int grid_size = 64;                    // power of two
  double dt = 1e-3;                      // upper bound; steps are shrunk to hit sample times
  double T = 1.0;
  double dealias_fraction = 2.0 / 3.0;   // kept band |n| <= fraction * grid/2
  bool dealias = true;                   // false keeps every mode below Nyquist (ablation)
  bool linear_only = false;              // drop the quadratic term
  std::vector<double> sample_times;      // empty: {0, T}
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Potential> u;
};

// Integrating-factor RK4 for d/dt u_hat(n) = i n|n| u_hat(n) - i n (u^2)^(n).
Trajectory integrate(const Potential& u0, const IntegratorConfig& cfg);

// max over samples and n <= k_max of |lambda_n(u(t)) - lambda_n(u(0))|.
double isospectral_audit(const Trajectory& traj, int M, int k_max);

struct ResidualReport {
  std::vector<double> t;       // interior sample times
  std::vector<double> values;  // H^{s-2} norms
  double max = 0.0;
};

// Central-difference d/dt u minus d/dx(|d/dx| u - u^2), in H^{s-2}.
ResidualReport residual(const Trajectory& traj, double s);

// Exact right-hand side in Fourier space on cutoff N (zero mode omitted).
Potential bo_rhs(const Potential& u, int N);

}  // namespace bo
