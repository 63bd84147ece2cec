#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "bo/hardy.hpp"

namespace bo {

using Rational = mpq_class;

// (1/2 pi i) \oint_{|mu|=1/3} mu^{-(1+extra)} prod_j (l_j - mu)^{-1} d mu.
// Zero entries contribute -mu^{-1}; the result is (-1)^{#zeros} times the
// coefficient of mu^{p-1} in prod_{l_j != 0} (l_j - mu)^{-1}, p = 1 + extra + #zeros.
template <class T>
T residue_A(const std::vector<int>& l, int extra = 0) {
  int zeros = 0;
  for (int x : l) zeros += (x == 0);
  const int p = 1 + extra + zeros;
  const int deg = p - 1;  // wanted Taylor coefficient
  std::vector<T> series(static_cast<std::size_t>(deg + 1), T(0));
  series[0] = T(1);
  for (int x : l) {
    if (x == 0) continue;
    // (x - mu)^{-1} = sum_k mu^k / x^{k+1}
    std::vector<T> fac(static_cast<std::size_t>(deg + 1));
    T inv = T(1) / T(x);
    T pw = inv;
    for (int k = 0; k <= deg; ++k) {
      fac[static_cast<std::size_t>(k)] = pw;
      pw *= inv;
    }
    std::vector<T> next(static_cast<std::size_t>(deg + 1), T(0));
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; i + j <= deg; ++j)
        next[static_cast<std::size_t>(i + j)] += series[static_cast<std::size_t>(i)] * fac[static_cast<std::size_t>(j)];
    series.swap(next);
  }
  T out = series[static_cast<std::size_t>(deg)];
  return (zeros % 2) ? T(-out) : out;
}

inline Rational residue_A_exact(const std::vector<int>& l, int extra = 0) {
  Rational r = residue_A<Rational>(l, extra);
  r.canonicalize();
  return r;
}

// D(l) = sum_{m=1}^d A(l_1..l_m) A(l_m..l_d) - A(l; extra = 1)
template <class T>
T vanishing_D_t(const std::vector<int>& l) {
  T acc(0);
  const std::size_t d = l.size();
  for (std::size_t m = 1; m <= d; ++m) {
    std::vector<int> left(l.begin(), l.begin() + static_cast<long>(m));
    std::vector<int> right(l.begin() + static_cast<long>(m - 1), l.end());
    acc += residue_A<T>(left) * residue_A<T>(right);
  }
  T tail = residue_A<T>(l, 1);
  return T(acc - tail);
}

Rational vanishing_D(const std::vector<int>& l);

struct PartitionInstance {
  int d = 0;
  std::vector<int> J;  // sorted, 1-based
  std::vector<int> K;  // sorted, 1-based, nonempty
  std::vector<int> q;  // q[i] belongs to K[i]; sum = |J| + 1
};

struct CombiResult {
  int j_ad = 0;
  int k_ad = 0;
  bool ok = false;
};

CombiResult combi_check(const PartitionInstance& p);

struct SweepRow {
  std::string kind;  // "exhaustive", "random", "combi"
  int d = 0;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<std::vector<int>> counterexamples;  // first few failing tuples
  std::uint64_t total_checked() const;
  std::uint64_t total_failures() const;
};

// Every tuple with 1 <= d <= max_d and |l_j| <= l_bound.
SweepReport vanishing_sweep_exhaustive(int max_d, int l_bound);
// count tuples with d uniform in [1, max_d], entries uniform in [-l_bound, l_bound].
SweepReport vanishing_sweep_random(std::uint64_t count, int max_d, int l_bound, std::uint64_t seed);
// Every (J, K, q) with 1 <= d <= max_d.
SweepReport combi_sweep(int max_d);

struct DeltaSeries {
  cplx value;
  double tail = 0.0;  // (C ||u||_s)^{d_max + 1}
  bool converged = false;
};

// Truncated remainder series for delta_n, orders d = 2..d_max.
DeltaSeries delta_series(const Potential& u, int n, int d_max, double tail_constant = 1.0, double tol = 1e-6);

// Same sum with exact rational residue weights (path products still complex double).
cplx delta_series_exact_weights(const Potential& u, int n, int d_max);

}  // namespace bo
