#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bo/hardy.hpp"

namespace bo {

// (L)_{jk} = j delta_{jk} - u_hat(j-k), j,k = 0..M.
struct LaxMatrix {
  int M = 0;
  bool hermitian = false;
  Eigen::MatrixXcd entries;
};

LaxMatrix assemble_lax(const Potential& u, int M);

struct SpectralOptions {
  double tol_simple = 1e-8;  // minimal separation of consecutive Re(lambda)
  int k_use = -1;            // trusted index cutoff; -1 means M/2
  double tol_real = 1e-10;   // reality / gap-sign tolerance for real potentials
};

// Sorted eigen decomposition with biorthonormal left/right vectors.
class SpectralData {
 public:
  SpectralData(Eigen::VectorXcd lambdas, Eigen::MatrixXcd right, Eigen::MatrixXcd left, int k_use, bool hermitian);

  int M() const { return static_cast<int>(lambdas_.size()) - 1; }
  int k_use() const { return k_use_; }
  bool hermitian() const { return hermitian_; }
  const Eigen::VectorXcd& lambdas() const { return lambdas_; }
  cplx lambda(int n) const { return lambdas_(n); }
  // gamma_n = lambda_n - lambda_{n-1} - 1, n >= 1
  cplx gap(int n) const { return lambdas_(n) - lambdas_(n - 1) - 1.0; }
  // Right eigenvectors v_n (columns) and left eigenvectors w_n (columns),
  // normalized so that w_n^H v_m = delta_nm.
  const Eigen::MatrixXcd& right_vectors() const { return right_; }
  const Eigen::MatrixXcd& left_vectors() const { return left_; }

  // P_n x = v_n (w_n^H x)
  HardyVector project(int n, const HardyVector& x) const;
  // h_n = P_n e_n
  HardyVector h(int n) const;

 private:
  Eigen::VectorXcd lambdas_;
  Eigen::MatrixXcd right_, left_;
  int k_use_;
  bool hermitian_;
};

SpectralData spectrum(const LaxMatrix& L, const SpectralOptions& opts = {});
SpectralData spectrum(const Potential& u, int M, const SpectralOptions& opts = {});

// gamma_1..gamma_{k_use}; real spectra with a gap below -tol_real raise PropertyViolation.
std::vector<cplx> gaps(const SpectralData& sd, double tol_real = 1e-10);

struct NeumannResult {
  HardyVector x;
  double last_increment = 0.0;
  int terms = 0;
};

// (D - lambda)^{-1} sum_{m <= m_max} [T_u (D - lambda)^{-1}]^m rhs on the
// Hardy space of dimension rhs.dim().
NeumannResult neumann_resolvent(const Potential& u, cplx lambda, const HardyVector& rhs, int m_max);

// -(1/2 pi i) \oint (L - lambda)^{-1} e_n over |lambda - n| = radius by the trapezoid rule.
HardyVector contour_projection(const LaxMatrix& L, int n, double radius = 1.0 / 3.0, int nodes = 64);

// max over n <= k_use of |P_n h_n - h_n|
double idempotence_defect(const SpectralData& sd);

struct SymmetryReport {
  double star_deviation = 0.0;     // L^- spectrum vs spectrum of L_{u_*}
  double transpose_deviation = 0.0;  // L^- matrix vs L_{u_*} matrix entries
  double conj_deviation = 0.0;     // conj(lambda_n(conj u)) vs lambda_n(u)
  double reality_deviation = 0.0;  // max |Im lambda_n| for real u (0 otherwise)
};

SymmetryReport symmetry_audit(const Potential& u, int M, const SpectralOptions& opts = {});

}  // namespace bo
