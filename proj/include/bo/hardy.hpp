#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bo {

using cplx = std::complex<double>;

// Truncated mean-zero Fourier series u = sum_{0<|n|<=N} u_hat(n) e^{inx}.
// Immutable; modifiers return new values.
class Potential {
 public:
  Potential() : Potential(1, 0.0, true) {}
  // Zero potential.
  Potential(int N, double s, bool real);
  // Two-sided coefficients indexed n+N for n in [-N, N]; entry n=0 must vanish.
  Potential(int N, double s, bool real, std::vector<cplx> two_sided);
  // Real potential from u_hat(1..N); negative modes are the conjugate reflection.
  static Potential real_from_positive(double s, const std::vector<cplx>& positive);

  int cutoff() const { return N_; }
  double s() const { return s_; }
  bool is_real() const { return real_; }
  cplx operator[](int n) const {
    return (n < -N_ || n > N_) ? cplx{} : c_[static_cast<std::size_t>(n + N_)];
  }
  const std::vector<cplx>& two_sided() const { return c_; }

  // Sets a single coefficient; the result is flagged complex.
  Potential with_coefficient(int n, cplx value) const;
  // Sets u_hat(n) and u_hat(-n) = conj(value); keeps the real flag.
  Potential with_real_mode(int n, cplx value) const;
  // Same coefficients on a different cutoff (higher modes dropped).
  Potential resized(int N) const;
  Potential with_s(double s) const;
  Potential scaled(double factor) const;
  bool is_zero() const;

 private:
  int N_;
  double s_;
  bool real_;
  std::vector<cplx> c_;
};

Potential operator+(const Potential& a, const Potential& b);
Potential operator-(const Potential& a, const Potential& b);

// Coefficients f_hat(0..M) of an element of the truncated Hardy space.
class HardyVector {
 public:
  explicit HardyVector(int dim = 1);
  explicit HardyVector(Eigen::VectorXcd c);
  static HardyVector basis(int dim, int n);

  int dim() const { return static_cast<int>(c_.size()); }
  cplx operator[](int n) const { return (n < 0 || n >= dim()) ? cplx{} : c_(n); }
  const Eigen::VectorXcd& coeffs() const { return c_; }

 private:
  Eigen::VectorXcd c_;
};

// Finitely supported sequence over nonzero integers with weight exponent beta.
struct SeqState {
  double beta = 0.0;
  std::vector<std::pair<int, cplx>> entries;
};

inline double bracket_weight(long n) { return n == 0 ? 1.0 : static_cast<double>(n < 0 ? -n : n); }

double sobolev_norm(const Potential& u, double beta);
double sobolev_norm(const HardyVector& f, double beta);
double sobolev_norm(const SeqState& z, double beta);

enum class PairKind { sesquilinear, bilinear };
cplx pair(const HardyVector& f, const HardyVector& g, PairKind kind);

// (Sf)(n+1) = f(n); the top coefficient is dropped and, when it exceeds
// warn_threshold relative to max|f|, a warning is emitted.
HardyVector shift(const HardyVector& f, double warn_threshold = 1e-10, double* dropped = nullptr);

enum class HardySign { plus, minus };
HardyVector project_hardy(const Potential& u, HardySign sign, int M);

enum class Involution { star, conj };
Potential involute(const Potential& u, Involution kind);

// Grid bridge: samples u(x_j), x_j = 2 pi j / G.
std::vector<cplx> synthesize(const Potential& u, int grid);
// Inverse of synthesize for a band of cutoff N; mean must vanish.
Potential analyze(const std::vector<cplx>& samples, int N, double s, bool real);
// Raw coefficients c(n), n in [-N, N] (index n+N), zero mode included.
std::vector<cplx> fourier_coefficients(const std::vector<cplx>& samples, int N);

// Seeded random real potential with power-law decaying modes, rescaled so
// that sobolev_norm(u, norm_beta) == norm.
Potential random_real_potential(std::mt19937_64& rng, int N, double s, double norm, double norm_beta);

}  // namespace bo
