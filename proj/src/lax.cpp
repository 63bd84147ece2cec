#include "bo/lax.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bo/errors.hpp"

namespace bo {

LaxMatrix assemble_lax(const Potential& u, int M) {
  if (M < u.cutoff())
    throw InvalidInput("Lax truncation M=" + std::to_string(M) + " is below the potential cutoff N=" +
                       std::to_string(u.cutoff()));
  LaxMatrix L;
  L.M = M;
  L.hermitian = u.is_real();
  L.entries = Eigen::MatrixXcd::Zero(M + 1, M + 1);
  for (int j = 0; j <= M; ++j)
    for (int k = std::max(0, j - u.cutoff()); k <= std::min(M, j + u.cutoff()); ++k)
      L.entries(j, k) = (j == k ? cplx(j, 0.0) : cplx{}) - u[j - k];
  return L;
}

SpectralData::SpectralData(Eigen::VectorXcd lambdas, Eigen::MatrixXcd right, Eigen::MatrixXcd left, int k_use,
                           bool hermitian)
    : lambdas_(std::move(lambdas)), right_(std::move(right)), left_(std::move(left)), k_use_(k_use),
      hermitian_(hermitian) {}

HardyVector SpectralData::project(int n, const HardyVector& x) const {
  const int d = M() + 1;
  Eigen::VectorXcd xx = Eigen::VectorXcd::Zero(d);
  const int m = std::min(d, x.dim());
  xx.head(m) = x.coeffs().head(m);
  const cplx c = left_.col(n).dot(xx);
  return HardyVector(Eigen::VectorXcd(right_.col(n) * c));
}

HardyVector SpectralData::h(int n) const {
  return HardyVector(Eigen::VectorXcd(right_.col(n) * std::conj(left_(n, n))));
}

namespace {

void check_simple(const Eigen::VectorXcd& lam, double tol) {
  for (Eigen::Index i = 1; i < lam.size(); ++i) {
    if (lam(i).real() - lam(i - 1).real() < tol) {
      std::ostringstream os;
      os << "eigenvalues " << i - 1 << " and " << i << " are not separated (Re difference "
         << lam(i).real() - lam(i - 1).real() << " < " << tol << ")";
      throw NumericalFailure(os.str());
    }
  }
}

int resolve_k_use(int k_use, int M) {
  if (k_use < 0) return M / 2;
  if (k_use > M) throw InvalidInput("k_use exceeds the truncation dimension");
  return k_use;
}

}  // namespace

SpectralData spectrum(const LaxMatrix& L, const SpectralOptions& opts) {
  const int d = L.M + 1;
  const int k_use = resolve_k_use(opts.k_use, L.M);
  if (L.hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L.entries);
    if (es.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver failed");
    Eigen::VectorXcd lam = es.eigenvalues().cast<cplx>();
    check_simple(lam, opts.tol_simple);
    Eigen::MatrixXcd V = es.eigenvectors();
    return SpectralData(std::move(lam), V, V, k_use, true);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(L.entries, true);
  if (es.info() != Eigen::Success) throw NumericalFailure("complex eigensolver failed");
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ev(a).real() < ev(b).real(); });
  Eigen::VectorXcd lam(d);
  Eigen::MatrixXcd V(d, d);
  for (int i = 0; i < d; ++i) {
    lam(i) = ev(order[static_cast<std::size_t>(i)]);
    V.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  check_simple(lam, opts.tol_simple);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
  Eigen::MatrixXcd Vinv = lu.inverse();
  if (!Vinv.allFinite()) throw NumericalFailure("eigenvector matrix is singular");
  return SpectralData(std::move(lam), std::move(V), Vinv.adjoint(), k_use, false);
}

SpectralData spectrum(const Potential& u, int M, const SpectralOptions& opts) {
  return spectrum(assemble_lax(u, M), opts);
}

std::vector<cplx> gaps(const SpectralData& sd, double tol_real) {
  std::vector<cplx> g;
  for (int n = 1; n <= sd.k_use(); ++n) {
    g.push_back(sd.gap(n));
    if (sd.hermitian() && g.back().real() < -tol_real) {
      std::ostringstream os;
      os << "negative gap gamma_" << n << " = " << g.back().real() << " for a real potential";
      throw PropertyViolation(os.str());
    }
  }
  return g;
}

NeumannResult neumann_resolvent(const Potential& u, cplx lambda, const HardyVector& rhs, int m_max) {
  const int d = rhs.dim();
  Eigen::VectorXcd inv(d);
  for (int j = 0; j < d; ++j) {
    const cplx den = double(j) - lambda;
    if (std::abs(den) < 1e-14) throw InvalidInput("lambda lies on the free spectrum");
    inv(j) = 1.0 / den;
  }
  // Toeplitz block of u on the truncated Hardy space
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) T(j, k) = u[j - k];

  Eigen::VectorXcd y = rhs.coeffs();
  Eigen::VectorXcd sum = y;
  double prev = -1.0;
  NeumannResult res{HardyVector(d), 0.0, 0};
  for (int m = 1; m <= m_max; ++m) {
    y = T * inv.cwiseProduct(y);
    const double inc = inv.cwiseProduct(y).norm();
    sum += y;
    res.terms = m;
    res.last_increment = inc;
    if (inc == 0.0) break;
    if (prev >= 0.0 && inc >= prev)
      throw DivergenceError("Neumann series increments stopped contracting at term " + std::to_string(m));
    prev = inc;
    if (inc <= 1e-18 * inv.cwiseProduct(sum).norm()) break;
  }
  res.x = HardyVector(Eigen::VectorXcd(inv.cwiseProduct(sum)));
  return res;
}

HardyVector contour_projection(const LaxMatrix& L, int n, double radius, int nodes) {
  const int d = L.M + 1;
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
  e(n) = 1.0;
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(d);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  for (int j = 0; j < nodes; ++j) {
    const cplx w = std::polar(1.0, 2.0 * M_PI * j / nodes);
    const cplx lam = double(n) + radius * w;
    Eigen::VectorXcd x = (L.entries - lam * I).partialPivLu().solve(e);
    acc += w * x;
  }
  // dlambda = i r w dtheta, so -(1/2 pi i) * sum(...) i r w (2 pi / nodes)
  return HardyVector(Eigen::VectorXcd(-(radius / nodes) * acc));
}

double idempotence_defect(const SpectralData& sd) {
  double worst = 0.0;
  for (int n = 0; n <= sd.k_use(); ++n) {
    HardyVector hn = sd.h(n);
    worst = std::max(worst, (sd.project(n, hn).coeffs() - hn.coeffs()).norm());
  }
  return worst;
}

SymmetryReport symmetry_audit(const Potential& u, int M, const SpectralOptions& opts) {
  SymmetryReport r;
  const LaxMatrix L = assemble_lax(u, M);
  const SpectralData base = spectrum(L, opts);

  // L^-: j delta_jk - u_hat(k-j), built from its own formula
  Eigen::MatrixXcd Lm = Eigen::MatrixXcd::Zero(M + 1, M + 1);
  for (int j = 0; j <= M; ++j)
    for (int k = 0; k <= M; ++k) Lm(j, k) = (j == k ? cplx(j, 0.0) : cplx{}) - u[k - j];
  const LaxMatrix Lstar = assemble_lax(involute(u, Involution::star), M);
  r.transpose_deviation = (Lm - Lstar.entries).cwiseAbs().maxCoeff();

  LaxMatrix minus{M, false, Lm};
  const SpectralData sm = spectrum(minus, opts);
  const SpectralData ss = spectrum(Lstar, opts);
  const SpectralData sc = spectrum(involute(u, Involution::conj), M, opts);
  for (int n = 0; n <= base.k_use(); ++n) {
    r.star_deviation = std::max({r.star_deviation, std::abs(sm.lambda(n) - ss.lambda(n)),
                                 std::abs(sm.lambda(n) - base.lambda(n))});
    r.conj_deviation = std::max(r.conj_deviation, std::abs(std::conj(sc.lambda(n)) - base.lambda(n)));
    if (u.is_real()) {
      // independent non-Hermitian solve as the reality witness
      r.reality_deviation = std::max(r.reality_deviation, std::abs(sm.lambda(n).imag()));
    }
  }
  return r;
}

}  // namespace bo
