#include "bo/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bo/errors.hpp"
#include "fft.hpp"

namespace bo {

namespace {

void check_header(int N, double s) {
  if (N < 1) throw InvalidInput("potential cutoff N must be >= 1");
  if (!std::isfinite(s) || s <= -0.5) throw InvalidInput("Sobolev exponent s must be finite and > -1/2");
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

Potential::Potential(int N, double s, bool real) : N_(N), s_(s), real_(real) {
  check_header(N, s);
  c_.assign(static_cast<std::size_t>(2 * N + 1), cplx{});
}

Potential::Potential(int N, double s, bool real, std::vector<cplx> two_sided)
    : N_(N), s_(s), real_(real), c_(std::move(two_sided)) {
  check_header(N, s);
  if (c_.size() != static_cast<std::size_t>(2 * N + 1))
    throw InvalidInput("potential coefficient vector must have length 2N+1");
  for (const auto& z : c_)
    if (!finite(z)) throw InvalidInput("potential coefficients must be finite");
  if (c_[static_cast<std::size_t>(N)] != cplx{}) throw InvalidInput("zero mode must vanish (mean-zero potential)");
  if (real_) {
    for (int n = 1; n <= N; ++n) {
      const cplx p = c_[static_cast<std::size_t>(N + n)];
      const cplx m = c_[static_cast<std::size_t>(N - n)];
      if (std::abs(m - std::conj(p)) > 1e-14 * std::max(1.0, std::abs(p))) {
        std::ostringstream os;
        os << "real potential violates u_hat(-n) = conj(u_hat(n)) at n=" << n;
        throw InvalidInput(os.str());
      }
      c_[static_cast<std::size_t>(N - n)] = std::conj(p);
    }
  }
}

Potential Potential::real_from_positive(double s, const std::vector<cplx>& positive) {
  const int N = std::max<int>(1, static_cast<int>(positive.size()));
  std::vector<cplx> c(static_cast<std::size_t>(2 * N + 1));
  for (int n = 1; n <= static_cast<int>(positive.size()); ++n) {
    c[static_cast<std::size_t>(N + n)] = positive[static_cast<std::size_t>(n - 1)];
    c[static_cast<std::size_t>(N - n)] = std::conj(positive[static_cast<std::size_t>(n - 1)]);
  }
  return Potential(N, s, true, std::move(c));
}

Potential Potential::with_coefficient(int n, cplx value) const {
  if (n == 0) throw InvalidInput("cannot set the zero mode");
  const int N = std::max(N_, std::abs(n));
  Potential out = resized(N);
  out.c_[static_cast<std::size_t>(n + N)] = value;
  out.real_ = false;
  return out;
}

Potential Potential::with_real_mode(int n, cplx value) const {
  if (n == 0) throw InvalidInput("cannot set the zero mode");
  const int N = std::max(N_, std::abs(n));
  Potential out = resized(N);
  out.c_[static_cast<std::size_t>(N + n)] = value;
  if (out.real_) out.c_[static_cast<std::size_t>(N - n)] = std::conj(value);
  return out;
}

Potential Potential::resized(int N) const {
  Potential out(N, s_, real_);
  const int m = std::min(N, N_);
  for (int n = -m; n <= m; ++n) out.c_[static_cast<std::size_t>(n + N)] = (*this)[n];
  return out;
}

Potential Potential::with_s(double s) const {
  Potential out = *this;
  check_header(N_, s);
  out.s_ = s;
  return out;
}

Potential Potential::scaled(double factor) const {
  Potential out = *this;
  for (auto& z : out.c_) z *= factor;
  return out;
}

bool Potential::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](cplx z) { return z == cplx{}; });
}

namespace {
Potential combine(const Potential& a, const Potential& b, double sign) {
  const int N = std::max(a.cutoff(), b.cutoff());
  std::vector<cplx> c(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n) c[static_cast<std::size_t>(n + N)] = a[n] + sign * b[n];
  return Potential(N, a.s(), a.is_real() && b.is_real(), std::move(c));
}
}  // namespace

Potential operator+(const Potential& a, const Potential& b) { return combine(a, b, 1.0); }
Potential operator-(const Potential& a, const Potential& b) { return combine(a, b, -1.0); }

HardyVector::HardyVector(int dim) : c_(Eigen::VectorXcd::Zero(std::max(dim, 1))) {
  if (dim < 1) throw InvalidInput("Hardy vector length must be >= 1");
}

HardyVector::HardyVector(Eigen::VectorXcd c) : c_(std::move(c)) {
  if (c_.size() < 1) throw InvalidInput("Hardy vector length must be >= 1");
  if (!c_.allFinite()) throw InvalidInput("Hardy vector entries must be finite");
}

HardyVector HardyVector::basis(int dim, int n) {
  HardyVector e(dim);
  if (n < 0 || n >= dim) throw InvalidInput("basis index out of range");
  e.c_(n) = 1.0;
  return e;
}

double sobolev_norm(const Potential& u, double beta) {
  double acc = 0.0;
  for (int n = -u.cutoff(); n <= u.cutoff(); ++n)
    acc += std::pow(bracket_weight(n), 2 * beta) * std::norm(u[n]);
  return std::sqrt(acc);
}

double sobolev_norm(const HardyVector& f, double beta) {
  double acc = 0.0;
  for (int n = 0; n < f.dim(); ++n) acc += std::pow(bracket_weight(n), 2 * beta) * std::norm(f[n]);
  return std::sqrt(acc);
}

double sobolev_norm(const SeqState& z, double beta) {
  double acc = 0.0;
  for (const auto& [n, v] : z.entries) acc += std::pow(bracket_weight(n), 2 * beta) * std::norm(v);
  return std::sqrt(acc);
}

cplx pair(const HardyVector& f, const HardyVector& g, PairKind kind) {
  if (kind == PairKind::bilinear) return f[0] * g[0];  // only n = 0 meets -n inside H_+
  const int n = std::min(f.dim(), g.dim());
  return g.coeffs().head(n).dot(f.coeffs().head(n));  // Eigen conjugates the left operand
}

HardyVector shift(const HardyVector& f, double warn_threshold, double* dropped) {
  const int d = f.dim();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d);
  if (d > 1) out.tail(d - 1) = f.coeffs().head(d - 1);
  const double top = std::abs(f[d - 1]);
  const double scale = f.coeffs().cwiseAbs().maxCoeff();
  if (dropped) *dropped = top;
  if (top > 0 && top > warn_threshold * scale) {
    std::ostringstream os;
    os << "shift truncated a coefficient of magnitude " << top << " (relative " << top / scale << ")";
    warn(os.str());
  }
  return HardyVector(std::move(out));
}

HardyVector project_hardy(const Potential& u, HardySign sign, int M) {
  if (M < 1) throw InvalidInput("project_hardy requires M >= 1");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(M + 1);
  for (int j = 0; j <= M; ++j) c(j) = sign == HardySign::plus ? u[j] : u[-j];
  return HardyVector(std::move(c));
}

Potential involute(const Potential& u, Involution kind) {
  const int N = u.cutoff();
  std::vector<cplx> c(static_cast<std::size_t>(2 * N + 1));
  for (int k = -N; k <= N; ++k)
    c[static_cast<std::size_t>(k + N)] = kind == Involution::star ? u[-k] : std::conj(u[-k]);
  return Potential(N, u.s(), u.is_real(), std::move(c));
}

std::vector<cplx> synthesize(const Potential& u, int grid) {
  const int N = u.cutoff();
  if (grid < 2 * N + 1) throw AliasingError("grid of " + std::to_string(grid) + " points cannot carry " +
                                            std::to_string(N) + " modes");
  std::vector<cplx> spec(static_cast<std::size_t>(grid)), out;
  for (int n = -N; n <= N; ++n) spec[static_cast<std::size_t>((n + grid) % grid)] = u[n];
  detail::Fft(grid).backward(spec, out);
  return out;
}

std::vector<cplx> fourier_coefficients(const std::vector<cplx>& samples, int N) {
  const int G = static_cast<int>(samples.size());
  if (G < 2 * N + 1) throw AliasingError("grid of " + std::to_string(G) + " points cannot resolve " +
                                         std::to_string(N) + " modes");
  std::vector<cplx> spec;
  detail::Fft(G).forward(samples, spec);
  std::vector<cplx> c(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n) c[static_cast<std::size_t>(n + N)] = spec[static_cast<std::size_t>((n + G) % G)] / double(G);
  return c;
}

Potential analyze(const std::vector<cplx>& samples, int N, double s, bool real) {
  auto c = fourier_coefficients(samples, N);
  double scale = 0.0;
  for (const auto& z : c) scale = std::max(scale, std::abs(z));
  if (std::abs(c[static_cast<std::size_t>(N)]) > 1e-12 * std::max(scale, 1.0))
    throw InvalidInput("samples have nonzero mean; potentials are mean-zero");
  c[static_cast<std::size_t>(N)] = 0.0;
  if (real)
    for (int n = 1; n <= N; ++n) c[static_cast<std::size_t>(N - n)] = std::conj(c[static_cast<std::size_t>(N + n)]);
  return Potential(N, s, real, std::move(c));
}

Potential random_real_potential(std::mt19937_64& rng, int N, double s, double norm, double norm_beta) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<cplx> pos(static_cast<std::size_t>(N));
  for (int n = 1; n <= N; ++n) {
    const double re = U(rng), im = U(rng);
    pos[static_cast<std::size_t>(n - 1)] = cplx(re, im) / (double(n) * double(n));
  }
  Potential u = Potential::real_from_positive(s, pos);
  const double cur = sobolev_norm(u, norm_beta);
  return cur == 0.0 ? u : u.scaled(norm / cur);
}

}  // namespace bo
