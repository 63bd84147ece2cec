#include "bo/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "bo/errors.hpp"
#include "bo/residue.hpp"

namespace bo {

BirkhoffState BirkhoffState::zero(int modes, double s) {
  BirkhoffState z;
  z.s = s;
  z.plus.assign(static_cast<std::size_t>(modes), cplx{});
  z.minus.assign(static_cast<std::size_t>(modes), cplx{});
  return z;
}

cplx BirkhoffState::at(int n) const {
  if (n == 0 || std::abs(n) > modes()) return {};
  return n > 0 ? plus[static_cast<std::size_t>(n - 1)] : minus[static_cast<std::size_t>(-n - 1)];
}

SeqState BirkhoffState::to_seq() const {
  SeqState q;
  q.beta = 0.5 + s;
  for (int n = modes(); n >= 1; --n) q.entries.emplace_back(-n, at(-n));
  for (int n = 1; n <= modes(); ++n) q.entries.emplace_back(n, at(n));
  return q;
}

double sobolev_norm(const BirkhoffState& z, double beta) {
  double acc = 0.0;
  for (int n = 1; n <= z.modes(); ++n)
    acc += std::pow(double(n), 2 * beta) * (std::norm(z.at(n)) + std::norm(z.at(-n)));
  return std::sqrt(acc);
}

namespace {

cplx checked_factor(cplx f, const char* what, int n, int k) {
  if (std::abs(f) < 1e-12) {
    std::ostringstream os;
    os << what << " product factor (n=" << n << ", k=" << k << ") vanishes";
    throw DegenerateProduct(os.str());
  }
  return f;
}

// Principal branch; arguments on (-inf, 0] are rejected.
cplx principal_sqrt(cplx z, const char* what, int n) {
  if (z.real() <= 0.0 && std::abs(z.imag()) <= 1e-15 * std::max(1.0, std::abs(z))) {
    std::ostringstream os;
    os << what << "_" << n << " = " << z.real() << " lies on the branch cut of the square root";
    throw OutOfNeighborhood(os.str());
  }
  return std::sqrt(z);
}

}  // namespace

ScalingConstants scaling_constants(const SpectralData& sd) {
  const int K = sd.k_use();
  ScalingConstants sc;
  sc.kappa.assign(static_cast<std::size_t>(K + 1), cplx{});
  sc.mu.assign(static_cast<std::size_t>(K + 1), cplx(1.0, 0.0));
  auto lam = [&](int k) { return sd.lambda(k); };
  auto gam = [&](int k) { return sd.gap(k); };

  cplx k0(1.0, 0.0);
  for (int k = 1; k <= K; ++k) {
    const cplx f = checked_factor(1.0 - gam(k) / (lam(k) - lam(0)), "kappa", 0, k);
    k0 *= f;
    if (k == K) sc.kappa_tail = std::abs(f - 1.0);
  }
  sc.kappa[0] = k0;

  for (int n = 1; n <= K; ++n) {
    cplx kn = 1.0 / (lam(n) - lam(0));
    cplx mn = checked_factor(1.0 - gam(n) / (lam(n) - lam(0)), "mu", n, 0);
    for (int k = 1; k <= K; ++k) {
      if (k == n) continue;
      const cplx fk = checked_factor(1.0 - gam(k) / (lam(k) - lam(n)), "kappa", n, k);
      const cplx fm =
          checked_factor(1.0 - gam(n) * gam(k) / ((lam(k - 1) - lam(n - 1)) * (lam(k) - lam(n))), "mu", n, k);
      kn *= fk;
      mn *= fm;
      if (k == K) {
        sc.kappa_tail = std::max(sc.kappa_tail, std::abs(fk - 1.0));
        sc.mu_tail = std::max(sc.mu_tail, std::abs(fm - 1.0));
      }
    }
    sc.kappa[static_cast<std::size_t>(n)] = kn;
    sc.mu[static_cast<std::size_t>(n)] = mn;
  }
  return sc;
}

EigenChain eigen_chain(const SpectralData& sd, int n_max, double shift_warn) {
  if (n_max < 0 || n_max > sd.k_use())
    throw InvalidInput("chain length " + std::to_string(n_max) + " exceeds the trusted cutoff k_use=" +
                       std::to_string(sd.k_use()));
  EigenChain ch;
  ScalingData& sdat = ch.data;
  sdat.constants = scaling_constants(sd);
  const auto& kappa = sdat.constants.kappa;
  const auto& mu = sdat.constants.mu;
  const std::size_t len = static_cast<std::size_t>(n_max + 1);
  sdat.alpha.assign(len, cplx(1.0, 0.0));
  sdat.beta.assign(len, cplx(1.0, 0.0));
  sdat.delta.assign(len, cplx{});
  sdat.nu.assign(len, cplx(1.0, 0.0));
  sdat.a.assign(len, cplx(1.0, 0.0));

  HardyVector h_prev = sd.h(0);
  const cplx h00 = h_prev[0];
  if (std::abs(h00) < 1e-12) throw DegenerateProjector("<h_0, 1> vanishes");
  sdat.a0 = principal_sqrt(kappa[0], "kappa", 0) / h00;
  sdat.a[0] = sdat.a0;
  HardyVector f_prev(Eigen::VectorXcd(sdat.a0 * h_prev.coeffs()));
  ch.f.push_back(f_prev);
  ch.norm_drift = std::abs(f_prev.coeffs().norm() - 1.0);

  for (int n = 1; n <= n_max; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (std::abs(mu[un] - 1.0) >= 0.5) {
      std::ostringstream os;
      os << "|mu_" << n << " - 1| = " << std::abs(mu[un] - 1.0) << " >= 1/2";
      throw OutOfNeighborhood(os.str());
    }
    const HardyVector hn = sd.h(n);
    const cplx alpha = hn[n];
    if (std::abs(alpha) < 0.5) {
      std::ostringstream os;
      os << "|alpha_" << n << "| = " << std::abs(alpha) << " < 1/2";
      throw OutOfNeighborhood(os.str());
    }
    const cplx beta = sd.project(n, shift(h_prev, shift_warn))[n];
    const cplx sqmu = principal_sqrt(mu[un], "mu", n);
    sdat.alpha[un] = alpha;
    sdat.beta[un] = beta;
    sdat.delta[un] = beta - alpha;
    sdat.nu[un] = 1.0 + sdat.delta[un] / alpha;
    sdat.a[un] = sdat.a[un - 1] * sdat.nu[un] / sqmu;

    HardyVector fn(Eigen::VectorXcd(sd.project(n, shift(f_prev, shift_warn)).coeffs() / sqmu));
    ch.chain_drift = std::max(ch.chain_drift, (fn.coeffs() - sdat.a[un] * hn.coeffs()).norm());
    ch.norm_drift = std::max(ch.norm_drift, std::abs(fn.coeffs().norm() - 1.0));
    ch.f.push_back(fn);
    f_prev = fn;
    h_prev = hn;
  }
  return ch;
}

SeqState pre_birkhoff(const SpectralData& sd, int n_max, double s) {
  if (n_max > sd.k_use()) throw InvalidInput("pre_birkhoff beyond the trusted cutoff");
  SeqState q;
  q.beta = 1.0 + s;
  for (int n = 1; n <= n_max; ++n) q.entries.emplace_back(n, sd.h(n)[0]);
  return q;
}

cplx psi_series_term(const Potential& u, int n, int order) {
  if (order < 1) throw InvalidInput("series order must be >= 1");
  if (n < 1) throw InvalidInput("psi_series_term needs n >= 1");
  std::vector<int> supp;
  for (int k = -u.cutoff(); k <= u.cutoff(); ++k)
    if (u[k] != cplx{}) supp.push_back(k);
  const int m = order - 1;  // number of free summation indices
  std::vector<int> l(static_cast<std::size_t>(m + 1));
  cplx total{};
  // l_1..l_m >= -n with steps in supp; closing factor u_hat(-n - l_m)
  std::function<void(int, cplx)> rec = [&](int depth, cplx w) {
    if (depth == m) {
      const int prev = m == 0 ? 0 : l[static_cast<std::size_t>(m - 1)];
      const cplx close = u[-n - prev];
      if (close == cplx{}) return;
      l[static_cast<std::size_t>(m)] = -n;
      total += residue_A<double>(l) * w * close;
      return;
    }
    const int prev = depth == 0 ? 0 : l[static_cast<std::size_t>(depth - 1)];
    for (int step : supp) {
      const int next = prev + step;
      if (next < -n) continue;
      l[static_cast<std::size_t>(depth)] = next;
      rec(depth + 1, w * u[step]);
    }
  };
  rec(0, cplx(1.0, 0.0));
  return total;
}

SeriesReport series_validate(const Potential& u, const SpectralData& sd, int d_max, int n_max) {
  if (d_max < 1) throw InvalidInput("series check needs d_max >= 1");
  SeriesReport rep;
  rep.order_norms.assign(static_cast<std::size_t>(d_max + 1), 0.0);
  const SeqState psi = pre_birkhoff(sd, n_max);
  for (const auto& [n, value] : psi.entries) {
    cplx acc{};
    for (int m = 1; m <= d_max; ++m) {
      const cplx term = psi_series_term(u, n, m);
      rep.order_norms[static_cast<std::size_t>(m)] = std::max(rep.order_norms[static_cast<std::size_t>(m)], std::abs(term));
      acc += term;
    }
    rep.max_deviation = std::max(rep.max_deviation, std::abs(acc - value));
  }
  if (d_max >= 2) {
    double first = 0.0;
    for (int m = 1; m < d_max && first == 0.0; ++m) first = rep.order_norms[static_cast<std::size_t>(m)];
    const double last = rep.order_norms[static_cast<std::size_t>(d_max)];
    if (first > 0.0 && last >= first)
      throw DivergenceError("pre-Birkhoff series is not contracting (order " + std::to_string(d_max) + ")");
  }
  return rep;
}

namespace {

struct PipelineOut {
  std::vector<cplx> G;  // f_n(0)/sqrt(kappa_n), n = 1..modes
  std::vector<cplx> G_chain;  // same value from a_n h_n(0)
  TransformDiagnostics diag;
};

PipelineOut pipeline(const Potential& v, const TransformOptions& opts, int modes) {
  SpectralOptions so;
  so.tol_simple = opts.tol_simple;
  so.k_use = opts.k_use;
  const SpectralData sd = spectrum(v, opts.lax_dim, so);
  if (modes > sd.k_use())
    throw InvalidInput("requested " + std::to_string(modes) + " Birkhoff modes but only k_use=" +
                       std::to_string(sd.k_use()) + " eigenvalues are trusted; raise --lax-dim");
  const EigenChain ch = eigen_chain(sd, modes, opts.shift_warn);
  PipelineOut out;
  for (int n = 1; n <= modes; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const cplx sk = principal_sqrt(ch.data.constants.kappa[un], "kappa", n);
    out.G.push_back(ch.f[un][0] / sk);
    out.G_chain.push_back(ch.data.a[un] * sd.h(n)[0] / sk);
  }
  out.diag.kappa_tail = ch.data.constants.kappa_tail;
  out.diag.mu_tail = ch.data.constants.mu_tail;
  out.diag.norm_drift = ch.norm_drift;
  out.diag.chain_drift = ch.chain_drift;
  return out;
}

}  // namespace

TransformResult birkhoff_transform(const Potential& u, const TransformOptions& opts) {
  const int modes = opts.modes > 0 ? opts.modes : u.cutoff();
  TransformResult r;
  r.state = BirkhoffState::zero(modes, u.s());
  r.state.real = u.is_real();
  const PipelineOut a = pipeline(u, opts, modes);
  r.diag = a.diag;
  if (u.is_real()) {
    for (int n = 1; n <= modes; ++n) {
      const auto i = static_cast<std::size_t>(n - 1);
      // <1|f_n>/sqrt(kappa_n) = conj(f_n(0))/sqrt(kappa_n), kappa_n > 0
      const cplx z = std::conj(a.G[i]);
      const double gap = std::abs(a.G[i] - a.G_chain[i]);
      if (gap > opts.chain_tol * std::max(1e-3, std::abs(z)))
        throw NumericalFailure("eigenfunction chain and a_n h_n paths disagree at n=" + std::to_string(n));
      r.state.plus[i] = z;
      r.state.minus[i] = std::conj(z);
    }
    return r;
  }
  const PipelineOut b = pipeline(involute(u, Involution::conj), opts, modes);
  for (int n = 1; n <= modes; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    r.state.minus[i] = a.G[i];
    r.state.plus[i] = std::conj(b.G[i]);
  }
  r.diag.kappa_tail = std::max(a.diag.kappa_tail, b.diag.kappa_tail);
  r.diag.mu_tail = std::max(a.diag.mu_tail, b.diag.mu_tail);
  r.diag.chain_drift = std::max(a.diag.chain_drift, b.diag.chain_drift);
  r.diag.norm_drift = std::numeric_limits<double>::quiet_NaN();  // f_n need not be unit vectors off the real subspace
  return r;
}

BirkhoffState birkhoff_forward(const Potential& u, const TransformOptions& opts) {
  return birkhoff_transform(u, opts).state;
}

BirkhoffState d0_phi(const Potential& u, int modes) {
  if (modes <= 0) modes = u.cutoff();
  BirkhoffState z = BirkhoffState::zero(modes, u.s());
  z.real = u.is_real();
  for (int n = 1; n <= modes; ++n) {
    z.plus[static_cast<std::size_t>(n - 1)] = -u[n] / std::sqrt(double(n));
    z.minus[static_cast<std::size_t>(n - 1)] = -u[-n] / std::sqrt(double(n));
  }
  return z;
}

std::vector<double> actions(const BirkhoffState& z) {
  std::vector<double> I(static_cast<std::size_t>(z.modes()));
  for (int n = 1; n <= z.modes(); ++n) I[static_cast<std::size_t>(n - 1)] = std::norm(z.at(n));
  return I;
}

double hamiltonian_from_actions(const std::vector<double>& I) {
  double lin = 0.0, quad = 0.0, tail = 0.0;
  for (std::size_t i = I.size(); i-- > 0;) {
    const double n = double(i + 1);
    tail += I[i];
    lin += n * n * I[i];
    quad += tail * tail;
  }
  return lin - quad;
}

double hamiltonian_birkhoff(const BirkhoffState& z) { return hamiltonian_from_actions(actions(z)); }

double hamiltonian_phys(const Potential& u) {
  const int N = u.cutoff();
  int G = 4;
  while (G < 3 * N + 1) G *= 2;
  const auto x = synthesize(u, G);
  double quad = 0.0;
  for (int n = -N; n <= N; ++n) quad += std::abs(n) * std::norm(u[n]);
  cplx cube{};
  for (const auto& v : x) cube += v * v * v;
  cube /= double(G);  // exact zero mode of u^3 since 3N < G
  return 0.5 * quad - cube.real() / 3.0;
}

namespace {

cplx central(const Functional& F, const Potential& u, int k, double h) {
  const Potential up = u.with_coefficient(k, u[k] + h);
  const Potential dn = u.with_coefficient(k, u[k] - h);
  return (F(up) - F(dn)) / (2.0 * h);
}

}  // namespace

BracketResult gardner_bracket(const Functional& F, const Functional& G, const Potential& u, double h, int modes) {
  if (modes <= 0) modes = u.cutoff();
  if (!(h > 0.0)) throw InvalidInput("bracket step must be positive");
  BracketResult r;
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max({1.0, std::abs(F(u)), std::abs(G(u))});
  cplx acc{}, acc2{};
  double mag = 0.0;
  for (int k = -modes; k <= modes; ++k) {
    if (k == 0) continue;
    const cplx fh = central(F, u, -k, h), gh = central(G, u, k, h);
    const cplx f2 = central(F, u, -k, 2 * h), g2 = central(G, u, k, 2 * h);
    acc += cplx(0.0, double(k)) * fh * gh;
    acc2 += cplx(0.0, double(k)) * f2 * g2;
    mag += std::abs(k) * (std::abs(fh) + std::abs(gh));
  }
  r.value = acc;
  r.truncation_estimate = std::abs(acc - acc2) / 3.0;  // O(h^2) Richardson
  r.roundoff_estimate = mag * eps * scale / h;
  r.roundoff_dominated = r.roundoff_estimate > std::max(r.truncation_estimate, 1e-9);
  if (r.roundoff_dominated) {
    std::ostringstream os;
    os << "bracket step h=" << h << " is round-off dominated (round-off ~" << r.roundoff_estimate
       << ", truncation ~" << r.truncation_estimate << ")";
    warn(os.str());
  }
  return r;
}

CanonicalMatrices canonical_relations(const Potential& u0, int n_max, const TransformOptions& opts, double h,
                                      int dir_modes) {
  TransformOptions o = opts;
  o.modes = std::max(n_max, opts.modes);
  const int K = dir_modes > 0 ? dir_modes : 2 * std::max(u0.cutoff(), n_max);
  const Potential u = u0.resized(std::max(K, u0.cutoff()));
  // dzeta_j / du_hat(k) for all stored j, k = -K..K
  const int modes = o.modes;
  std::vector<BirkhoffState> deriv(static_cast<std::size_t>(2 * K + 1));
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    const BirkhoffState zp = birkhoff_forward(u.with_coefficient(k, u[k] + h), o);
    const BirkhoffState zm = birkhoff_forward(u.with_coefficient(k, u[k] - h), o);
    BirkhoffState d = BirkhoffState::zero(modes, u.s());
    for (int j = 0; j < modes; ++j) {
      d.plus[static_cast<std::size_t>(j)] = (zp.plus[static_cast<std::size_t>(j)] - zm.plus[static_cast<std::size_t>(j)]) / (2 * h);
      d.minus[static_cast<std::size_t>(j)] = (zp.minus[static_cast<std::size_t>(j)] - zm.minus[static_cast<std::size_t>(j)]) / (2 * h);
    }
    deriv[static_cast<std::size_t>(k + K)] = d;
  }
  CanonicalMatrices out;
  out.plus_conj = Eigen::MatrixXcd::Zero(n_max, n_max);
  out.plus_plus = Eigen::MatrixXcd::Zero(n_max, n_max);
  for (int n = 1; n <= n_max; ++n)
    for (int m = 1; m <= n_max; ++m) {
      cplx pc{}, pp{};
      for (int k = -K; k <= K; ++k) {
        if (k == 0) continue;
        const cplx dn = deriv[static_cast<std::size_t>(-k + K)].at(n);
        pc += cplx(0.0, double(k)) * dn * deriv[static_cast<std::size_t>(k + K)].at(-m);
        pp += cplx(0.0, double(k)) * dn * deriv[static_cast<std::size_t>(k + K)].at(m);
      }
      out.plus_conj(n - 1, m - 1) = pc;
      out.plus_plus(n - 1, m - 1) = pp;
    }
  return out;
}

}  // namespace bo
