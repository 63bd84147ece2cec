#include "bo/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bo/errors.hpp"
#include "bo/parallel.hpp"

namespace bo {

Frequencies frequencies(const BirkhoffState& z) {
  const int N = z.modes();
  std::vector<cplx> p(static_cast<std::size_t>(N + 1));
  for (int k = 1; k <= N; ++k)
    p[static_cast<std::size_t>(k)] = z.real ? cplx(std::norm(z.at(k)), 0.0) : z.at(-k) * z.at(k);
  std::vector<cplx> suffix(static_cast<std::size_t>(N + 2));
  for (int k = N; k >= 1; --k)
    suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k + 1)] + p[static_cast<std::size_t>(k)];
  Frequencies f;
  cplx prefix{};
  for (int n = 1; n <= N; ++n) {
    prefix += double(n) * p[static_cast<std::size_t>(n)];
    const cplx Om = -2.0 * prefix - 2.0 * double(n) * suffix[static_cast<std::size_t>(n + 1)];
    const double n2 = double(n) * double(n);
    f.Omega.push_back(Om);
    f.plus.push_back(n2 + Om);
    f.minus.push_back(-n2 - Om);
  }
  return f;
}

BirkhoffState evolve(const BirkhoffState& z, double t) {
  const Frequencies f = frequencies(z);
  BirkhoffState out = z;
  for (int n = 1; n <= z.modes(); ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    const double lin = double(n) * double(n) * t;
    const cplx rot = std::exp(cplx(0.0, t) * f.Omega[i]);
    out.plus[i] = z.plus[i] * std::polar(1.0, lin) * rot;
    out.minus[i] = z.minus[i] * std::polar(1.0, -lin) * std::exp(cplx(0.0, -t) * f.Omega[i]);
  }
  return out;
}

double sobolev_norm_plus(const SparseState& z, double beta) {
  double acc = 0.0;
  for (const auto& [n, v] : z.plus) acc += std::pow(double(n), 2 * beta) * std::norm(v);
  return std::sqrt(acc);
}

double distance_plus(const SparseState& a, const SparseState& b, double beta) {
  double acc = 0.0;
  auto add = [&](long n, cplx d) { acc += std::pow(double(n), 2 * beta) * std::norm(d); };
  for (const auto& [n, v] : a.plus) {
    auto it = b.plus.find(n);
    add(n, v - (it == b.plus.end() ? cplx{} : it->second));
  }
  for (const auto& [n, v] : b.plus)
    if (!a.plus.count(n)) add(n, v);
  return std::sqrt(acc);
}

double Omega(const SparseState& z, long n) {
  double low = 0.0, high = 0.0;
  for (const auto& [k, v] : z.plus) {
    if (k <= n)
      low += double(k) * std::norm(v);
    else
      high += std::norm(v);
  }
  return -2.0 * low - 2.0 * double(n) * high;
}

double Omega_difference(const SparseState& a, const SparseState& b, long n) {
  std::map<long, double> dI;  // |a_k|^2 - |b_k|^2 = Re((a-b) conj(a+b))
  auto get = [](const SparseState& z, long k) {
    auto it = z.plus.find(k);
    return it == z.plus.end() ? cplx{} : it->second;
  };
  for (const auto& [k, v] : a.plus) dI[k] = 0.0;
  for (const auto& [k, v] : b.plus) dI[k] = 0.0;
  double low = 0.0, high = 0.0;
  for (auto& [k, d] : dI) {
    const cplx x = get(a, k), y = get(b, k);
    d = ((x - y) * std::conj(x + y)).real();
    if (k <= n)
      low += double(k) * d;
    else
      high += d;
  }
  return -2.0 * low - 2.0 * double(n) * high;
}

SparseState evolve(const SparseState& z, double t) {
  SparseState out = z;
  for (auto& [n, v] : out.plus) {
    const double n2 = double(n) * double(n);  // exact below 2^53
    v *= std::polar(1.0, n2 * t) * std::polar(1.0, t * Omega(z, n));
  }
  return out;
}

namespace {

Potential from_unknowns(const Eigen::VectorXd& x, int P, double s) {
  std::vector<cplx> pos(static_cast<std::size_t>(P));
  for (int n = 0; n < P; ++n) pos[static_cast<std::size_t>(n)] = cplx(x(2 * n), x(2 * n + 1));
  return Potential::real_from_positive(s, pos);
}

Eigen::VectorXd residual_vec(const Potential& u, const BirkhoffState& target, const TransformOptions& o) {
  const BirkhoffState z = birkhoff_forward(u, o);
  const int Nb = target.modes();
  Eigen::VectorXd r(2 * Nb);
  for (int n = 0; n < Nb; ++n) {
    const cplx d = z.plus[static_cast<std::size_t>(n)] - target.plus[static_cast<std::size_t>(n)];
    r(2 * n) = d.real();
    r(2 * n + 1) = d.imag();
  }
  return r;
}

}  // namespace

InversionResult invert(const BirkhoffState& target, const FlowConfig& cfg, const Potential* initial) {
  if (!target.real) throw InvalidInput("inversion is implemented on the real subspace only");
  const int Nb = target.modes();
  if (Nb < 1) throw InvalidInput("target state has no modes");
  const int P = cfg.potential_modes > 0 ? cfg.potential_modes : Nb;
  const NewtonOptions& nw = cfg.newton;
  if (!(nw.tol > 0.0)) throw InvalidInput("Newton tolerance must be positive");
  TransformOptions o = cfg.lax;
  o.modes = Nb;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * P);
  if (initial) {
    for (int n = 1; n <= P; ++n) {
      x(2 * n - 2) = (*initial)[n].real();
      x(2 * n - 1) = (*initial)[n].imag();
    }
  } else {
    for (int n = 1; n <= std::min(P, Nb); ++n) {
      const cplx g = -std::sqrt(double(n)) * target.plus[static_cast<std::size_t>(n - 1)];
      x(2 * n - 2) = g.real();
      x(2 * n - 1) = g.imag();
    }
  }

  InversionResult res;
  Eigen::VectorXd r = residual_vec(from_unknowns(x, P, target.s), target, o);
  double rn = r.norm();
  res.residuals.push_back(rn);
  int it = 0;
  while (rn > nw.tol) {
    if (++it > nw.max_iter) {
      std::ostringstream os;
      os << "Newton did not reach " << nw.tol << " within " << nw.max_iter << " iterations (residual " << rn << ")";
      throw InversionFailure(os.str(), res.residuals);
    }
    Eigen::MatrixXd J(2 * Nb, 2 * P);
    for (int j = 0; j < 2 * P; ++j) {
      const double h = nw.fd_step * std::max(1.0, std::abs(x(j)));
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      J.col(j) = (residual_vec(from_unknowns(xp, P, target.s), target, o) -
                  residual_vec(from_unknowns(xm, P, target.s), target, o)) / (2 * h);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J);
    qr.setThreshold(1e-12);
    if (qr.rank() < std::min(2 * P, 2 * Nb))
      throw InversionFailure("finite-difference Jacobian is rank deficient", res.residuals);
    const Eigen::VectorXd dx = qr.solve(-r);
    double step = 1.0;
    Eigen::VectorXd xn;
    Eigen::VectorXd rnew;
    double rnn = rn;
    for (int damp = 0; damp < 6; ++damp, step *= 0.5) {
      xn = x + step * dx;
      rnew = residual_vec(from_unknowns(xn, P, target.s), target, o);
      rnn = rnew.norm();
      if (rnn < rn) break;
    }
    if (!(rnn < rn)) {
      res.residuals.push_back(rnn);
      std::ostringstream os;
      os << "Newton stagnated at residual " << rn;
      throw InversionFailure(os.str(), res.residuals);
    }
    x = xn;
    r = rnew;
    rn = rnn;
    res.residuals.push_back(rn);
  }
  res.iterations = it;
  res.u = from_unknowns(x, P, target.s);
  return res;
}

std::vector<TrajectorySample> solve_trajectory(const Potential& u0, const FlowConfig& cfg) {
  if (!u0.is_real()) throw InvalidInput("trajectories are computed for real potentials");
  for (double t : cfg.t_grid)
    if (!std::isfinite(t)) throw InvalidInput("sample times must be finite");
  TransformOptions o = cfg.lax;
  if (o.modes <= 0) o.modes = std::max(u0.cutoff(), cfg.potential_modes);
  const BirkhoffState z0 = birkhoff_forward(u0, o);
  const std::vector<double> I0 = actions(z0);
  FlowConfig c = cfg;
  c.lax = o;

  std::vector<TrajectorySample> out(cfg.t_grid.size());
  auto solve_one = [&](std::size_t i, const Potential* guess) {
    TrajectorySample& smp = out[i];
    smp.t = cfg.t_grid[i];
    const InversionResult inv = invert(evolve(z0, smp.t), c, guess);
    smp.u = inv.u.with_s(u0.s());
    smp.residual = inv.residuals.back();
    const std::vector<double> I = actions(birkhoff_forward(smp.u, o));
    for (std::size_t n = 0; n < I.size(); ++n) smp.action_drift = std::max(smp.action_drift, std::abs(I[n] - I0[n]));
  };
  if (cfg.warm_start) {
    for (std::size_t i = 0; i < out.size(); ++i) solve_one(i, i ? &out[i - 1].u : nullptr);
  } else {
    parallel_for(out.size(), [&](std::size_t i) { solve_one(i, nullptr); });
  }
  for (std::size_t i = 1; i < out.size(); ++i) out[i].increment = sobolev_norm(out[i].u - out[i - 1].u, u0.s());
  return out;
}

}  // namespace bo
