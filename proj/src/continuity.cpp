#include "bo/continuity.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "bo/errors.hpp"
#include "bo/parallel.hpp"

namespace bo {

namespace {

void validate(const ContinuityConfig& cfg) {
  if (!(cfg.s > -0.5 && cfg.s < 0.0)) throw InvalidInput("continuity lab needs -1/2 < s < 0");
  if (!(cfg.t != 0.0) || !std::isfinite(cfg.t)) throw InvalidInput("continuity lab needs a finite t != 0");
  if (cfg.k < 1) throw InvalidInput("k must be a positive integer");
  if (cfg.max_m < 1) throw InvalidInput("max_m must be positive");
}

SparseState base_state(const ContinuityConfig& cfg) {
  SparseState z;
  z.s = cfg.s;
  for (std::size_t i = 0; i < cfg.base.size(); ++i)
    if (cfg.base[i] != cplx{}) z.plus[static_cast<long>(i + 1)] = cfg.base[i];
  return z;
}

}  // namespace

double default_delta(const ContinuityConfig& cfg) {
  return cfg.delta >= 0.0 ? cfg.delta : std::sqrt(M_PI * std::pow(double(cfg.k), cfg.s) / (2.0 * std::abs(cfg.t)));
}

std::vector<cplx> default_base(int n_base, double amplitude) {
  std::vector<cplx> b(static_cast<std::size_t>(std::max(n_base, 0)));
  for (int n = 1; n <= n_base; ++n) b[static_cast<std::size_t>(n - 1)] = amplitude / double(n);
  return b;
}

std::pair<SparseState, SparseState> build_pair(const ContinuityConfig& cfg, long m) {
  validate(cfg);
  const long N = static_cast<long>(cfg.base.size());
  if (m <= N) throw InvalidInput("probe index m must exceed the base support N");
  const double delta = default_delta(cfg);
  const double s = cfg.s;
  const double md = double(m);
  const double w = std::pow(md, 0.5 + s);
  SparseState zeta = base_state(cfg), xi = base_state(cfg);
  zeta.plus[m] = delta / w;
  xi.plus[m] = delta * cplx(1.0, std::pow(md, s / 2)) / w;
  if (delta == 0.0) {
    zeta.plus.erase(m);
    xi.plus.erase(m);
  }
  const double beta = 0.5 + s;
  const SparseState z0 = base_state(cfg);
  const double e1 = std::abs(distance_plus(zeta, z0, beta) - delta);
  const double e2 = std::abs(distance_plus(zeta, xi, beta) - delta * std::pow(md, s / 2));
  const double e3 = std::abs(distance_plus(xi, z0, beta) - delta * std::sqrt(1.0 + std::pow(md, s)));
  if (std::max({e1, e2, e3}) > 1e-12 * std::max(delta, 1e-300) && delta > 0.0)
    throw NumericalFailure("probe pair violates its closed-form distances at m=" + std::to_string(m));
  return {zeta, xi};
}

std::vector<long> admissible_probes(const ContinuityConfig& cfg) {
  validate(cfg);
  const long N = static_cast<long>(cfg.base.size());
  std::map<long, std::pair<double, long>> best;  // odd target -> (distance, m)
  for (long n = N / cfg.k + 1; n * cfg.k <= cfg.max_m; ++n) {
    const long m = n * cfg.k;
    if (m <= N) continue;
    const double x = std::pow(double(n), -cfg.s);  // (k/m)^s
    long odd = 2 * static_cast<long>(std::floor((x + 1.0) / 2.0)) - 1;
    if (odd < 1) odd = 1;
    const double dist = std::abs(x - double(odd));
    if (dist >= 0.5) continue;
    auto it = best.find(odd);
    if (it == best.end() || dist < it->second.first) best[odd] = {dist, m};
  }
  std::vector<long> out;
  for (const auto& [odd, v] : best) out.push_back(v.second);
  if (cfg.max_probes > 0 && out.size() > cfg.max_probes) out.resize(cfg.max_probes);
  return out;
}

double loglog_slope(const std::vector<ProbeRow>& rows) {
  const double n = double(rows.size());
  if (rows.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(double(r.m)), y = std::log(r.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepTable sweep(const ContinuityConfig& cfg) {
  validate(cfg);
  SweepTable tab;
  tab.delta = default_delta(cfg);
  const std::vector<long> probes = admissible_probes(cfg);
  if (probes.empty()) throw NumericalFailure("no admissible probe index found below max_m");
  tab.rows.resize(probes.size());
  const double beta = 0.5 + cfg.s;
  parallel_for(probes.size(), [&](std::size_t i) {
    const long m = probes[i];
    const auto [zeta, xi] = build_pair(cfg, m);
    ProbeRow& r = tab.rows[i];
    r.m = m;
    r.delta = tab.delta;
    r.d0 = distance_plus(zeta, xi, beta);
    r.dt = distance_plus(evolve(zeta, cfg.t), evolve(xi, cfg.t), beta);
    r.ratio = r.dt / r.d0;
    r.omega_gap_pred = 2.0 * tab.delta * tab.delta * std::pow(double(m), -cfg.s);
    // the m^2 part is common, and so is the base; difference the actions
    const double gap = Omega_difference(zeta, xi, m);
    r.omega_gap_meas = std::abs(gap);
    r.phase_bound_ok = std::abs(std::polar(1.0, cfg.t * gap) - 1.0) > 1.0;
    r.lower_bound = (std::sqrt(1.0 + std::pow(double(m), cfg.s)) - std::pow(double(m), cfg.s / 2)) * tab.delta;
    r.lower_bound_ok = r.dt >= r.lower_bound * (1.0 - 1e-12);
  });
  tab.slope = loglog_slope(tab.rows);
  return tab;
}

}  // namespace bo
