#include "bo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "bo/birkhoff.hpp"
#include "bo/continuity.hpp"
#include "bo/direct_pde.hpp"
#include "bo/errors.hpp"
#include "bo/flow.hpp"
#include "bo/io.hpp"
#include "bo/lax.hpp"
#include "bo/residue.hpp"

namespace bo {

namespace {

struct Common {
  std::string in;
  std::string out;
  std::string format = "json";
  int lax_dim = 64;
  int k_use = -1;
  int modes = 0;
  double tol_simple = 1e-8;
  double tol_newton = 1e-12;
  int max_iter = 30;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

class Emitter {
 public:
  Emitter(const std::string& path, std::ostream& out) : path_(path), out_(out) {}
  void emit(const std::string& text) {
    if (path_.empty() || path_ == "-")
      out_ << text;
    else
      write_text_file(path_, text);
  }

 private:
  std::string path_;
  std::ostream& out_;
};

std::string read_input(const std::string& path) {
  if (path.empty()) throw InvalidInput("--in is required");
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  return read_text_file(path);
}

Potential load_potential(const std::string& path) { return potential_from_json(parse_json(read_input(path))); }

TransformOptions transform_opts(const Common& c) {
  TransformOptions o;
  o.lax_dim = c.lax_dim;
  o.k_use = c.k_use;
  o.modes = c.modes;
  o.tol_simple = c.tol_simple;
  return o;
}

json cplx_entry(int n, cplx z) { return json{{"n", n}, {"re", z.real()}, {"im", z.imag()}}; }

std::vector<double> uniform_grid(double t0, double t1, int samples) {
  if (samples < 1) throw InvalidInput("--samples must be >= 1");
  std::vector<double> t;
  for (int i = 0; i < samples; ++i) t.push_back(samples == 1 ? t0 : t0 + (t1 - t0) * i / (samples - 1));
  return t;
}

void add_lax_flags(CLI::App* s, Common& c) {
  s->add_option("--lax-dim", c.lax_dim, "Lax truncation M")->check(CLI::PositiveNumber);
  s->add_option("--k-use", c.k_use, "trusted eigenvalue cutoff (default M/2)");
  s->add_option("--tol-simple", c.tol_simple, "eigenvalue separation tolerance");
  s->add_option("--modes", c.modes, "Birkhoff modes N_b (default: potential cutoff)");
}

void add_io_flags(CLI::App* s, Common& c, bool needs_input) {
  auto* o = s->add_option("--in", c.in, "input JSON file ('-' for stdin)");
  if (needs_input) o->required();
  s->add_option("--out", c.out, "output file (default stdout)");
  s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

int cmd_spectrum(const Common& c, std::ostream& out) {
  const Potential u = load_potential(c.in);
  SpectralOptions so;
  so.tol_simple = c.tol_simple;
  so.k_use = c.k_use;
  const LaxMatrix L = assemble_lax(u, c.lax_dim);
  const SpectralData sd = spectrum(L, so);
  const std::vector<cplx> g = gaps(sd);
  double contour = 0.0;
  for (int n = 0; n <= std::min(sd.k_use(), 8); ++n)
    contour = std::max(contour, (contour_projection(L, n).coeffs() - sd.h(n).coeffs()).norm());
  const SymmetryReport sym = symmetry_audit(u, c.lax_dim, so);
  Emitter em(c.out, out);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "n,lambda_re,lambda_im,gap_re,gap_im\n";
    for (int n = 0; n <= sd.k_use(); ++n) {
      const cplx gn = n ? g[static_cast<std::size_t>(n - 1)] : cplx{};
      os << n << ',' << fmt(sd.lambda(n).real()) << ',' << fmt(sd.lambda(n).imag()) << ',' << fmt(gn.real()) << ','
         << fmt(gn.imag()) << '\n';
    }
    em.emit(os.str());
    return kExitOk;
  }
  json lam = json::array(), gp = json::array();
  for (int n = 0; n <= sd.k_use(); ++n) lam.push_back(cplx_entry(n, sd.lambda(n)));
  for (std::size_t n = 0; n < g.size(); ++n) gp.push_back(cplx_entry(static_cast<int>(n + 1), g[n]));
  json j{{"M", c.lax_dim},
         {"k_use", sd.k_use()},
         {"lambdas", lam},
         {"gaps", gp},
         {"deviations",
          {{"idempotence", idempotence_defect(sd)},
           {"contour", contour},
           {"star", sym.star_deviation},
           {"conj", sym.conj_deviation},
           {"reality", sym.reality_deviation}}}};
  em.emit(j.dump(2) + "\n");
  return kExitOk;
}

int cmd_transform(const Common& c, int series_check, std::ostream& out) {
  const Potential u = load_potential(c.in);
  const TransformOptions o = transform_opts(c);
  const TransformResult r = birkhoff_transform(u, o);
  json j = birkhoff_to_json(r.state, &r.diag);
  if (series_check > 0) {
    SpectralOptions so;
    so.tol_simple = c.tol_simple;
    so.k_use = c.k_use;
    const SeriesReport rep = series_validate(u, spectrum(u, c.lax_dim, so), series_check, r.state.modes());
    j["diagnostics"]["series"] = {{"d_max", series_check}, {"max_deviation", rep.max_deviation}};
  }
  Emitter(c.out, out).emit(j.dump(2) + "\n");
  return kExitOk;
}

FlowConfig flow_config(const Common& c) {
  FlowConfig f;
  f.lax = transform_opts(c);
  f.newton.tol = c.tol_newton;
  f.newton.max_iter = c.max_iter;
  return f;
}

int cmd_inverse(const Common& c, std::ostream& out) {
  const BirkhoffState z = birkhoff_from_json(parse_json(read_input(c.in)));
  FlowConfig f = flow_config(c);
  f.lax.modes = 0;
  f.potential_modes = c.modes;
  const InversionResult r = invert(z, f);
  Emitter(c.out, out).emit(potential_to_json(r.u).dump(2) + "\n");
  return kExitOk;
}

int cmd_evolve(const Common& c, double t0, double t1, int samples, const std::string& csv, std::ostream& out) {
  const Potential u0 = load_potential(c.in);
  FlowConfig f = flow_config(c);
  f.t_grid = uniform_grid(t0, t1, samples);
  const auto traj = solve_trajectory(u0, f);
  std::ostringstream cs;
  cs << "t,action_drift,inversion_residual,increment\n";
  for (const auto& s : traj)
    cs << fmt(s.t) << ',' << fmt(s.action_drift) << ',' << fmt(s.residual) << ',' << fmt(s.increment) << '\n';
  if (!csv.empty()) write_text_file(csv, cs.str());
  Emitter em(c.out, out);
  if (c.format == "csv") {
    em.emit(cs.str());
    return kExitOk;
  }
  json arr = json::array();
  for (const auto& s : traj) arr.push_back(json{{"t", s.t}, {"potential", potential_to_json(s.u)}});
  em.emit(arr.dump(2) + "\n");
  return kExitOk;
}

int cmd_compare(const Common& c, double t1, int samples, int grid, double dt, std::ostream& out) {
  const Potential u0 = load_potential(c.in);
  const std::vector<double> times = uniform_grid(0.0, t1, samples);
  IntegratorConfig ic;
  ic.grid_size = grid;
  ic.dt = dt;
  ic.T = t1;
  ic.sample_times = times;
  const Trajectory direct = integrate(u0, ic);
  FlowConfig f = flow_config(c);
  if (f.lax.modes <= 0) f.lax.modes = std::max(u0.cutoff(), 20);
  f.t_grid = times;
  const auto birk = solve_trajectory(u0, f);
  const SpectralData s0 = spectrum(u0, c.lax_dim);
  const int kmax = std::min(10, s0.k_use());
  std::ostringstream os;
  os << "t,L2_diff,Hs_diff,action_drift,lambda_drift\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Potential diff = direct.u[i] - birk[i].u;
    const SpectralData si = spectrum(direct.u[i], c.lax_dim);
    double ld = 0.0;
    for (int n = 0; n <= kmax; ++n) ld = std::max(ld, std::abs(si.lambda(n) - s0.lambda(n)));
    os << fmt(times[i]) << ',' << fmt(sobolev_norm(diff, 0.0)) << ',' << fmt(sobolev_norm(diff, u0.s())) << ','
       << fmt(birk[i].action_drift) << ',' << fmt(ld) << '\n';
  }
  Emitter(c.out, out).emit(os.str());
  return kExitOk;
}

void sweep_csv(std::ostringstream& os, const SweepReport& r) {
  for (const auto& row : r.rows) os << row.kind << ',' << row.d << ',' << row.checked << ',' << row.failures << '\n';
}

void report_counterexamples(const SweepReport& r, std::ostream& err) {
  for (const auto& t : r.counterexamples) {
    err << "counterexample:";
    for (int x : t) err << ' ' << x;
    err << '\n';
  }
}

int cmd_vanishing(const Common& c, int max_d, int l_bound, std::uint64_t random_count, int random_max_d,
                  int random_l_bound, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  std::ostringstream os;
  os << "kind,d,checked,failures\n";
  const SweepReport ex = vanishing_sweep_exhaustive(max_d, l_bound);
  sweep_csv(os, ex);
  std::uint64_t failures = ex.total_failures();
  report_counterexamples(ex, err);
  if (random_count > 0) {
    const SweepReport rnd = vanishing_sweep_random(random_count, random_max_d, random_l_bound, seed);
    sweep_csv(os, rnd);
    failures += rnd.total_failures();
    report_counterexamples(rnd, err);
  }
  Emitter(c.out, out).emit(os.str());
  return failures ? kExitProperty : kExitOk;
}

int cmd_combi(const Common& c, int max_d, std::ostream& out, std::ostream& err) {
  const SweepReport r = combi_sweep(max_d);
  std::ostringstream os;
  os << "kind,d,checked,failures\n";
  sweep_csv(os, r);
  report_counterexamples(r, err);
  Emitter(c.out, out).emit(os.str());
  return r.total_failures() ? kExitProperty : kExitOk;
}

int cmd_continuity(const Common& c, const ContinuityConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepTable tab = sweep(cfg);
  std::ostringstream os;
  os << "m,delta,d0,dt,ratio,omega_gap_pred,omega_gap_meas,phase_bound_ok\n";
  bool ok = true;
  for (const auto& r : tab.rows) {
    os << r.m << ',' << fmt(r.delta) << ',' << fmt(r.d0) << ',' << fmt(r.dt) << ',' << fmt(r.ratio) << ','
       << fmt(r.omega_gap_pred) << ',' << fmt(r.omega_gap_meas) << ',' << (r.phase_bound_ok ? 1 : 0) << '\n';
    ok = ok && r.phase_bound_ok && r.lower_bound_ok;
  }
  Emitter(c.out, out).emit(os.str());
  err << "probes=" << tab.rows.size() << " loglog_slope=" << fmt(tab.slope) << " expected=" << fmt(-cfg.s / 2) << '\n';
  return ok ? kExitOk : kExitProperty;
}

int cmd_bracket(const Common& c, int n_max, double h, std::ostream& out) {
  const Potential u = load_potential(c.in);
  TransformOptions o = transform_opts(c);
  o.modes = 0;
  const CanonicalMatrices cm = canonical_relations(u, n_max, o, h);
  json pc = json::array(), pp = json::array();
  double dev = 0.0;
  for (int n = 0; n < n_max; ++n) {
    json r1 = json::array(), r2 = json::array();
    for (int m = 0; m < n_max; ++m) {
      r1.push_back({{"re", cm.plus_conj(n, m).real()}, {"im", cm.plus_conj(n, m).imag()}});
      r2.push_back({{"re", cm.plus_plus(n, m).real()}, {"im", cm.plus_plus(n, m).imag()}});
      const cplx expect = n == m ? cplx(0.0, -1.0) : cplx{};
      dev = std::max({dev, std::abs(cm.plus_conj(n, m) - expect), std::abs(cm.plus_plus(n, m))});
    }
    pc.push_back(r1);
    pp.push_back(r2);
  }
  json j{{"n_max", n_max}, {"h", h}, {"zeta_conj_zeta", pc}, {"zeta_zeta", pp}, {"max_deviation", dev}};
  Emitter(c.out, out).emit(j.dump(2) + "\n");
  return kExitOk;
}

int cmd_random(const Common& c, int N, double s, double norm, double norm_beta, std::uint64_t seed, std::ostream& out) {
  std::mt19937_64 rng(seed);
  const Potential u = random_real_potential(rng, N, s, norm, norm_beta);
  Emitter(c.out, out).emit(potential_to_json(u).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Birkhoff coordinates for periodic Benjamin-Ono"};
  app.name("bobnf");
  app.require_subcommand(1);
  Common c;

  auto* sp = app.add_subcommand("spectrum", "eigenvalues, gaps and audits of the truncated Lax operator");
  add_io_flags(sp, c, true);
  add_lax_flags(sp, c);

  int series_check = 0;
  auto* tr = app.add_subcommand("transform", "Birkhoff coordinates of a potential");
  add_io_flags(tr, c, true);
  add_lax_flags(tr, c);
  tr->add_option("--series-check", series_check, "validate Psi against its Taylor series up to this order");

  auto* inv = app.add_subcommand("inverse", "Newton inversion of a Birkhoff state");
  add_io_flags(inv, c, true);
  add_lax_flags(inv, c);
  inv->add_option("--tol-newton", c.tol_newton);
  inv->add_option("--max-iter", c.max_iter);

  double t0 = 0.0, t1 = 1.0;
  int samples = 5;
  std::string csv;
  auto* ev = app.add_subcommand("evolve", "solution map through Birkhoff coordinates");
  add_io_flags(ev, c, true);
  add_lax_flags(ev, c);
  ev->add_option("--t0", t0);
  ev->add_option("--t1", t1);
  ev->add_option("--samples", samples);
  ev->add_option("--tol-newton", c.tol_newton);
  ev->add_option("--max-iter", c.max_iter);
  ev->add_option("--csv", csv, "CSV file for action drift and inversion residuals");

  int grid = 64;
  double dt = 1e-3;
  auto* cmp = app.add_subcommand("compare", "direct integrator vs Birkhoff trajectory");
  add_io_flags(cmp, c, true);
  add_lax_flags(cmp, c);
  cmp->add_option("--t1", t1);
  cmp->add_option("--samples", samples);
  cmp->add_option("--grid", grid);
  cmp->add_option("--dt", dt);
  cmp->add_option("--tol-newton", c.tol_newton);

  int max_d = 4, l_bound = 6, random_max_d = 6, random_l_bound = 50;
  std::uint64_t random_count = 0, seed = 1;
  auto* van = app.add_subcommand("vanishing", "exact residue identity sweep");
  van->add_option("--out", c.out);
  van->add_option("--max-d", max_d);
  van->add_option("--l-bound", l_bound);
  van->add_option("--random-count", random_count);
  van->add_option("--random-max-d", random_max_d);
  van->add_option("--random-l-bound", random_l_bound);
  van->add_option("--seed", seed);

  int combi_d = 8;
  auto* cb = app.add_subcommand("combi", "exhaustive combinatorial identity check");
  cb->add_option("--out", c.out);
  cb->add_option("--max-d", combi_d);

  ContinuityConfig cc;
  int n_base = 2;
  auto* ct = app.add_subcommand("continuity", "modulus-of-continuity probes in Birkhoff coordinates");
  ct->add_option("--out", c.out);
  ct->add_option("--s", cc.s);
  ct->add_option("--t", cc.t);
  ct->add_option("--k", cc.k);
  ct->add_option("--n-base", n_base);
  ct->add_option("--max-m", cc.max_m);
  ct->add_option("--max-probes", cc.max_probes);
  ct->add_option("--delta", cc.delta, "perturbation size (default delta(t))");

  int n_max = 3;
  double h = 1e-5;
  auto* br = app.add_subcommand("bracket", "canonical relations of the Birkhoff coordinates");
  add_io_flags(br, c, true);
  add_lax_flags(br, c);
  br->add_option("--n-max", n_max);
  br->add_option("--fd-step", h, "finite-difference step");

  int rN = 8;
  double rs = 0.0, rnorm = 0.05, rbeta = 0.5;
  auto* rnd = app.add_subcommand("random", "seeded random real potential");
  rnd->add_option("--out", c.out);
  rnd->add_option("--N", rN);
  rnd->add_option("--s", rs);
  rnd->add_option("--norm", rnorm);
  rnd->add_option("--norm-beta", rbeta);
  rnd->add_option("--seed", seed);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*sp) return cmd_spectrum(c, out);
    if (*tr) return cmd_transform(c, series_check, out);
    if (*inv) return cmd_inverse(c, out);
    if (*ev) return cmd_evolve(c, t0, t1, samples, csv, out);
    if (*cmp) return cmd_compare(c, t1, samples, grid, dt, out);
    if (*van) return cmd_vanishing(c, max_d, l_bound, random_count, random_max_d, random_l_bound, seed, out, err);
    if (*cb) return cmd_combi(c, combi_d, out, err);
    if (*ct) {
      cc.base = default_base(n_base);
      return cmd_continuity(c, cc, out, err);
    }
    if (*br) return cmd_bracket(c, n_max, h, out);
    if (*rnd) return cmd_random(c, rN, rs, rnorm, rbeta, seed, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInvalid;
}

}  // namespace bo
