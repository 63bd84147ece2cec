#include "bo/residue.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <random>

#include "bo/errors.hpp"
#include "bo/parallel.hpp"

namespace bo {

Rational vanishing_D(const std::vector<int>& l) {
  if (l.empty()) throw InvalidInput("vanishing_D needs a nonempty tuple");
  Rational r = vanishing_D_t<Rational>(l);
  r.canonicalize();
  return r;
}

CombiResult combi_check(const PartitionInstance& p) {
  const int d = p.d;
  std::vector<int> inJ(static_cast<std::size_t>(d + 2), 0), qv(static_cast<std::size_t>(d + 2), 0);
  std::vector<char> inK(static_cast<std::size_t>(d + 2), 0);
  for (int j : p.J) inJ[static_cast<std::size_t>(j)] = 1;
  for (std::size_t i = 0; i < p.K.size(); ++i) {
    inK[static_cast<std::size_t>(p.K[i])] = 1;
    qv[static_cast<std::size_t>(p.K[i])] = p.q[i];
  }
  // prefix counts: |J_m| = cj[m], S(K_m) = sq[m]
  std::vector<int> cj(static_cast<std::size_t>(d + 1), 0), sq(static_cast<std::size_t>(d + 1), 0);
  for (int m = 1; m <= d; ++m) {
    cj[static_cast<std::size_t>(m)] = cj[static_cast<std::size_t>(m - 1)] + inJ[static_cast<std::size_t>(m)];
    sq[static_cast<std::size_t>(m)] = sq[static_cast<std::size_t>(m - 1)] + qv[static_cast<std::size_t>(m)];
  }
  const int totJ = cj[static_cast<std::size_t>(d)], totQ = sq[static_cast<std::size_t>(d)];
  CombiResult r;
  for (int m = 1; m <= d; ++m) {
    const auto um = static_cast<std::size_t>(m);
    if (inJ[um]) {
      if (sq[um] == cj[um]) ++r.j_ad;
    } else if (inK[um]) {
      const int left = sq[um] - qv[um];                    // S(K_m \ {m})
      const int right = (totQ - sq[um - 1]) - qv[um];      // S(K'_m \ {m})
      const int jl = cj[um];                               // |J_m|
      const int jr = totJ - cj[um - 1];                    // |J'_m|
      if (left <= jl && right <= jr) ++r.k_ad;
    }
  }
  r.ok = (r.k_ad == r.j_ad + 1);
  return r;
}

std::uint64_t SweepReport::total_checked() const {
  std::uint64_t t = 0;
  for (const auto& r : rows) t += r.checked;
  return t;
}

std::uint64_t SweepReport::total_failures() const {
  std::uint64_t t = 0;
  for (const auto& r : rows) t += r.failures;
  return t;
}

namespace {

constexpr std::size_t kMaxCounterexamples = 8;

struct FailureLog {
  std::mutex mu;
  std::vector<std::vector<int>> items;
  void add(const std::vector<int>& v) {
    std::lock_guard<std::mutex> lock(mu);
    if (items.size() < kMaxCounterexamples) items.push_back(v);
  }
};

// Parallel check of a batch of tuples; returns the failure count.
std::uint64_t check_tuples(std::size_t count, const std::function<std::vector<int>(std::size_t)>& tuple_at,
                           FailureLog& log) {
  std::atomic<std::uint64_t> failures{0};
  const std::size_t chunk = 256;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t hi = std::min(count, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < hi; ++i) {
      auto l = tuple_at(i);
      if (vanishing_D(l) != 0) {
        failures.fetch_add(1);
        log.add(l);
      }
    }
  });
  return failures.load();
}

}  // namespace

SweepReport vanishing_sweep_exhaustive(int max_d, int l_bound) {
  if (max_d < 1 || l_bound < 0) throw InvalidInput("vanishing sweep needs max_d >= 1 and l_bound >= 0");
  SweepReport rep;
  FailureLog log;
  const int base = 2 * l_bound + 1;
  for (int d = 1; d <= max_d; ++d) {
    std::size_t count = 1;
    for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(base);
    auto tuple_at = [&](std::size_t idx) {
      std::vector<int> l(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        l[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(base)) - l_bound;
        idx /= static_cast<std::size_t>(base);
      }
      return l;
    };
    SweepRow row{"exhaustive", d, count, check_tuples(count, tuple_at, log)};
    rep.rows.push_back(row);
  }
  rep.counterexamples = log.items;
  return rep;
}

SweepReport vanishing_sweep_random(std::uint64_t count, int max_d, int l_bound, std::uint64_t seed) {
  if (max_d < 1 || l_bound < 0) throw InvalidInput("vanishing sweep needs max_d >= 1 and l_bound >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> D(1, max_d), L(-l_bound, l_bound);
  std::vector<std::vector<int>> tuples(count);
  for (auto& t : tuples) {
    t.resize(static_cast<std::size_t>(D(rng)));
    for (auto& x : t) x = L(rng);
  }
  FailureLog log;
  std::vector<std::atomic<std::uint64_t>> fails(static_cast<std::size_t>(max_d + 1));
  std::vector<std::uint64_t> seen(static_cast<std::size_t>(max_d + 1), 0);
  for (const auto& t : tuples) ++seen[t.size()];
  parallel_for((tuples.size() + 255) / 256, [&](std::size_t c) {
    const std::size_t hi = std::min(tuples.size(), (c + 1) * 256);
    for (std::size_t i = c * 256; i < hi; ++i)
      if (vanishing_D(tuples[i]) != 0) {
        fails[tuples[i].size()].fetch_add(1);
        log.add(tuples[i]);
      }
  });
  SweepReport rep;
  for (int d = 1; d <= max_d; ++d)
    rep.rows.push_back({"random", d, seen[static_cast<std::size_t>(d)], fails[static_cast<std::size_t>(d)].load()});
  rep.counterexamples = log.items;
  return rep;
}

SweepReport combi_sweep(int max_d) {
  if (max_d < 1) throw InvalidInput("combi sweep needs max_d >= 1");
  SweepReport rep;
  FailureLog log;
  for (int d = 1; d <= max_d; ++d) {
    const std::size_t masks = (std::size_t{1} << d);
    std::vector<std::uint64_t> checked(masks, 0), failed(masks, 0);
    // mask selects K; J is the complement
    parallel_for(masks - 1, [&](std::size_t i) {
      const std::size_t mask = i + 1;
      PartitionInstance p;
      p.d = d;
      for (int m = 1; m <= d; ++m) ((mask >> (m - 1)) & 1 ? p.K : p.J).push_back(m);
      const int total = static_cast<int>(p.J.size()) + 1;
      const int parts = static_cast<int>(p.K.size());
      p.q.assign(static_cast<std::size_t>(parts), 0);
      // enumerate compositions of total into parts nonnegative pieces
      std::function<void(int, int)> rec = [&](int idx, int left) {
        if (idx == parts - 1) {
          p.q[static_cast<std::size_t>(idx)] = left;
          ++checked[mask];
          if (!combi_check(p).ok) {
            ++failed[mask];
            std::vector<int> enc{d};
            enc.insert(enc.end(), p.K.begin(), p.K.end());
            enc.push_back(-1);
            enc.insert(enc.end(), p.q.begin(), p.q.end());
            log.add(enc);
          }
          return;
        }
        for (int v = 0; v <= left; ++v) {
          p.q[static_cast<std::size_t>(idx)] = v;
          rec(idx + 1, left - v);
        }
      };
      rec(0, total);
    });
    SweepRow row{"combi", d, 0, 0};
    for (std::size_t m = 0; m < masks; ++m) {
      row.checked += checked[m];
      row.failures += failed[m];
    }
    rep.rows.push_back(row);
  }
  rep.counterexamples = log.items;
  return rep;
}

namespace {

// Enumerates paths l_1..l_d with l_1, l_{j+1}-l_j, -l_d in the support of u
// and all l_j >= -n, calling visit(path, E_u(path)).
void for_each_path(const Potential& u, int n, int d, const std::function<void(const std::vector<int>&, cplx)>& visit) {
  std::vector<int> supp;
  for (int k = -u.cutoff(); k <= u.cutoff(); ++k)
    if (u[k] != cplx{}) supp.push_back(k);
  if (supp.empty()) return;
  std::vector<int> path(static_cast<std::size_t>(d));
  std::function<void(int, cplx)> rec = [&](int depth, cplx weight) {
    if (depth == d) {
      const cplx last = u[-path[static_cast<std::size_t>(d - 1)]];
      if (last != cplx{}) visit(path, weight * last);
      return;
    }
    const int prev = depth == 0 ? 0 : path[static_cast<std::size_t>(depth - 1)];
    for (int step : supp) {
      const int l = prev + step;
      if (l < -n) continue;
      path[static_cast<std::size_t>(depth)] = l;
      rec(depth + 1, weight * u[step]);
    }
  };
  rec(0, cplx(1.0, 0.0));
}

template <class Weight>
cplx delta_sum(const Potential& u, int n, int d_max, Weight weight) {
  cplx total{};
  for (int d = 2; d <= d_max; ++d) {
    for_each_path(u, n, d, [&](const std::vector<int>& p, cplx E) {
      for (int m = 1; m < d; ++m) {
        bool prefix_hit = false;
        for (int j = 0; j < m; ++j) prefix_hit |= (p[static_cast<std::size_t>(j)] == -n);
        if (prefix_hit) continue;
        bool later = false;
        for (int j = m; j < d; ++j) later |= (p[static_cast<std::size_t>(j)] == -n);
        if (!later) continue;
        std::vector<int> left(p.begin(), p.begin() + m), right(p.begin() + (m - 1), p.end());
        total += weight(left, right) * E;
      }
    });
  }
  return total;
}

}  // namespace

DeltaSeries delta_series(const Potential& u, int n, int d_max, double tail_constant, double tol) {
  if (n < 1) throw InvalidInput("delta_series needs n >= 1");
  if (d_max < 2) throw InvalidInput("delta_series needs d_max >= 2");
  DeltaSeries out;
  out.value = delta_sum(u, n, d_max, [](const std::vector<int>& a, const std::vector<int>& b) {
    return residue_A<double>(a) * residue_A<double>(b);
  });
  out.tail = std::pow(tail_constant * sobolev_norm(u, u.s()), d_max + 1);
  out.converged = out.tail < tol;
  return out;
}

cplx delta_series_exact_weights(const Potential& u, int n, int d_max) {
  if (n < 1 || d_max < 2) throw InvalidInput("delta_series needs n >= 1 and d_max >= 2");
  return delta_sum(u, n, d_max, [](const std::vector<int>& a, const std::vector<int>& b) {
    Rational w = residue_A_exact(a) * residue_A_exact(b);
    return w.get_d();
  });
}

}  // namespace bo
