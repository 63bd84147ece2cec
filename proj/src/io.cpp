#include "bo/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bo/errors.hpp"

namespace bo {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw InvalidInput(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw InvalidInput(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

bool boolean(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_boolean()) throw InvalidInput(std::string("field \"") + key + "\" must be a boolean");
  return v.get<bool>();
}

json entry(int n, cplx z) { return json{{"n", n}, {"re", z.real()}, {"im", z.imag()}}; }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json potential_to_json(const Potential& u) {
  json coeffs = json::array();
  const int N = u.cutoff();
  for (int n = u.is_real() ? 1 : -N; n <= N; ++n)
    if (n != 0) coeffs.push_back(entry(n, u[n]));
  return json{{"s", u.s()}, {"N", N}, {"real", u.is_real()}, {"coeffs", coeffs}};
}

Potential potential_from_json(const json& j) {
  const double s = number(j, "s");
  const int N = integer(j, "N");
  const bool real = boolean(j, "real");
  const json& cs = field(j, "coeffs");
  if (!cs.is_array()) throw InvalidInput("\"coeffs\" must be an array");
  if (N < 1) throw InvalidInput("N must be >= 1");
  std::vector<cplx> c(static_cast<std::size_t>(2 * N + 1));
  std::vector<char> seen(c.size(), 0);
  for (const auto& e : cs) {
    const int n = integer(e, "n");
    const cplx z(number(e, "re"), number(e, "im"));
    if (n == 0) throw InvalidInput("coefficient n=0 is not allowed (mean-zero potential)");
    if (std::abs(n) > N) throw InvalidInput("coefficient n=" + std::to_string(n) + " exceeds N");
    if (real && n < 0) throw InvalidInput("real potentials store only n >= 1; n=" + std::to_string(n) + " given");
    auto idx = static_cast<std::size_t>(n + N);
    if (seen[idx]) throw InvalidInput("duplicate coefficient n=" + std::to_string(n));
    seen[idx] = 1;
    c[idx] = z;
    if (real) c[static_cast<std::size_t>(N - n)] = std::conj(z);
  }
  return Potential(N, s, real, std::move(c));
}

json birkhoff_to_json(const BirkhoffState& z, const TransformDiagnostics* diag) {
  json plus = json::array(), minus = json::array();
  for (int n = 1; n <= z.modes(); ++n) {
    plus.push_back(entry(n, z.at(n)));
    minus.push_back(entry(-n, z.at(-n)));
  }
  json j{{"s", z.s}, {"N_b", z.modes()}, {"real", z.real}, {"plus", plus}, {"minus", minus}};
  if (diag)
    j["diagnostics"] = json{{"kappa_tail", finite_or_null(diag->kappa_tail)},
                            {"mu_tail", finite_or_null(diag->mu_tail)},
                            {"norm_drift", finite_or_null(diag->norm_drift)},
                            {"chain_drift", finite_or_null(diag->chain_drift)}};
  return j;
}

BirkhoffState birkhoff_from_json(const json& j) {
  const double s = number(j, "s");
  const int Nb = integer(j, "N_b");
  if (Nb < 1) throw InvalidInput("N_b must be >= 1");
  BirkhoffState z = BirkhoffState::zero(Nb, s);
  z.real = j.contains("real") ? boolean(j, "real") : true;
  auto load = [&](const char* key, int sign, std::vector<cplx>& dst, bool required) {
    if (!j.contains(key)) {
      if (required) throw InvalidInput(std::string("missing field \"") + key + "\"");
      return;
    }
    const json& arr = j.at(key);
    if (!arr.is_array()) throw InvalidInput(std::string("\"") + key + "\" must be an array");
    for (const auto& e : arr) {
      const int n = integer(e, "n");
      if (n * sign <= 0 || std::abs(n) > Nb)
        throw InvalidInput(std::string("bad index n=") + std::to_string(n) + " in \"" + key + "\"");
      dst[static_cast<std::size_t>(std::abs(n) - 1)] = cplx(number(e, "re"), number(e, "im"));
    }
  };
  load("plus", 1, z.plus, true);
  load("minus", -1, z.minus, !z.real);
  if (z.real) {
    const bool has_minus = j.contains("minus");
    for (int n = 0; n < Nb; ++n) {
      const cplx c = std::conj(z.plus[static_cast<std::size_t>(n)]);
      if (has_minus && std::abs(z.minus[static_cast<std::size_t>(n)] - c) > 1e-12 * std::max(1.0, std::abs(c)))
        throw InvalidInput("real state requires zeta_{-n} = conj(zeta_n)");
      z.minus[static_cast<std::size_t>(n)] = c;
    }
  }
  return z;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "malformed JSON at byte " << e.byte << ": " << e.what();
    throw InvalidInput(os.str());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

}  // namespace bo
