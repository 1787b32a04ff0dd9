#include "mzi/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mzi {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// exact integral of the piecewise-linear table over [0, 2] (in u/k_i)
double table_mass(const TabulatedLaw& t)
{
  double m = 0;
  for (std::size_t i = 1; i < t.u_over_ki.size(); ++i)
    m += 0.5 * (t.density[i] + t.density[i - 1]) * (t.u_over_ki[i] - t.u_over_ki[i - 1]);
  return m;
}

double table_value(const TabulatedLaw& t, double s)
{
  const auto& xs = t.u_over_ki;
  if (s < xs.front() || s > xs.back()) return 0;
  auto it = std::upper_bound(xs.begin(), xs.end(), s);
  if (it == xs.end()) return t.density.back();
  const std::size_t i = std::size_t(it - xs.begin());
  const double f = (s - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return t.density[i - 1] + f * (t.density[i] - t.density[i - 1]);
}
}  // namespace

void validate(const KickEvent& e, const PhysicalSetup& s)
{
  if (!(e.dkx >= 0 && e.dkx <= 2 * s.k_i * (1 + 1e-12)))
    throw std::invalid_argument("transferred momentum must lie in [0, 2 k_i]");
  if (!(e.y12prime >= 0 && e.y12prime < s.y12))
    throw std::invalid_argument("scattering location must lie in [0, y12)");
}

std::string name_of(const MomentumDistribution& dist)
{
  return std::visit(overloaded{[](const PointLaw&) { return std::string("point"); },
                               [](const UniformLaw&) { return std::string("uniform"); },
                               [](const MandelWolfLaw&) { return std::string("mw"); },
                               [](const TruncatedGaussianLaw&) { return std::string("gauss"); },
                               [](const TabulatedLaw&) { return std::string("table"); }},
                    dist);
}

double density(const MomentumDistribution& dist, double u, double k_i)
{
  if (u < 0 || u > 2 * k_i) return 0;
  return std::visit(
      overloaded{[](const PointLaw&) { return 0.0; },
                 [&](const UniformLaw&) { return 1.0 / (2 * k_i); },
                 [&](const MandelWolfLaw&) {
                   const double t = 1 - u / k_i;
                   return 3.0 / (8 * k_i) * (1 + t * t);
                 },
                 [&](const TruncatedGaussianLaw& g) {
                   // gamma = 2/(N k_i sqrt(pi)), divided by the truncated mass erf(2/N)
                   const double s = u / (g.N * k_i);
                   return 2.0 / (g.N * k_i * std::sqrt(pi)) * std::exp(-s * s) / std::erf(2.0 / g.N);
                 },
                 [&](const TabulatedLaw& t) { return table_value(t, u / k_i) / (table_mass(t) * k_i); }},
      dist);
}

std::optional<double> symmetry_centre(const MomentumDistribution& dist, double k_i)
{
  return std::visit(overloaded{[](const PointLaw& p) -> std::optional<double> { return p.dkx; },
                               [&](const UniformLaw&) -> std::optional<double> { return k_i; },
                               [&](const MandelWolfLaw&) -> std::optional<double> { return k_i; },
                               [](const auto&) -> std::optional<double> { return std::nullopt; }},
                    dist);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
  if (n < 1) throw std::invalid_argument("Gauss-Legendre needs n >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    const double wi = 2.0 / ((1 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0;
}

QuadratureRule quadrature_nodes(const MomentumDistribution& dist, int node_count, double k_i)
{
  if (const auto* p = std::get_if<PointLaw>(&dist)) return {{p->dkx, 1.0}};
  if (node_count < 2) throw std::invalid_argument("quadrature needs node_count >= 2");
  if (const auto* g = std::get_if<TruncatedGaussianLaw>(&dist); g && !(g->N > 0))
    throw std::invalid_argument("Gaussian width N must be positive");
  if (const auto* t = std::get_if<TabulatedLaw>(&dist)) check_tabulated(*t);

  std::vector<double> x, w;
  gauss_legendre(node_count, x, w);
  QuadratureRule rule(node_count);
  for (int j = 0; j < node_count; ++j) {
    const double u = k_i * (x[j] + 1);  // [-1,1] -> [0, 2k_i], jacobian k_i
    rule[j] = {u, density(dist, u, k_i) * w[j] * k_i};
  }
  if (std::holds_alternative<TabulatedLaw>(dist)) {
    double s = 0;
    for (const auto& q : rule) s += q.weight;
    for (auto& q : rule) q.weight /= s;
  }
  return rule;
}

QuadratureRule mix(const QuadratureRule& a, double wa, const QuadratureRule& b, double wb)
{
  QuadratureRule out;
  out.reserve(a.size() + b.size());
  for (const auto& q : a) out.push_back({q.dkx, q.weight * wa});
  for (const auto& q : b) out.push_back({q.dkx, q.weight * wb});
  return out;
}

void check_tabulated(const TabulatedLaw& t)
{
  const auto& xs = t.u_over_ki;
  if (xs.size() < 2 || xs.size() != t.density.size())
    throw std::invalid_argument("tabulated distribution needs >= 2 rows");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 0 && xs[i] <= 2)) throw std::invalid_argument("tabulated abscissa outside [0, 2]");
    if (i && !(xs[i] > xs[i - 1])) throw std::invalid_argument("tabulated abscissa not strictly increasing");
    if (!(t.density[i] >= 0) || !std::isfinite(t.density[i]))
      throw std::invalid_argument("tabulated density must be finite and >= 0");
  }
  if (!(table_mass(t) > 0)) throw std::invalid_argument("tabulated density has zero mass");
}

TabulatedLaw parse_tabulated(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  TabulatedLaw t;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "dkx_over_ki,density")
        throw std::invalid_argument("tabulated CSV: expected header 'dkx_over_ki,density'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("tabulated CSV line " + std::to_string(lineno) + ": expected two columns");
    try {
      std::size_t p1 = 0, p2 = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      t.u_over_ki.push_back(std::stod(a, &p1));
      t.density.push_back(std::stod(b, &p2));
      if (a.find_first_not_of(" \t", p1) != std::string::npos ||
          b.find_first_not_of(" \t", p2) != std::string::npos)
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("tabulated CSV line " + std::to_string(lineno) + ": not a number");
    }
  }
  check_tabulated(t);
  return t;
}

TabulatedLaw load_tabulated(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tabulated distribution '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tabulated(ss.str());
}

}  // namespace mzi
