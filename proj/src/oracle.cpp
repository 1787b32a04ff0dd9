#include "mzi/oracle.hpp"

#include <cmath>
#include <sstream>

#include "mzi/analytic.hpp"

namespace mzi::oracle {

namespace {

using Fn = std::function<std::complex<double>(double)>;

std::complex<double> simpson_step(const Fn& f, double a, double b, std::complex<double> fa,
                                  std::complex<double> fm, std::complex<double> fb,
                                  std::complex<double> whole, double tol, int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const auto flm = f(lm), frm = f(rm);
  const auto left = (m - a) / 6 * (fa + 4.0 * flm + fm);
  const auto right = (b - m) / 6 * (fm + 4.0 * frm + fb);
  const auto delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

std::string fmt(double v)
{
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

}  // namespace

std::complex<double> adaptive_simpson(const Fn& f, double a, double b, double tol, int max_depth)
{
  // seed on a few panels so oscillatory integrands are not judged converged early
  const int panels = 16;
  std::complex<double> total = 0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
    const auto flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
    const auto whole = (hi - lo) / 6 * (flo + 4.0 * fmid + fhi);
    total += simpson_step(f, lo, hi, flo, fmid, fhi, whole, tol / panels, max_depth);
  }
  return total;
}

std::complex<double> characteristic_function(const MomentumDistribution& dist, double dp, double k_i,
                                             double tol)
{
  if (const auto* p = std::get_if<PointLaw>(&dist)) return std::polar(1.0, dp * p->dkx);
  // integrate in t = u / k_i on [0, 2]
  auto f = [&](double t) { return k_i * density(dist, k_i * t, k_i) * std::polar(1.0, dp * k_i * t); };
  if (const auto* tab = std::get_if<TabulatedLaw>(&dist)) {
    // piecewise: integrate panel by panel so the kinks sit on panel edges
    std::complex<double> sum = 0;
    for (std::size_t i = 1; i < tab->u_over_ki.size(); ++i)
      sum += adaptive_simpson(f, tab->u_over_ki[i - 1], tab->u_over_ki[i], tol / double(tab->u_over_ki.size()));
    return sum;
  }
  return adaptive_simpson(f, 0.0, 2.0, tol);
}

std::complex<double> erf_by_quadrature(std::complex<double> z, double tol)
{
  auto f = [&](double s) { return z * std::exp(-(z * s) * (z * s)); };
  // scale the tolerance to the integrand so large |erf| still get relative accuracy
  const double scale = std::max(1.0, std::abs(z) * std::exp(std::max(0.0, -std::real(z * z))));
  return 2.0 / std::sqrt(pi) * adaptive_simpson(f, 0.0, 1.0, tol * scale);
}

std::vector<CheckResult> check_propagators(const PhysicalSetup& s)
{
  std::vector<CheckResult> out;
  const Eigen::Index n = 4096;
  const double lambda = two_pi / s.k;
  for (double dy : {1e-3, 0.65}) {
    // critical sampling N dx^2 = lambda dy: the discrete Fresnel kernel is
    // then N-periodic, so the periodic (spectral) and direct sums coincide
    const double dx = std::sqrt(lambda * dy / double(n));
    const auto g = Grid1D<double>::centered(dx * double(n), n);
    const auto exit = apply_mask(plane_wave(g, s), GratingMask::finite(s));
    const auto a = propagate_spectral(exit, dy);
    const auto b = propagate_kirchhoff(exit, dy);
    const double err = std::sqrt((a.phased() - b.phased()).abs2().sum() / a.samples.abs2().sum());
    out.push_back({"propagator spectral vs Kirchhoff, dy = " + fmt(dy) + " m", err <= 1e-6, err, 1e-6,
                   "N = 4096, dx = " + fmt(dx) + " m"});
  }
  return out;
}

std::vector<CheckResult> check_kick_routes(const PhysicalSetup& s)
{
  std::vector<CheckResult> out;
  const Eigen::Index n = 1 << 16;
  // width commensurate with every kick dk = j k_i / 2, so e^{i dk x} is periodic
  const double lambda_i = two_pi / s.k_i;
  const auto g = Grid1D<double>::centered(348 * lambda_i, n);
  const auto exit = apply_mask(plane_wave(g, s), GratingMask::finite(s));
  const auto spec = spectrum(exit);
  const double yp = dp_ratio_to_y12prime(0.3, s);
  const auto at_event = propagate_spectral(exit, yp);
  for (double f : {0.5, 1.0, 1.5, 2.0}) {
    const KickEvent e{f * s.k_i, yp};
    const auto closed = kick_closed_form(spec, e, s.y12, s.k);
    const auto boosted = kick_boost_route(at_event, e, s.y12 - yp);
    const ArrayXd I1 = closed.samples.abs2(), I2 = boosted.samples.abs2();
    Eigen::Index ipk = 0;
    const double peak = I1.maxCoeff(&ipk);
    const double di = (I1 - I2).abs().maxCoeff() / peak;
    const auto ref = closed.samples[ipk] / boosted.samples[ipk];
    double dphi = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (I1[j] > 1e-6 * peak)
        dphi = std::max(dphi, std::abs(std::arg(closed.samples[j] / boosted.samples[j] / ref)));
    const std::string tag = "dk = " + fmt(f) + " k_i";
    out.push_back({"kick routes |psi|^2, " + tag, di <= 1e-8, di, 1e-8, "y = y12, y' = y'(0.3)"});
    out.push_back({"kick routes phase ratio spread, " + tag, dphi <= 1e-6, dphi, 1e-6, "where |psi|^2 > 1e-6 peak"});
  }
  return out;
}

std::vector<CheckResult> check_analytic(const PhysicalSetup& s, double gaussian_N)
{
  std::vector<CheckResult> out;
  const double lambda_i = two_pi / s.k_i;
  struct Law {
    const char* name;
    MomentumDistribution dist;
  };
  const Law laws[] = {{"uniform", UniformLaw{}}, {"mw", MandelWolfLaw{}}, {"gauss", TruncatedGaussianLaw{gaussian_N}}};
  for (const auto& law : laws) {
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
      const double ratio = 2.0 * i / 49;
      const double dp = ratio * lambda_i;
      AnalyticVisibility v{};
      switch (law.dist.index()) {
        case 1: v = visibility_uniform(dp, s.k_i); break;
        case 2: v = visibility_mandel_wolf(dp, lambda_i); break;
        default: v = visibility_gaussian(dp, s.k_i, gaussian_N); break;
      }
      const auto chi = characteristic_function(law.dist, dp, s.k_i);
      worst = std::max(worst, std::abs(v.V * std::polar(1.0, v.phi) - chi));
    }
    out.push_back({std::string("analytic vs characteristic function, ") + law.name, worst <= 1e-8, worst, 1e-8,
                   "50 ratios in [0, 2]"});
  }
  return out;
}

}  // namespace mzi::oracle
