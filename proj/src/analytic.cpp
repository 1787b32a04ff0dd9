#include "mzi/analytic.hpp"

#include <cmath>

#include "mzi/types.hpp"

namespace mzi {

namespace {

using cld = std::complex<long double>;

// series region: small |z|, or close enough to the imaginary axis that the
// alternating terms do not cancel (loss ~ e^{2 Re(z)^2})
constexpr double series_radius = 3.0;
constexpr double series_real_limit = 2.5;

std::complex<double> erf_series(std::complex<double> zd)
{
  // erf z = 2/sqrt(pi) sum (-1)^n z^{2n+1} / (n! (2n+1))
  const cld z(zd.real(), zd.imag());
  const cld z2 = z * z;
  cld term = z;  // (-1)^n z^{2n+1} / n!
  cld sum = z;
  for (int n = 1; n < 4000; ++n) {
    term *= -z2 / static_cast<long double>(n);
    const cld add = term / static_cast<long double>(2 * n + 1);
    sum += add;
    if (std::abs(add) <= 1e-21L * std::abs(sum) && static_cast<long double>(n) > std::norm(z)) break;
  }
  sum *= 2.0L / std::sqrt(std::numbers::pi_v<long double>);
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

// Re z > 0: erfc z = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
std::complex<double> erfc_continued_fraction(std::complex<double> zd)
{
  const cld z(zd.real(), zd.imag());
  // modified Lentz on b0 + a1/(b1 + a2/(b2 + ...)), b_j = z, a_j = j/2
  const long double tiny = 1e-300L;
  cld f = z, c = z, d = 0;
  for (int j = 1; j < 5000; ++j) {
    const long double a = 0.5L * j;
    d = z + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = z + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const cld delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0L) < 1e-20L) break;
  }
  const cld r = std::exp(-z * z) / (std::sqrt(std::numbers::pi_v<long double>) * f);
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

}  // namespace

std::complex<double> erf_complex(std::complex<double> z)
{
  if (!(std::abs(z) <= erf_domain)) throw std::domain_error("erf_complex: |z| beyond 20");
  if (std::abs(z) <= series_radius || std::abs(z.real()) < series_real_limit) return erf_series(z);
  // odd symmetry folds the left half-plane onto Re z > 0
  if (z.real() < 0) return -erf_complex(-z);
  return 1.0 - erfc_continued_fraction(z);
}

AnalyticVisibility visibility_uniform(double dp, double k_i)
{
  if (!(dp >= 0)) throw std::invalid_argument("d_p must be >= 0");
  const double a = dp * k_i;
  return {a == 0 ? 1.0 : std::sin(a) / a, a};
}

AnalyticVisibility visibility_mandel_wolf(double dp, double lambda_i)
{
  if (!(dp >= 0)) throw std::invalid_argument("d_p must be >= 0");
  const double a = two_pi * dp / lambda_i;  // d_p k_i
  double V;
  if (a < 1.0) {
    // V = (3/4) sum (-1)^n a^{2n}/(2n)! * 4(n+1)/((2n+1)(2n+3))
    double term = 1.0, sum = 0.0;
    for (int n = 0; n < 30; ++n) {
      if (n > 0) term *= -a * a / double((2 * n - 1) * (2 * n));
      sum += term * 4.0 * (n + 1) / double((2 * n + 1) * (2 * n + 3));
    }
    V = 0.75 * sum;
  } else {
    V = 3.0 / (4 * pi) * (lambda_i / dp) *
        (std::sin(a) + std::cos(a) / a - std::sin(a) / (a * a));
  }
  return {V, a};
}

namespace {
std::complex<double> gaussian_numerator(double dp, double k_i, double N)
{
  const double alpha = N * k_i * dp;
  const std::complex<double> ia2(0.0, alpha / 2);
  return erf_complex(2.0 / N - ia2) + erf_complex(ia2);
}
}  // namespace

AnalyticVisibility visibility_gaussian(double dp, double k_i, double N)
{
  if (!(dp >= 0)) throw std::invalid_argument("d_p must be >= 0");
  if (!(N > 0 && N <= 4)) throw std::invalid_argument("Gaussian width N must lie in (0, 4]");
  const double alpha = N * k_i * dp;
  const std::complex<double> num = gaussian_numerator(dp, k_i, N);
  const double V = std::abs(num) / std::erf(2.0 / N) * std::exp(-alpha * alpha / 4);
  double phi = std::arg(num);
  if (phi <= -pi) phi += two_pi;
  return {V, phi};
}

double gaussian_phase_log_form(double dp, double k_i, double N)
{
  const std::complex<double> num = gaussian_numerator(dp, k_i, N);
  const std::complex<double> l = std::log(num / std::conj(num));
  return (l / std::complex<double>(0.0, 2.0)).real();
}

}  // namespace mzi
