#pragma once

#include <complex>
#include <stdexcept>

namespace mzi {

struct AnalyticVisibility {
  double V;    // signed for uniform / Mandel-Wolf
  double phi;  // radians
};

// erf on |z| <= 20; Maclaurin series inside the series region, Laplace
// continued fraction for erfc outside it. Throws std::domain_error beyond 20.
std::complex<double> erf_complex(std::complex<double> z);
inline constexpr double erf_domain = 20.0;

// sin(d_p k_i)/(d_p k_i), phi = d_p k_i
AnalyticVisibility visibility_uniform(double dp, double k_i);
// dipole law; phi = d_p k_i
AnalyticVisibility visibility_mandel_wolf(double dp, double lambda_i);
// truncated Gaussian of width N k_i; V >= 0, phi = arg of the erf numerator in (-pi, pi]
AnalyticVisibility visibility_gaussian(double dp, double k_i, double N);
// literal (1/2i) ln(z / z*) form of the Gaussian phase; agrees with
// visibility_gaussian(...).phi modulo pi
double gaussian_phase_log_form(double dp, double k_i, double N);

}  // namespace mzi
