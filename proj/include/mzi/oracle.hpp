#pragma once

// Brute-force references kept apart from the production paths: adaptive
// Simpson quadrature, the characteristic function of a momentum law, erf by
// direct quadrature, and the check suites behind `mzi check`.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "mzi/scattering.hpp"

namespace mzi::oracle {

// adaptive Simpson with Richardson correction; `tol` is absolute
std::complex<double> adaptive_simpson(const std::function<std::complex<double>(double)>& f, double a,
                                      double b, double tol, int max_depth = 60);

// chi(d_p) = int_0^{2k_i} P(u) e^{i d_p u} du; point laws evaluate directly
std::complex<double> characteristic_function(const MomentumDistribution& dist, double dp, double k_i,
                                             double tol = 1e-12);

// erf z = (2/sqrt(pi)) int_0^1 z e^{-(z s)^2} ds along the straight path
std::complex<double> erf_by_quadrature(std::complex<double> z, double tol = 1e-15);

struct CheckResult {
  std::string name;
  bool pass;
  double value;
  double tolerance;
  std::string detail;
};

// spectral vs Fresnel-Kirchhoff on a critically sampled 4096-point grid
std::vector<CheckResult> check_propagators(const PhysicalSetup& s);
// closed-form kick vs boost-then-propagate
std::vector<CheckResult> check_kick_routes(const PhysicalSetup& s);
// closed-form visibilities vs characteristic-function quadrature
std::vector<CheckResult> check_analytic(const PhysicalSetup& s, double gaussian_N);

}  // namespace mzi::oracle
