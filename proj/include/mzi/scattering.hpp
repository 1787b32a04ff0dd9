#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mzi/propagation.hpp"

namespace mzi {

struct KickEvent {
  double dkx;        // transferred momentum, [0, 2 k_i]
  double y12prime;   // distance from grating 1, [0, y12)
};

void validate(const KickEvent& e, const PhysicalSetup& s);

// --- momentum laws on [0, 2 k_i] -------------------------------------------

struct PointLaw { double dkx; };
struct UniformLaw {};
struct MandelWolfLaw {};
struct TruncatedGaussianLaw { double N; };
struct TabulatedLaw {
  std::vector<double> u_over_ki;  // strictly increasing, within [0, 2]
  std::vector<double> density;    // unnormalized, >= 0
};

using MomentumDistribution =
    std::variant<PointLaw, UniformLaw, MandelWolfLaw, TruncatedGaussianLaw, TabulatedLaw>;

std::string name_of(const MomentumDistribution& dist);

// Probability density in 1/(1/m), normalized on [0, 2 k_i]; 0 outside.
// Point laws have no density and return 0.
double density(const MomentumDistribution& dist, double u, double k_i);

// Centre c about which the law is symmetric (chi(d_p) e^{-i d_p c} real), if any.
std::optional<double> symmetry_centre(const MomentumDistribution& dist, double k_i);

struct QuadratureNode {
  double dkx;
  double weight;
};
using QuadratureRule = std::vector<QuadratureNode>;

// Gauss-Legendre nodes/weights on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Gauss-Legendre mapped to [0, 2 k_i], weights P(u_j) * w_j.
QuadratureRule quadrature_nodes(const MomentumDistribution& dist, int node_count, double k_i);

// a*A + b*B as one rule (linearity of the ensemble average)
QuadratureRule mix(const QuadratureRule& a, double wa, const QuadratureRule& b, double wb);

// CSV `dkx_over_ki,density`
TabulatedLaw load_tabulated(const std::string& path);
TabulatedLaw parse_tabulated(const std::string& csv_text);
void check_tabulated(const TabulatedLaw& t);

// --- kicks -----------------------------------------------------------------

// psi(x, y) = e^{i dk (x + dx0) - i dk^2 y / k} psi_free(x + dx0 - dk y / k, y),
// dx0 = dk y' / k. The shifted argument is taken by Fourier interpolation.
template <typename Scalar>
TransverseField<Scalar> kick_closed_form(const AngularSpectrum<Scalar>& exit_spectrum,
                                         const KickEvent& e, Scalar y, Scalar k)
{
  if (y < Scalar(e.y12prime)) throw std::invalid_argument("observation lies before the kick");
  const Scalar dk = Scalar(e.dkx);
  const Scalar dx0 = dk * Scalar(e.y12prime) / k;
  const Scalar arg_shift = dx0 - dk * y / k;  // psi_free(x + arg_shift)
  CArrayX<Scalar> c = exit_spectrum.coefficients * fresnel_multiplier(exit_spectrum.kx, y, k) *
                      shift_multiplier(exit_spectrum.kx, -arg_shift);
  TransverseField<Scalar> f;
  f.grid = exit_spectrum.grid;
  f.k = k;
  f.station = y;
  f.samples = ifft_unitary<Scalar>(c);
  const long double ldk = dk;
  const long double global = -ldk * ldk * static_cast<long double>(y) / static_cast<long double>(k);
  const long double period = 2.0L * std::numbers::pi_v<long double>;
  for (Eigen::Index j = 0; j < f.grid.size; ++j) {
    const long double ph =
        std::fmod(ldk * (static_cast<long double>(f.grid.x(j)) + dx0) + global, period);
    f.samples[j] *= std::polar(Scalar(1), Scalar(ph));
  }
  return f;
}

// Boost at the event plane, then free flight. The boost is applied on a 2x
// oversampled copy (zero-padded spectrum) so the shifted spectrum does not
// wrap across Nyquist; the flight runs on the fine grid and is decimated back.
template <typename Scalar>
TransverseField<Scalar> kick_boost_route(const TransverseField<Scalar>& at_event, const KickEvent& e,
                                         Scalar remaining)
{
  const Eigen::Index n = at_event.grid.size;
  const CArrayX<Scalar> c = fft_unitary<Scalar>(at_event.samples);
  CArrayX<Scalar> fine_c = CArrayX<Scalar>::Zero(2 * n);
  fine_c.head(n / 2) = c.head(n / 2);
  fine_c.tail(n / 2) = c.tail(n / 2);
  // unitary transforms: interpolated samples pick up sqrt(2)
  CArrayX<Scalar> fine = ifft_unitary<Scalar>(fine_c) * std::sqrt(Scalar(2));

  Grid1D<Scalar> fg{at_event.grid.width, 2 * n, at_event.grid.origin};
  const long double dk = e.dkx;
  const long double period = 2.0L * std::numbers::pi_v<long double>;
  for (Eigen::Index j = 0; j < 2 * n; ++j)
    fine[j] *= std::polar(Scalar(1), Scalar(std::fmod(dk * static_cast<long double>(fg.x(j)), period)));

  fine = ifft_unitary<Scalar>(fft_unitary<Scalar>(fine) *
                              fresnel_multiplier(wavenumbers(fg), remaining, at_event.k));
  TransverseField<Scalar> out = at_event;
  for (Eigen::Index j = 0; j < n; ++j) out.samples[j] = fine[2 * j];
  out.station += remaining;
  return out;
}

// Sample-wise e^{i dk x}; cheap, only exact when dk W / 2pi is an integer.
template <typename Scalar>
TransverseField<Scalar> boost(TransverseField<Scalar> f, Scalar dk)
{
  const long double period = 2.0L * std::numbers::pi_v<long double>;
  for (Eigen::Index j = 0; j < f.grid.size; ++j)
    f.samples[j] *= std::polar(
        Scalar(1), Scalar(std::fmod(static_cast<long double>(dk) * f.grid.x(j), period)));
  return f;
}

}  // namespace mzi
