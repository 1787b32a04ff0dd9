#pragma once

#include <cmath>
#include <numbers>
#include <vector>
#include <stdexcept>

#include "mzi/fft.hpp"
#include "mzi/wavefield.hpp"

namespace mzi {

template <typename Scalar>
struct AngularSpectrum {
  ArrayX<Scalar> kx;            // DFT order
  CArrayX<Scalar> coefficients; // unitary: sum |c|^2 == sum |psi|^2
  Grid1D<Scalar> grid;
};

template <typename Scalar>
AngularSpectrum<Scalar> spectrum(const TransverseField<Scalar>& f)
{
  // the grid origin only contributes a linear phase; the DFT is taken on the
  // samples as stored, which is what every consumer here expects
  return {wavenumbers(f.grid), fft_unitary<Scalar>(f.samples), f.grid};
}

template <typename Scalar>
CArrayX<Scalar> inverse(const AngularSpectrum<Scalar>& a)
{
  return ifft_unitary<Scalar>(a.coefficients);
}

// e^{-i kx^2 dy / 2k}. The phase reaches ~1e10 rad at the band edge, so it is
// formed and reduced mod 2pi in long double before the sincos.
template <typename Scalar>
CArrayX<Scalar> fresnel_multiplier(const ArrayX<Scalar>& kx, Scalar dy, Scalar k)
{
  CArrayX<Scalar> h(kx.size());
  const long double c = static_cast<long double>(dy) / (2.0L * static_cast<long double>(k));
  const long double period = 2.0L * std::numbers::pi_v<long double>;
  for (Eigen::Index j = 0; j < kx.size(); ++j) {
    const long double q = static_cast<long double>(kx[j]);
    const long double ph = std::fmod(q * q * c, period);
    h[j] = std::polar(Scalar(1), Scalar(-ph));
  }
  return h;
}

// e^{-i kx s}: translation by +s (f(x) -> f(x - s)) for band-limited fields
template <typename Scalar>
CArrayX<Scalar> shift_multiplier(const ArrayX<Scalar>& kx, Scalar s)
{
  CArrayX<Scalar> h(kx.size());
  const long double ls = static_cast<long double>(s);
  const long double period = 2.0L * std::numbers::pi_v<long double>;
  for (Eigen::Index j = 0; j < kx.size(); ++j) {
    const long double ph = std::fmod(static_cast<long double>(kx[j]) * ls, period);
    h[j] = std::polar(Scalar(1), Scalar(-ph));
  }
  return h;
}

template <typename Scalar>
TransverseField<Scalar> propagate_spectral(TransverseField<Scalar> f, Scalar dy)
{
  if (dy == 0) return f;
  const ArrayX<Scalar> kx = wavenumbers(f.grid);
  f.samples = ifft_unitary<Scalar>(fft_unitary<Scalar>(f.samples) * fresnel_multiplier(kx, dy, f.k));
  f.station += dy;
  return f;
}

template <typename Scalar>
TransverseField<Scalar> translate(TransverseField<Scalar> f, Scalar s)
{
  if (s == 0) return f;
  const ArrayX<Scalar> kx = wavenumbers(f.grid);
  f.samples = ifft_unitary<Scalar>(fft_unitary<Scalar>(f.samples) * shift_multiplier(kx, s));
  return f;
}

namespace detail {
// sqrt(k / 2 pi dy) * dx * sum_j psi_j e^{ik (x - x_j)^2 / 2 dy}; the -pi/4 is
// left to phase_offset
template <typename Scalar>
std::complex<Scalar> kirchhoff_point(const TransverseField<Scalar>& f, Scalar dy, Scalar x,
                                     const std::vector<Eigen::Index>& support)
{
  const long double k = f.k, ldy = dy;
  const long double period = 2.0L * std::numbers::pi_v<long double>;
  std::complex<long double> acc = 0;
  for (Eigen::Index j : support) {
    const long double u = static_cast<long double>(x) - static_cast<long double>(f.grid.x(j));
    const long double ph = std::fmod(k * u * u / (2.0L * ldy), period);
    const auto v = f.samples[j];
    acc += std::complex<long double>(v.real(), v.imag()) * std::polar(1.0L, ph);
  }
  const long double pref = std::sqrt(k / (period * ldy)) * static_cast<long double>(f.grid.dx());
  return {Scalar(acc.real() * pref), Scalar(acc.imag() * pref)};
}

template <typename Scalar>
std::vector<Eigen::Index> open_support(const TransverseField<Scalar>& f)
{
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < f.samples.size(); ++j)
    if (f.samples[j] != std::complex<Scalar>(0)) idx.push_back(j);
  return idx;
}
}  // namespace detail

// Direct Fresnel-Kirchhoff sum over the open support, O(N * support).
// Only meant as an oracle on small grids.
template <typename Scalar>
TransverseField<Scalar> propagate_kirchhoff(TransverseField<Scalar> f, Scalar dy)
{
  if (!(dy > 0)) throw std::invalid_argument("Kirchhoff propagation needs dy > 0");
  const auto support = detail::open_support(f);
  CArrayX<Scalar> out(f.grid.size);
  for (Eigen::Index i = 0; i < f.grid.size; ++i)
    out[i] = detail::kirchhoff_point(f, dy, f.grid.x(i), support);
  f.samples = std::move(out);
  f.station += dy;
  f.phase_offset -= Scalar(pi / 4);
  return f;
}

// Same integral evaluated at arbitrary x (far-field patterns etc.). The
// returned values carry the -pi/4 factor.
template <typename Scalar>
CArrayX<Scalar> kirchhoff_at(const TransverseField<Scalar>& f, Scalar dy, const ArrayX<Scalar>& xs)
{
  if (!(dy > 0)) throw std::invalid_argument("Kirchhoff propagation needs dy > 0");
  const auto support = detail::open_support(f);
  CArrayX<Scalar> out(xs.size());
  const auto rot = std::polar(Scalar(1), f.phase_offset - Scalar(pi / 4));
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    out[i] = detail::kirchhoff_point(f, dy, xs[i], support) * rot;
  return out;
}

// cos^2 taper over the outer `fraction` of each half window, 1 inside
template <typename Scalar>
ArrayX<Scalar> absorber_profile(const Grid1D<Scalar>& g, Scalar fraction)
{
  ArrayX<Scalar> a = ArrayX<Scalar>::Ones(g.size);
  if (fraction <= 0) return a;
  const Scalar centre = g.origin + g.width / 2;
  const Scalar inner = g.width / 2 * (1 - fraction);
  const Scalar span = g.width / 2 - inner;
  for (Eigen::Index j = 0; j < g.size; ++j) {
    const Scalar r = std::abs(g.x(j) - centre);
    if (r > inner) {
      const Scalar c = std::cos(Scalar(pi / 2) * std::min<Scalar>(1, (r - inner) / span));
      a[j] = c * c;
    }
  }
  return a;
}

// Fraction of the norm in the outer 5% of samples (2.5% at each end).
template <typename Scalar>
Scalar edge_energy_fraction(const CArrayX<Scalar>& samples)
{
  const Eigen::Index n = samples.size();
  const Eigen::Index m = std::max<Eigen::Index>(1, n / 40);
  const Scalar total = samples.abs2().sum();
  if (total == 0) return 0;
  return (samples.head(m).abs2().sum() + samples.tail(m).abs2().sum()) / total;
}

}  // namespace mzi
