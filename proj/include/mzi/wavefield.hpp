#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "mzi/scenario.hpp"
#include "mzi/types.hpp"

namespace mzi {

template <typename Scalar>
struct Grid1D {
  Scalar width;      // W
  Eigen::Index size; // N, power of two
  Scalar origin;     // x of sample 0

  Scalar dx() const { return width / Scalar(size); }
  Scalar x(Eigen::Index j) const { return origin + Scalar(j) * dx(); }

  // centered on the optical axis: x_j = (j - N/2) dx
  static Grid1D centered(Scalar width, Eigen::Index size)
  {
    Grid1D g{width, size, -width / 2};
    g.check();
    return g;
  }

  void check() const
  {
    if (!(width > 0)) throw std::invalid_argument("grid width must be positive");
    if (size < 2 || (size & (size - 1)) != 0)
      throw std::invalid_argument("grid point count must be a power of two >= 2");
  }
};

template <typename Scalar>
ArrayX<Scalar> coordinates(const Grid1D<Scalar>& g)
{
  return ArrayX<Scalar>::LinSpaced(g.size, 0, Scalar(g.size - 1)) * g.dx() + g.origin;
}

// DFT-ordered wavenumbers 2 pi * fftfreq(N, dx)
template <typename Scalar>
ArrayX<Scalar> wavenumbers(const Grid1D<Scalar>& g)
{
  const Eigen::Index n = g.size;
  ArrayX<Scalar> kx(n);
  const Scalar dk = Scalar(two_pi) / g.width;
  for (Eigen::Index j = 0; j < n; ++j) kx[j] = dk * Scalar(j < n / 2 ? j : j - n);
  return kx;
}

// Transverse part of the wave; the e^{iky} carrier is not in the samples.
template <typename Scalar>
struct TransverseField {
  Grid1D<Scalar> grid;
  CArrayX<Scalar> samples;
  Scalar station = 0;      // y
  Scalar k = 0;            // atom wavenumber
  // x-independent phase not carried by the samples (e.g. the -pi/4 of the
  // Kirchhoff kernel). The carrier phase k*station is implied.
  Scalar phase_offset = 0;

  Scalar norm2() const { return samples.abs2().sum(); }
  // samples with phase_offset folded in
  CArrayX<Scalar> phased() const { return samples * std::polar(Scalar(1), phase_offset); }
};

template <typename Scalar>
TransverseField<Scalar> plane_wave(const Grid1D<Scalar>& g, const PhysicalSetup& s)
{
  g.check();
  TransverseField<Scalar> f;
  f.grid = g;
  f.samples = CArrayX<Scalar>::Constant(
      g.size, std::complex<Scalar>(Scalar(s.B_i.real()), Scalar(s.B_i.imag())));
  f.station = 0;  // 0-, just before grating 1
  f.k = Scalar(s.k);
  return f;
}

struct GratingMask {
  double pitch;
  double slit_width;
  long slit_count;        // <= 0: infinite lattice (slits everywhere)
  double lateral_shift = 0;

  static GratingMask finite(const PhysicalSetup& s, double shift = 0)
  {
    return {s.d, s.delta, s.n, shift};
  }
  // same lattice as grating 1, covering the whole window
  static GratingMask periodic(const PhysicalSetup& s, double shift = 0)
  {
    return {s.d, s.delta, 0, shift};
  }
};

// Slits are half-open intervals [left, right); centres at (j - (n-1)/2) d + shift.
template <typename Scalar>
ArrayX<Scalar> mask_values(const Grid1D<Scalar>& g, const GratingMask& m)
{
  if (!(m.pitch > 0) || !(m.slit_width > 0) || m.slit_width > m.pitch)
    throw std::invalid_argument("grating needs 0 < slit_width <= pitch");
  ArrayX<Scalar> out(g.size);
  // absorbs the round-off of x_j so a sample on an edge is classified exactly
  const double tol = 1e-9 * double(g.dx());
  const double half = m.slit_width / 2;
  const double offset = m.slit_count > 0 ? 0.5 * double((m.slit_count - 1) % 2) : 0.5;
  const double max_index = m.slit_count > 0 ? 0.5 * double(m.slit_count - 1) : 0.0;
  for (Eigen::Index j = 0; j < g.size; ++j) {
    const double x = double(g.x(j)) - m.lateral_shift;
    // nearest slit-centre index (in units of d, on the (n-1)/2-offset lattice)
    const double idx = std::floor((x + half + tol) / m.pitch - offset) + offset;
    const double c = idx * m.pitch;
    bool open = x >= c - half - tol && x < c + half - tol;
    if (m.slit_count > 0) open = open && std::abs(idx) <= max_index + 1e-9;
    out[j] = open ? Scalar(1) : Scalar(0);
  }
  return out;
}

template <typename Scalar>
TransverseField<Scalar> apply_mask(TransverseField<Scalar> f, const GratingMask& m)
{
  const ArrayX<Scalar> open = mask_values(f.grid, m);
  if (open.sum() == 0) throw std::domain_error("grating mask has no open sample on this grid");
  f.samples = (open > 0).select(f.samples, std::complex<Scalar>(0));
  return f;
}

// CSV: x_m,re,im,abs2
template <typename Scalar>
void write_field_csv(std::ostream& os, const TransverseField<Scalar>& f)
{
  os << "x_m,re,im,abs2\n";
  char buf[160];
  for (Eigen::Index j = 0; j < f.grid.size; ++j) {
    const auto v = f.samples[j];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", double(f.grid.x(j)),
                  double(v.real()), double(v.imag()), double(std::norm(v)));
    os << buf;
  }
}

}  // namespace mzi
