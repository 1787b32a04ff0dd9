#include <gtest/gtest.h>

#include <random>

#include "mzi/propagation.hpp"

using namespace mzi;

namespace {

const double kPi = std::acos(-1.0);

double rel_l2(const CArrayXd& a, const CArrayXd& b)
{
  return std::sqrt((a - b).abs2().sum() / b.abs2().sum());
}

// plain O(N^2) DFT, unitary
CArrayXd naive_dft(const CArrayXd& a)
{
  const Eigen::Index n = a.size();
  CArrayXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> s = 0;
    for (Eigen::Index j = 0; j < n; ++j) s += a[j] * std::polar(1.0, -2 * kPi * double(j * k % n) / double(n));
    out[k] = s / std::sqrt(double(n));
  }
  return out;
}

TransverseField<double> grating_exit(const PhysicalSetup& s, Eigen::Index n, double dx)
{
  return apply_mask(plane_wave(Grid1D<double>::centered(dx * double(n), n), s), GratingMask::finite(s));
}

}  // namespace

TEST(Spectrum, MatchesNaiveDftAndParseval)
{
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  const auto s = sodium_setup();
  auto f = plane_wave(Grid1D<double>::centered(1e-6, 128), s);
  for (auto& v : f.samples) v = {g(rng), g(rng)};
  const auto a = spectrum(f);
  EXPECT_LT((a.coefficients - naive_dft(f.samples)).abs().maxCoeff(), 1e-12);
  EXPECT_NEAR(a.coefficients.abs2().sum(), f.norm2(), 1e-12 * f.norm2());
  EXPECT_LT(rel_l2(inverse(a), f.samples), 1e-12);
}

TEST(Spectrum, ConstantAndOnGridPlaneWave)
{
  const auto s = sodium_setup();
  const auto g = Grid1D<double>::centered(1e-6, 256);
  auto f = plane_wave(g, s);
  auto a = spectrum(f);
  EXPECT_NEAR(std::abs(a.coefficients[0]), 16.0, 1e-12);
  EXPECT_LT(a.coefficients.tail(255).abs().maxCoeff(), 1e-12);

  const double q = a.kx[5];
  for (Eigen::Index j = 0; j < g.size; ++j) f.samples[j] = std::polar(1.0, q * g.x(j));
  a = spectrum(f);
  Eigen::Index imax = 0;
  a.coefficients.abs().maxCoeff(&imax);
  EXPECT_EQ(imax, 5);
  EXPECT_NEAR(std::abs(a.coefficients[5]), 16.0, 1e-10);
  a.coefficients[5] = 0;
  EXPECT_LT(a.coefficients.abs().maxCoeff(), 1e-10);
}

TEST(Spectrum, SingleSlitFollowsSinc)
{
  // delta = 100 nm sampled at 0.25 nm; at |kx| << pi/dx the DFT of the
  // rectangle is dx * delta * sinc(kx delta / 2) up to the sampling correction
  auto s = sodium_setup();
  s.n = 1;
  const double dx = 0.25e-9;
  const auto f = grating_exit(s, 1 << 14, dx);
  const auto a = spectrum(f);
  const double c0 = std::abs(a.coefficients[0]);
  for (int j = 1; j < 200; ++j) {
    const double kx = a.kx[j];
    const double u = kx * s.delta / 2;
    const double expect = std::abs(std::sin(u) / u);
    EXPECT_NEAR(std::abs(a.coefficients[j]) / c0, expect, 2e-3) << j;
  }
}

TEST(Spectral, IdentityCasesAndReversibility)
{
  const auto s = sodium_setup();
  const auto f = grating_exit(s, 4096, s.d / 32);
  const auto same = propagate_spectral(f, 0.0);
  EXPECT_TRUE((same.samples == f.samples).all());

  const auto pw = plane_wave(f.grid, s);
  EXPECT_LT((propagate_spectral(pw, 0.37).samples - pw.samples).abs().maxCoeff(), 1e-12);

  for (double dy : {1e-3, 0.65}) {
    const auto there = propagate_spectral(f, dy);
    EXPECT_DOUBLE_EQ(there.station, dy);
    const auto back = propagate_spectral(there, -dy);
    EXPECT_LT(rel_l2(back.samples, f.samples), 1e-10);
  }
}

TEST(Spectral, NormConservedAndComposes)
{
  const auto s = sodium_setup();
  const auto f = grating_exit(s, 1 << 14, s.d / 64);
  const double n0 = f.norm2();
  for (double dy : {1e-4, 1e-3, 6.48e-3, 0.65, 1.3}) {
    const auto g = propagate_spectral(f, dy);
    EXPECT_LT(std::abs(g.norm2() - n0) / n0, 1e-12) << dy;
  }
  const auto two = propagate_spectral(propagate_spectral(f, 1e-3), 0.65);
  const auto one = propagate_spectral(f, 0.651);
  EXPECT_LT(rel_l2(two.samples, one.samples), 1e-12);
}

TEST(Kirchhoff, RejectsNonPositiveDistance)
{
  const auto s = sodium_setup();
  const auto f = grating_exit(s, 256, s.d / 8);
  EXPECT_THROW(propagate_kirchhoff(f, 0.0), std::invalid_argument);
  EXPECT_THROW(propagate_kirchhoff(f, -1e-3), std::invalid_argument);
}

TEST(Kirchhoff, EqualsSpectralAtCriticalSampling)
{
  const auto s = sodium_setup();
  const Eigen::Index n = 4096;
  for (double dy : {1e-3, 0.65}) {
    const double dx = std::sqrt(2 * kPi / s.k * dy / double(n));
    const auto f = grating_exit(s, n, dx);
    const auto a = propagate_spectral(f, dy);
    const auto b = propagate_kirchhoff(f, dy);
    EXPECT_DOUBLE_EQ(b.station, dy);
    EXPECT_LT(rel_l2(b.phased(), a.phased()), 1e-6) << dy;
  }
}

TEST(Kirchhoff, AgreesForBandLimitedField)
{
  // Gaussian beam well inside the window, off critical sampling; dx^2 <
  // lambda dy / N keeps the aliased kernel replicas outside the window
  const auto s = sodium_setup();
  const Eigen::Index n = 2048;
  const double w0 = 0.4e-6, dx = 2e-9;
  auto f = plane_wave(Grid1D<double>::centered(dx * double(n), n), s);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = f.grid.x(j);
    f.samples[j] = std::exp(-x * x / (w0 * w0));
  }
  for (double dy : {1e-3, 5e-3}) {
    const auto a = propagate_spectral(f, dy);
    const auto b = propagate_kirchhoff(f, dy);
    EXPECT_LT(rel_l2(b.phased(), a.phased()), 1e-6) << dy;
  }
}

TEST(Kirchhoff, SingleSlitFraunhoferEnvelope)
{
  auto s = sodium_setup();
  s.n = 1;
  const double y = 0.65;
  const auto f = grating_exit(s, 1024, 0.5e-9);
  ArrayXd xs = ArrayXd::LinSpaced(41, -100e-6, 100e-6);
  const CArrayXd psi = kirchhoff_at(f, y, xs);
  const double i0 = std::norm(kirchhoff_at(f, y, ArrayXd(ArrayXd::Zero(1)))[0]);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const double u = s.k * s.delta * xs[i] / (2 * y);
    const double sinc2 = u == 0 ? 1.0 : std::pow(std::sin(u) / u, 2);
    EXPECT_NEAR(std::norm(psi[i]) / i0, sinc2, 2e-3) << xs[i];
  }
}

TEST(Kirchhoff, DoubleSlitFringePeriod)
{
  auto s = sodium_setup();
  s.n = 2;
  s.delta = 20e-9;
  const double y = 0.65;
  const auto f = grating_exit(s, 2048, 0.5e-9);
  const double period = 2 * kPi * y / (s.k * s.d);
  // locate the first intensity maxima either side of the centre
  const ArrayXd xs = ArrayXd::LinSpaced(4001, -1.5 * period, 1.5 * period);
  // divide out the single-slit envelope, which pulls the side maxima inward
  ArrayXd I = kirchhoff_at(f, y, xs).abs2();
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const double u = s.k * s.delta * xs[i] / (2 * y);
    if (u != 0) I[i] /= std::pow(std::sin(u) / u, 2);
  }
  std::vector<double> peaks;
  for (Eigen::Index i = 1; i + 1 < xs.size(); ++i)
    if (I[i] > I[i - 1] && I[i] >= I[i + 1]) peaks.push_back(xs[i]);
  ASSERT_EQ(peaks.size(), 3u);
  EXPECT_NEAR(peaks[2] - peaks[1], period, 2e-3 * period);
  EXPECT_NEAR(peaks[1] - peaks[0], period, 2e-3 * period);
}

TEST(Propagation, TalbotSelfImaging)
{
  const auto s = sodium_setup();
  const double dx = s.d / 64;
  const auto f = grating_exit(s, 1 << 16, dx);
  const auto t = propagate_spectral(f, derive(s).talbot_length);
  // central half of the 24-slit aperture
  std::vector<double> a, b;
  for (Eigen::Index j = 0; j < f.grid.size; ++j) {
    if (std::abs(f.grid.x(j)) > s.n * s.d / 4) continue;
    a.push_back(std::norm(f.samples[j]));
    b.push_back(std::norm(t.samples[j]));
  }
  const Eigen::Map<ArrayXd> A(a.data(), Eigen::Index(a.size())), B(b.data(), Eigen::Index(b.size()));
  const ArrayXd da = A - A.mean(), db = B - B.mean();
  const double corr = (da * db).sum() / std::sqrt(da.abs2().sum() * db.abs2().sum());
  EXPECT_GE(corr, 0.9);
}

TEST(Absorber, ProfileAndEdgeEnergy)
{
  const auto g = Grid1D<double>::centered(1.0, 1024);
  const ArrayXd a = absorber_profile(g, 0.25);
  EXPECT_EQ(a[512], 1.0);
  EXPECT_EQ(a[512 + 380], 1.0);  // |x| < 0.375 untouched
  EXPECT_LT(a[0], 1e-4);
  EXPECT_LT(a[0], a[1]);
  EXPECT_TRUE((a >= 0).all() && (a <= 1).all());
  EXPECT_TRUE((absorber_profile(g, 0.0) == 1.0).all());

  CArrayXd f = CArrayXd::Zero(1024);
  f[512] = 1;
  EXPECT_EQ(edge_energy_fraction<double>(f), 0.0);
  f[0] = 1;
  EXPECT_DOUBLE_EQ(edge_energy_fraction<double>(f), 0.5);
}
