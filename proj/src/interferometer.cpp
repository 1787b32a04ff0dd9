#include "mzi/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <tuple>

namespace mzi {

namespace {

// n * unit within 1e-9 of an integer
bool is_multiple(double value, double unit, long* count = nullptr)
{
  const double q = value / unit;
  const double r = std::round(q);
  if (count) *count = static_cast<long>(r);
  return std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q));
}

ArrayXd roll(const ArrayXd& a, Eigen::Index q)
{
  // out[i] = a[i - q], circular
  const Eigen::Index n = a.size();
  q = ((q % n) + n) % n;
  ArrayXd out(n);
  out.tail(n - q) = a.head(n - q);
  out.head(q) = a.tail(q);
  return out;
}

}  // namespace

Grid1D<double> default_grid(const PhysicalSetup& s)
{
  const Eigen::Index n = 1 << 16;
  return Grid1D<double>::centered(s.d / 64 * double(n), n);
}

void validate(const PipelineConfig& c)
{
  validate(c.setup);
  c.grid.check();
  if (!(c.y12prime >= 0 && c.y12prime < c.setup.y12))
    throw std::invalid_argument("scattering location must lie in [0, y12)");
  if (c.scan_samples < 4) throw std::invalid_argument("scan needs M >= 4 samples per period");
  if (!std::holds_alternative<PointLaw>(c.distribution) && c.node_count < 2)
    throw std::invalid_argument("quadrature needs node_count >= 2");
  if (c.propagation.steps_per_arm < 1) throw std::invalid_argument("steps_per_arm must be >= 1");
  if (!is_multiple(c.grid.width, c.setup.d))
    throw std::invalid_argument("grid width must be a whole number of grating pitches");
  if (!is_multiple(c.setup.d / c.scan_samples, c.grid.dx()))
    throw std::invalid_argument("scan step d/M must be a whole number of grid samples");
}

Harmonic extract_first_harmonic(const ArrayXd& T)
{
  const Eigen::Index M = T.size();
  if (M < 4) throw std::invalid_argument("first-harmonic extraction needs >= 4 samples");
  Harmonic h;
  std::complex<double> c1 = 0;
  for (Eigen::Index m = 0; m < M; ++m)
    c1 += T[m] * std::polar(1.0, -two_pi * double(m) / double(M));
  c1 /= double(M);
  h.mean = T.mean();
  h.c1 = c1;
  h.amplitude = 2 * std::abs(c1);
  h.phase = std::arg(c1);
  double ss = 0;
  for (Eigen::Index m = 0; m < M; ++m) {
    const double model = h.mean + h.amplitude * std::cos(two_pi * double(m) / double(M) + h.phase);
    ss += (T[m] - model) * (T[m] - model);
  }
  h.residual = std::sqrt(ss / double(M));
  return h;
}

Interferometer::Interferometer(const PhysicalSetup& setup, const Grid1D<double>& grid, PropagationOptions opt)
    : setup_(setup), grid_(grid), opt_(std::move(opt))
{
  validate(setup_);
  grid_.check();
  if (opt_.steps_per_arm < 1) throw std::invalid_argument("steps_per_arm must be >= 1");
  if (!is_multiple(grid_.width, setup_.d))
    throw std::invalid_argument("grid width must be a whole number of grating pitches");

  kx_ = wavenumbers(grid_);
  absorber_ = absorber_profile(grid_, opt_.absorber_fraction);
  g2_mask_ = mask_values(grid_, GratingMask::periodic(setup_));
  g3_mask_ = g2_mask_;
  step23_ = fresnel_multiplier(kx_, setup_.y23 / opt_.steps_per_arm, setup_.k);

  // grating 1 exit -> grating 2, split steps with the absorber
  TransverseField<double> f = apply_mask(plane_wave(grid_, setup_), GratingMask::finite(setup_));
  const CArrayXd h12 = fresnel_multiplier(kx_, setup_.y12 / opt_.steps_per_arm, setup_.k);
  CArrayXd g = f.samples;
  for (int s = 0; s < opt_.steps_per_arm; ++s)
    g = ifft_unitary<double>(fft_unitary<double>(g) * h12) * absorber_;
  check_edges(g, "grating 2");
  free_g2_spectrum_ = fft_unitary<double>(g);
}

void Interferometer::check_edges(const CArrayXd& g, const char* where) const
{
  const double e = edge_energy_fraction<double>(g);
  max_edge_ = std::max(max_edge_, e);
  if (e > opt_.edge_error) {
    std::ostringstream ss;
    ss << "edge energy " << e << " of the norm at " << where
       << " exceeds " << opt_.edge_error << "; widen the grid or enable the absorber";
    throw std::runtime_error(ss.str());
  }
  if (e > opt_.edge_warn) {
    std::ostringstream ss;
    ss << "warning: edge energy " << e << " of the norm at " << where;
    if (opt_.warn)
      opt_.warn(ss.str());
    else
      std::cerr << ss.str() << '\n';
  }
}

CArrayXd Interferometer::field_at_grating3(double y12prime, double dkx) const
{
  validate(KickEvent{dkx, y12prime}, setup_);
  const double s2 = dkx * (setup_.y12 - y12prime) / setup_.k;
  const double s3 = dkx * (setup_.y12 + setup_.y23 - y12prime) / setup_.k;

  CArrayXd c = free_g2_spectrum_;
  if (s2 != 0) c *= shift_multiplier<double>(kx_, s2);
  CArrayXd g = ifft_unitary<double>(c) * g2_mask_;
  c = fft_unitary<double>(g);
  // back to the co-moving frame so the absorber sees a centred field
  if (s2 != 0) c *= shift_multiplier<double>(kx_, -s2);
  for (int s = 0; s < opt_.steps_per_arm; ++s) {
    if (s) c = fft_unitary<double>(g);
    g = ifft_unitary<double>(c * step23_) * absorber_;
  }
  check_edges(g, "grating 3");
  if (s3 != 0) g = ifft_unitary<double>(fft_unitary<double>(g) * shift_multiplier<double>(kx_, s3));
  return g;
}

ArrayXd Interferometer::intensity_at_grating3(double y12prime, double dkx) const
{
  return field_at_grating3(y12prime, dkx).abs2();
}

double Interferometer::transmission_of(const ArrayXd& I, double dx3) const
{
  // grating displaced toward -x by dx3 == intensity translated by +dx3
  long q = 0;
  if (is_multiple(dx3, grid_.dx(), &q)) return (roll(I, q) * g3_mask_).sum() * grid_.dx();
  throw std::invalid_argument("transmission_of: dx3 is not a whole number of samples");
}

double Interferometer::transmit_single(double y12prime, double dkx, double dx3) const
{
  long q = 0;
  if (is_multiple(dx3, grid_.dx(), &q)) return transmission_of(intensity_at_grating3(y12prime, dkx), dx3);
  // off-grid shift: translate the field by Fourier interpolation, keep the mask on-grid
  const CArrayXd g = field_at_grating3(y12prime, dkx);
  const ArrayXd I = ifft_unitary<double>(fft_unitary<double>(g) * shift_multiplier<double>(kx_, dx3)).abs2();
  return (I * g3_mask_).sum() * grid_.dx();
}

double Interferometer::transmit_ensemble(double y12prime, const QuadratureRule& rule, double dx3) const
{
  double T = 0;
  for (const auto& q : rule) T += q.weight * transmit_single(y12prime, q.dkx, dx3);
  return T;
}

ArrayXd Interferometer::scan_intensity(const ArrayXd& I, int M) const
{
  if (M < 4) throw std::invalid_argument("scan needs M >= 4 samples per period");
  long step = 0;
  if (!is_multiple(setup_.d / M, grid_.dx(), &step))
    throw std::invalid_argument("scan step d/M must be a whole number of grid samples");
  ArrayXd T(M);
  for (int m = 0; m < M; ++m) T[m] = (roll(I, step * m) * g3_mask_).sum() * grid_.dx();
  return T;
}

ArrayXd Interferometer::scan_single(double y12prime, double dkx, int M) const
{
  return scan_intensity(intensity_at_grating3(y12prime, dkx), M);
}

FringeScan Interferometer::scan_fringe(double y12prime, const QuadratureRule& rule, int M) const
{
  FringeScan fs;
  fs.shifts = ArrayXd::LinSpaced(M, 0, M - 1) * (setup_.d / M);
  fs.T = ArrayXd::Zero(M);
  for (const auto& q : rule) fs.T += q.weight * scan_single(y12prime, q.dkx, M);
  fs.fit = extract_first_harmonic(fs.T);
  return fs;
}

const Harmonic& Interferometer::baseline(int M) const
{
  std::lock_guard lock(baseline_mutex_);
  auto it = baseline_.find(M);
  if (it == baseline_.end()) it = baseline_.emplace(M, extract_first_harmonic(scan_single(0.0, 0.0, M))).first;
  return it->second;
}

const ArrayXd& ScanCache::get(const Interferometer& ifm, double y12prime, double dkx, int M)
{
  const auto key = std::make_tuple(y12prime, dkx, M);
  auto it = memo_.find(key);
  if (it == memo_.end()) {
    it = memo_.emplace(key, ifm.scan_single(y12prime, dkx, M)).first;
    ++runs_;
  }
  return it->second;
}

std::vector<VisibilityPoint> visibility_curve(const Interferometer& ifm, const MomentumDistribution& dist,
                                              const std::vector<double>& ratios, int node_count, int M,
                                              ScanCache* cache)
{
  const auto& s = ifm.setup();
  const Harmonic& off = ifm.baseline(M);
  if (off.amplitude < 1e-12 * std::abs(off.mean))
    throw std::runtime_error("degenerate baseline: laser-off fringe amplitude vanishes");

  const QuadratureRule rule = quadrature_nodes(dist, node_count, s.k_i);
  const auto centre = symmetry_centre(dist, s.k_i);
  ScanCache local;
  ScanCache& memo = cache ? *cache : local;

  std::vector<VisibilityPoint> out;
  out.reserve(ratios.size());
  for (double ratio : ratios) {
    const double yp = dp_ratio_to_y12prime(ratio, s);
    if (!(yp < s.y12)) throw std::invalid_argument("ratio maps to y'12 beyond grating 2");
    ArrayXd T = ArrayXd::Zero(M);
    for (const auto& q : rule) T += q.weight * memo.get(ifm, yp, q.dkx, M);
    const Harmonic on = extract_first_harmonic(T);
    const std::complex<double> chi = on.c1 / off.c1;

    VisibilityPoint p;
    p.ratio = ratio;
    p.abs_V = std::abs(chi);
    p.A_on = on.amplitude;
    p.A_off = off.amplitude;
    p.residual = on.residual;
    p.V_rel = p.abs_V;
    p.phi = std::arg(chi);
    if (centre) {
      const double ref = path_separation(yp, s) * *centre;
      if (std::cos(std::arg(chi) - ref) < 0) {
        p.V_rel = -p.abs_V;
        p.phi = std::arg(-chi);
      }
    }
    if (p.phi <= -pi) p.phi += two_pi;
    out.push_back(p);
  }
  return out;
}

namespace {
Interferometer build(const PipelineConfig& c)
{
  validate(c);
  return Interferometer(c.setup, c.grid, c.propagation);
}
}  // namespace

double transmit_single(const PipelineConfig& c, double dkx, double dx3)
{
  return build(c).transmit_single(c.y12prime, dkx, dx3);
}

double transmit_ensemble(const PipelineConfig& c, double dx3)
{
  return build(c).transmit_ensemble(c.y12prime, quadrature_nodes(c.distribution, c.node_count, c.setup.k_i),
                                    dx3);
}

FringeScan scan_fringe(const PipelineConfig& c)
{
  return build(c).scan_fringe(c.y12prime, quadrature_nodes(c.distribution, c.node_count, c.setup.k_i),
                              c.scan_samples);
}

std::vector<VisibilityPoint> visibility_curve(const PipelineConfig& c, const std::vector<double>& ratios)
{
  const Interferometer ifm = build(c);
  return visibility_curve(ifm, c.distribution, ratios, c.node_count, c.scan_samples);
}

Carpet carpet(const PhysicalSetup& s, const Grid1D<double>& grid, const CarpetRequest& req,
              const PropagationOptions& opt)
{
  validate(s);
  grid.check();
  if (req.y_steps < 2) throw std::invalid_argument("carpet needs y_steps >= 2");
  const double y_end = s.y12 + s.y23;
  // rows before grating 1 (y < 0) show the incident plane wave
  if (!(std::isfinite(req.y_min) && req.y_max <= y_end * (1 + 1e-12) && req.y_max > req.y_min))
    throw std::invalid_argument("carpet y range must end within y12 + y23 with y_max > y_min");
  if (req.dkx != 0) validate(KickEvent{req.dkx, req.y12prime}, s);

  enum class Ev { g1, kick, g2, g3 };
  std::vector<std::pair<double, Ev>> events{{0.0, Ev::g1}, {s.y12, Ev::g2}, {y_end, Ev::g3}};
  if (req.dkx != 0) events.push_back({req.y12prime, Ev::kick});
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  const ArrayXd kx = wavenumbers(grid);
  const ArrayXd absorber = absorber_profile(grid, opt.absorber_fraction);
  const double max_step = s.y12 / std::max(1, opt.steps_per_arm);

  TransverseField<double> f = plane_wave(grid, s);
  auto advance = [&](double to) {
    double dist = to - f.station;
    if (dist <= 0) return;
    const int n = std::max(1, int(std::ceil(dist / max_step - 1e-12)));
    const CArrayXd h = fresnel_multiplier(kx, dist / n, s.k);
    for (int i = 0; i < n; ++i) f.samples = ifft_unitary<double>(fft_unitary<double>(f.samples) * h) * absorber;
    f.station = to;
  };

  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < grid.size; ++j)
    if (std::abs(grid.x(j)) <= req.x_half_width * (1 + 1e-12)) cols.push_back(j);

  Carpet out;
  out.y = ArrayXd::LinSpaced(req.y_steps, req.y_min, req.y_max);
  out.x.resize(Eigen::Index(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.x[Eigen::Index(c)] = grid.x(cols[c]);
  out.density.resize(req.y_steps, Eigen::Index(cols.size()));

  std::size_t next = 0;
  for (int r = 0; r < req.y_steps; ++r) {
    const double y = out.y[r];
    while (next < events.size() && events[next].first <= y) {
      advance(events[next].first);
      switch (events[next].second) {
        case Ev::g1: f = apply_mask(f, GratingMask::finite(s)); break;
        case Ev::kick: f = boost(f, req.dkx); break;
        case Ev::g2:
        case Ev::g3: f = apply_mask(f, GratingMask::periodic(s)); break;
      }
      ++next;
    }
    advance(y);
    for (std::size_t c = 0; c < cols.size(); ++c)
      out.density(r, Eigen::Index(c)) = std::norm(f.samples[cols[c]]);
  }
  return out;
}

}  // namespace mzi
