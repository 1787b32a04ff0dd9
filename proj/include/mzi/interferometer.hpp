#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "mzi/scattering.hpp"

namespace mzi {

struct PropagationOptions {
  int steps_per_arm = 8;            // split steps per free flight
  double absorber_fraction = 0.25;  // cos^2 taper width per half window; 0 = off
  double edge_warn = 1e-6;          // edge-energy fraction that triggers a warning
  double edge_error = 1e-3;         // ... and an error
  std::function<void(const std::string&)> warn;  // default: stderr
};

// 2^16 samples, dx = d/64, W = 1024 d
Grid1D<double> default_grid(const PhysicalSetup& s);

struct PipelineConfig {
  PhysicalSetup setup;
  Grid1D<double> grid;
  double y12prime = 0;
  MomentumDistribution distribution = PointLaw{0.0};
  int node_count = 64;
  int scan_samples = 16;   // M shifts per period
  PropagationOptions propagation;
};

// Throws std::invalid_argument. Besides the physical invariants the grid
// must hold a whole number of pitches and d/M must be a whole number of
// samples, so grating 3 and the scan shifts are exact on the periodic grid.
void validate(const PipelineConfig& c);

// T_m = a + A cos(2 pi m / M + phi) from discrete Fourier sums.
struct Harmonic {
  double mean = 0;
  double amplitude = 0;
  double phase = 0;
  double residual = 0;            // RMS deviation from the model
  std::complex<double> c1{0, 0};  // (1/M) sum T_m e^{-2 pi i m / M}; A e^{i phi} / 2
};
Harmonic extract_first_harmonic(const ArrayXd& T);

struct FringeScan {
  ArrayXd shifts;  // dx3_m = m d / M
  ArrayXd T;
  Harmonic fit;
};

struct VisibilityPoint {
  double ratio;     // d_p / lambda_i
  double V_rel;     // signed where the law has a symmetry centre
  double abs_V;
  double phi;       // V_rel e^{i phi} = C_on / C_off
  double residual;  // of the ensemble scan
  double A_on;
  double A_off;
};

// Three-grating pipeline for one geometry. The free field between gratings
// 1 and 2 does not depend on the kick and is computed once. Kicks are handled
// in the co-moving frame: the lab field at grating 2 is e^{i dk x} times the
// free field translated by s2 = dk (y12 - y')/k, and the flight to grating 3
// becomes a free flight followed by a further translation dk y23 / k.
class Interferometer {
 public:
  Interferometer(const PhysicalSetup& setup, const Grid1D<double>& grid, PropagationOptions opt = {});

  const PhysicalSetup& setup() const { return setup_; }
  const Grid1D<double>& grid() const { return grid_; }

  // Lab-frame field envelope just before grating 3 (the plane-wave factor
  // e^{i dk x} and global phases are dropped: they do not change |psi|^2).
  CArrayXd field_at_grating3(double y12prime, double dkx) const;
  ArrayXd intensity_at_grating3(double y12prime, double dkx) const;

  // grating 3 displaced by dx3 toward -x
  double transmit_single(double y12prime, double dkx, double dx3) const;
  double transmit_ensemble(double y12prime, const QuadratureRule& rule, double dx3) const;
  // T at dx3 = m d / M, m = 0..M-1
  ArrayXd scan_single(double y12prime, double dkx, int M) const;
  FringeScan scan_fringe(double y12prime, const QuadratureRule& rule, int M) const;

  // laser-off fringe (dk = 0), computed once per M
  const Harmonic& baseline(int M) const;

  double transmission_of(const ArrayXd& intensity, double dx3) const;
  double max_edge_fraction() const { return max_edge_; }

 private:
  void check_edges(const CArrayXd& g, const char* where) const;
  ArrayXd scan_intensity(const ArrayXd& I, int M) const;

  PhysicalSetup setup_;
  Grid1D<double> grid_;
  PropagationOptions opt_;
  ArrayXd kx_;
  ArrayXd absorber_;
  ArrayXd g2_mask_;
  ArrayXd g3_mask_;
  CArrayXd step23_;          // Fresnel multiplier of one y23 split step
  CArrayXd free_g2_spectrum_;
  mutable double max_edge_ = 0;
  mutable std::mutex baseline_mutex_;
  mutable std::map<int, Harmonic> baseline_;
};

// Memo of node scans keyed by (y', dk); lets several laws that share
// Gauss-Legendre nodes reuse the same pipeline runs.
class ScanCache {
 public:
  const ArrayXd& get(const Interferometer& ifm, double y12prime, double dkx, int M);
  std::size_t runs() const { return runs_; }

 private:
  std::map<std::tuple<double, double, int>, ArrayXd> memo_;
  std::size_t runs_ = 0;
};

std::vector<VisibilityPoint> visibility_curve(const Interferometer& ifm, const MomentumDistribution& dist,
                                              const std::vector<double>& ratios, int node_count, int M,
                                              ScanCache* cache = nullptr);

// Thin wrappers over a freshly built Interferometer.
double transmit_single(const PipelineConfig& c, double dkx, double dx3);
double transmit_ensemble(const PipelineConfig& c, double dx3);
FringeScan scan_fringe(const PipelineConfig& c);
std::vector<VisibilityPoint> visibility_curve(const PipelineConfig& c, const std::vector<double>& ratios);

// --- density carpet --------------------------------------------------------

struct CarpetRequest {
  double y_min = 0;
  double y_max = 0;
  int y_steps = 2;
  double dkx = 0;
  double y12prime = 0;
  double x_half_width = 3e-6;  // columns kept: |x| <= x_half_width
};

struct Carpet {
  ArrayXd x;
  ArrayXd y;
  Eigen::MatrixXd density;  // rows = y stations
};

// Lab-frame march through the whole apparatus; masks at the grating planes
// (a row exactly on a grating is taken just after it), kick as a sample-wise
// boost at y'.
Carpet carpet(const PhysicalSetup& s, const Grid1D<double>& grid, const CarpetRequest& req,
              const PropagationOptions& opt = {});

}  // namespace mzi
