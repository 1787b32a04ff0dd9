#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace mzi {

inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double sodium_mass = 3.8175e-26;   // kg

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SI units throughout.
struct PhysicalSetup {
  double k = 0;        // atom wavenumber
  double k_i = 0;      // photon wavenumber
  double d = 0;        // grating pitch
  double delta = 0;    // slit width
  int n = 1;           // illuminated slits of grating 1
  double y12 = 0;
  double y23 = 0;
  std::complex<double> B_i{1.0, 0.0};
  std::optional<double> mass;
  std::optional<double> velocity;
};

struct DerivedQuantities {
  double lambda;            // de Broglie wavelength
  double lambda_i;          // photon wavelength
  double talbot_length;     // 2 d^2 / lambda
  double dp_per_y12prime;   // 2 pi / (k d)
  double near_field_bound;  // 10 L_T
};

enum class Region { near_field, far_field };

// Throws std::invalid_argument naming the offending field.
void validate(const PhysicalSetup& s);

DerivedQuantities derive(const PhysicalSetup& s);

// y'12 = ratio * lambda_i * k d / (2 pi)
double dp_ratio_to_y12prime(double ratio, const PhysicalSetup& s);
double y12prime_to_dp_ratio(double y12prime, const PhysicalSetup& s);
// d_p = (2 pi / k d) y'12
double path_separation(double y12prime, const PhysicalSetup& s);

Region classify_region(double y, const PhysicalSetup& s);
const char* to_string(Region r);

// Sodium beam through 200 nm gratings, 0.65 m arms; lambda_i = 589 nm.
PhysicalSetup sodium_setup();

// Flat JSON with keys k, k_i, d, delta, n, y12, y23 and optional mass,
// velocity, B_i_re, B_i_im. Unknown keys are rejected.
PhysicalSetup parse_config(const std::string& json_text);
PhysicalSetup load_config(const std::string& path);
// Canonical JSON (sorted keys, round-trip precision).
std::string config_json(const PhysicalSetup& s);

}  // namespace mzi
