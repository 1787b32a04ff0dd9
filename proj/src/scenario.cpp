#include "mzi/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mzi/types.hpp"

namespace mzi {

namespace {

void require_positive(double v, const char* name)
{
  if (!(v > 0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must be a positive finite number");
}

}  // namespace

void validate(const PhysicalSetup& s)
{
  require_positive(s.k, "k");
  require_positive(s.k_i, "k_i");
  require_positive(s.d, "d");
  require_positive(s.delta, "delta");
  require_positive(s.y12, "y12");
  require_positive(s.y23, "y23");
  if (s.delta > s.d) throw std::invalid_argument("delta must not exceed d");
  if (s.n < 1) throw std::invalid_argument("n must be >= 1");
  if (s.mass) require_positive(*s.mass, "mass");
  if (s.velocity) {
    require_positive(*s.velocity, "velocity");
    const double kv = s.mass.value_or(sodium_mass) * *s.velocity / hbar;
    if (std::abs(s.k - kv) / s.k > 1e-6)
      throw std::invalid_argument("k disagrees with mass*velocity/hbar beyond 1e-6");
  }
}

DerivedQuantities derive(const PhysicalSetup& s)
{
  validate(s);
  DerivedQuantities q;
  q.lambda = two_pi / s.k;
  q.lambda_i = two_pi / s.k_i;
  q.talbot_length = 2.0 * s.d * s.d / q.lambda;
  q.dp_per_y12prime = two_pi / (s.k * s.d);
  q.near_field_bound = 10.0 * q.talbot_length;
  return q;
}

double dp_ratio_to_y12prime(double ratio, const PhysicalSetup& s)
{
  if (!(ratio >= 0)) throw std::invalid_argument("d_p/lambda_i ratio must be >= 0");
  // lambda_i * k d / 2pi == k d / k_i
  return ratio * s.k * s.d / s.k_i;
}

double y12prime_to_dp_ratio(double y12prime, const PhysicalSetup& s)
{
  if (!(y12prime >= 0)) throw std::invalid_argument("y'12 must be >= 0");
  return y12prime * s.k_i / (s.k * s.d);
}

double path_separation(double y12prime, const PhysicalSetup& s)
{
  return two_pi * y12prime / (s.k * s.d);
}

Region classify_region(double y, const PhysicalSetup& s)
{
  if (!(y >= 0)) throw std::invalid_argument("y must be >= 0");
  return y < 10.0 * derive(s).talbot_length ? Region::near_field : Region::far_field;
}

const char* to_string(Region r)
{
  return r == Region::near_field ? "near_field" : "far_field";
}

PhysicalSetup sodium_setup()
{
  PhysicalSetup s;
  s.k = 5.09e11;
  s.k_i = two_pi / 589e-9;
  s.d = 200e-9;
  s.delta = 100e-9;
  s.n = 24;
  s.y12 = 0.65;
  s.y23 = 0.65;
  return s;
}

PhysicalSetup parse_config(const std::string& text)
{
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is the offset; turn it into a line number for the user
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a flat JSON object");

  static const std::set<std::string> known{"k", "k_i", "d", "delta", "n", "y12", "y23",
                                           "mass", "velocity", "B_i_re", "B_i_im"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    if (!value.is_number()) throw ConfigError("config key '" + key + "' must be numeric");
  }

  auto get = [&](const char* key) -> double {
    if (!j.contains(key)) throw ConfigError(std::string("missing config key '") + key + "'");
    return j[key].get<double>();
  };

  PhysicalSetup s;
  if (j.contains("mass")) s.mass = j["mass"].get<double>();
  if (j.contains("velocity")) s.velocity = j["velocity"].get<double>();
  if (j.contains("k")) {
    s.k = get("k");
  } else if (s.velocity) {
    s.k = s.mass.value_or(sodium_mass) * *s.velocity / hbar;
  } else {
    throw ConfigError("config needs 'k' or 'velocity' (with optional 'mass')");
  }
  s.k_i = get("k_i");
  s.d = get("d");
  s.delta = get("delta");
  const double n = get("n");
  if (n != std::floor(n) || n < 1 || n > 1e6) throw ConfigError("config key 'n' must be a positive integer");
  s.n = static_cast<int>(n);
  s.y12 = get("y12");
  s.y23 = get("y23");
  s.B_i = {j.value("B_i_re", 1.0), j.value("B_i_im", 0.0)};

  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return s;
}

PhysicalSetup load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_json(const PhysicalSetup& s)
{
  nlohmann::json j;  // std::map-backed: keys come out sorted
  j["k"] = s.k;
  j["k_i"] = s.k_i;
  j["d"] = s.d;
  j["delta"] = s.delta;
  j["n"] = s.n;
  j["y12"] = s.y12;
  j["y23"] = s.y23;
  j["B_i_re"] = s.B_i.real();
  j["B_i_im"] = s.B_i.imag();
  if (s.mass) j["mass"] = *s.mass;
  if (s.velocity) j["velocity"] = *s.velocity;
  return j.dump();
}

}  // namespace mzi
