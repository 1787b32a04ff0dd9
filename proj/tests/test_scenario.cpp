#include <gtest/gtest.h>

#include <cmath>

#include "mzi/scenario.hpp"
#include "mzi/types.hpp"

using namespace mzi;

TEST(Scenario, DeBroglieWavelengthIsTwoPiOverK)
{
  const auto q = derive(sodium_setup());
  EXPECT_NEAR(q.lambda, 2 * std::acos(-1.0) / 5.09e11, 1e-25);
  EXPECT_NEAR(q.lambda_i, 589e-9, 1e-21);
}

TEST(Scenario, TalbotLengthDefinition)
{
  auto s = sodium_setup();
  const auto q = derive(s);
  EXPECT_DOUBLE_EQ(q.talbot_length, 2 * s.d * s.d / q.lambda);

  // d == lambda -> L_T == 2d
  s.d = q.lambda;
  s.delta = s.d / 2;
  EXPECT_NEAR(derive(s).talbot_length, 2 * s.d, 1e-15 * s.d);
}

TEST(Scenario, TalbotLengthQuadraticAndMonotoneInPitch)
{
  auto s = sodium_setup();
  const double lt = derive(s).talbot_length;
  s.d *= 2;
  s.delta *= 2;
  EXPECT_NEAR(derive(s).talbot_length, 4 * lt, 1e-12 * lt);
  double prev = 0;
  for (double d = 50e-9; d < 1e-6; d *= 1.3) {
    s.d = d;
    s.delta = d / 2;
    const double v = derive(s).talbot_length;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Scenario, ScatteringLocationForPaperRatios)
{
  const auto s = sodium_setup();
  EXPECT_NEAR(dp_ratio_to_y12prime(0.3, s), 2.863e-3, 1e-6);
  EXPECT_NEAR(dp_ratio_to_y12prime(2.0, s), 19.09e-3, 1e-5);
  EXPECT_EQ(dp_ratio_to_y12prime(0.0, s), 0.0);
  EXPECT_THROW(dp_ratio_to_y12prime(-0.1, s), std::invalid_argument);
}

TEST(Scenario, RatioRoundTrip)
{
  const auto s = sodium_setup();
  for (double e = -6; e <= 3; e += 0.25) {
    const double r = std::pow(10.0, e);
    const double back = y12prime_to_dp_ratio(dp_ratio_to_y12prime(r, s), s);
    EXPECT_NEAR(back, r, 1e-12 * r) << r;
  }
}

TEST(Scenario, PathSeparationLinearIncreasing)
{
  const auto s = sodium_setup();
  const auto q = derive(s);
  double prev = -1;
  for (double y = 0; y < 0.02; y += 1e-3) {
    const double dp = path_separation(y, s);
    EXPECT_NEAR(dp, q.dp_per_y12prime * y, 1e-15);
    EXPECT_GT(dp, prev);
    prev = dp;
  }
  // d_p at the ratio-defined location is ratio * lambda_i
  EXPECT_NEAR(path_separation(dp_ratio_to_y12prime(0.7, s), s), 0.7 * q.lambda_i, 1e-20);
}

TEST(Scenario, NearFieldClassification)
{
  const auto s = sodium_setup();
  EXPECT_EQ(classify_region(2.863e-3, s), Region::near_field);
  EXPECT_EQ(classify_region(0.0, s), Region::near_field);
  EXPECT_EQ(classify_region(0.65, s), Region::far_field);
  const double bound = 10 * derive(s).talbot_length;
  EXPECT_EQ(classify_region(bound, s), Region::far_field);
  EXPECT_EQ(classify_region(std::nextafter(bound, 0.0), s), Region::near_field);
}

TEST(Scenario, InvalidParametersRejected)
{
  auto s = sodium_setup();
  s.d = 0;
  EXPECT_THROW(derive(s), std::invalid_argument);
  s = sodium_setup();
  s.y23 = -1;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = sodium_setup();
  s.delta = 1.5 * s.d;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s = sodium_setup();
  s.n = 0;
  EXPECT_THROW(validate(s), std::invalid_argument);
}

namespace {
const char* fig1_json = R"({"k": 5.09e11, "k_i": 10667547.210831216, "d": 2e-7, "delta": 1e-7,
  "n": 24, "y12": 0.65, "y23": 0.65})";
}

TEST(Config, ParsesFlatObject)
{
  const auto s = parse_config(fig1_json);
  EXPECT_EQ(s.k, 5.09e11);
  EXPECT_EQ(s.n, 24);
  EXPECT_EQ(s.B_i, std::complex<double>(1, 0));
  EXPECT_FALSE(s.velocity.has_value());
}

TEST(Config, RejectsUnknownAndMissingKeys)
{
  EXPECT_THROW(parse_config(R"({"k": 5e11, "k_i": 1e7, "d": 2e-7, "delta": 1e-7, "n": 24, "y12": 0.65,
      "y23": 0.65, "colour": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"k": 5e11, "k_i": 1e7, "d": 2e-7, "delta": 1e-7, "n": 24, "y12": 0.65})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"k": 5e11, "k_i": 1e7, "d": 2e-7, "delta": 1e-7, "n": 2.5, "y12": 0.65,
      "y23": 0.65})"), ConfigError);
  EXPECT_THROW(parse_config(R"([1, 2])"), ConfigError);
}

TEST(Config, ParseErrorNamesLine)
{
  try {
    parse_config("{\n\"k\": 5e11,\n\"k_i\": ,\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, MassVelocityRoute)
{
  const auto s = parse_config(R"({"velocity": 1400, "k_i": 1e7, "d": 2e-7, "delta": 1e-7, "n": 24,
      "y12": 0.65, "y23": 0.65})");
  const double k = sodium_mass * 1400 / hbar;
  EXPECT_LT(std::abs(s.k - k) / k, 1e-12);

  // the caption's k and v disagree by 0.4%: rejected
  EXPECT_THROW(parse_config(R"({"k": 5.09e11, "velocity": 1400, "k_i": 1e7, "d": 2e-7, "delta": 1e-7,
      "n": 24, "y12": 0.65, "y23": 0.65})"), ConfigError);
  // consistent pair accepted
  const auto ok = parse_config(R"({"k": 1e11, "mass": 1e-26, "velocity": 1054.571817, "k_i": 1e7,
      "d": 2e-7, "delta": 1e-7, "n": 24, "y12": 0.65, "y23": 0.65})");
  EXPECT_EQ(ok.k, 1e11);
}

TEST(Config, ComplexAmplitudeAndSnapshotRoundTrip)
{
  const auto s = parse_config(R"({"k": 5.09e11, "k_i": 1e7, "d": 2e-7, "delta": 1e-7, "n": 24,
      "y12": 0.65, "y23": 0.65, "B_i_re": 0, "B_i_im": 1})");
  EXPECT_EQ(s.B_i, std::complex<double>(0, 1));
  const auto again = parse_config(config_json(s));
  EXPECT_EQ(config_json(again), config_json(s));
  EXPECT_EQ(again.k_i, s.k_i);
}

TEST(Config, ShippedFigureConfigMatchesCaption)
{
  const auto s = load_config(std::string(MZI_SOURCE_DIR) + "/configs/sodium.json");
  const auto f = sodium_setup();
  EXPECT_EQ(s.k, f.k);
  EXPECT_EQ(s.k_i, f.k_i);
  EXPECT_EQ(s.d, f.d);
  EXPECT_EQ(s.n, f.n);
}
