#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mzi {

#ifndef MZI_VERSION
#define MZI_VERSION "0.0.0"
#endif

// Everything that determines an output. The hash covers all fields except
// the output list and wall time, so reruns hash identically.
struct RunManifest {
  std::string subcommand;
  std::string config_json;
  std::map<std::string, std::string> options;
  std::vector<std::string> outputs;
  std::string version = MZI_VERSION;
  double wall_seconds = 0;

  std::string hash() const;
  std::string json() const;
};

std::uint64_t fnv1a64(const std::string& bytes);

// round-trip formatting, locale independent
std::string format_double(double v);

// "# manifest <hash> <subcommand> mzi <version>"
std::string manifest_comment(const RunManifest& m);

// plain P2 graymap, 8 bit, scaled so the frame maximum maps to 255
std::string pgm_p2(const Eigen::MatrixXd& m, const std::string& comment);
std::string csv_matrix(const Eigen::MatrixXd& m);

void write_file(const std::string& path, const std::string& content);

}  // namespace mzi
