#include "mzi/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mzi {

std::uint64_t fnv1a64(const std::string& bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v)
{
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

std::string RunManifest::hash() const
{
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["config"] = nlohmann::json::parse(config_json);
  j["options"] = options;
  j["version"] = version;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

std::string RunManifest::json() const
{
  nlohmann::json j;
  j["hash"] = hash();
  j["subcommand"] = subcommand;
  j["config"] = nlohmann::json::parse(config_json);
  j["options"] = options;
  j["outputs"] = outputs;
  j["version"] = version;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

std::string manifest_comment(const RunManifest& m)
{
  return "# manifest " + m.hash() + " " + m.subcommand + " mzi " + m.version;
}

std::string pgm_p2(const Eigen::MatrixXd& m, const std::string& comment)
{
  std::ostringstream os;
  // the magic number has to come first; the comment follows it
  os << "P2\n" << comment << "\n" << m.cols() << " " << m.rows() << "\n255\n";
  const double top = m.size() ? m.maxCoeff() : 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const long v = top > 0 ? std::lround(255.0 * std::max(0.0, m(r, c)) / top) : 0;
      os << (c ? " " : "") << std::min(255L, v);
    }
    os << "\n";
  }
  return os.str();
}

std::string csv_matrix(const Eigen::MatrixXd& m)
{
  std::string s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) s += ',';
      s += format_double(m(r, c));
    }
    s += '\n';
  }
  return s;
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace mzi
