// mzi: command-line front end (derive, carpet, fringe, visibility, check)

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mzi/analytic.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/io.hpp"
#include "mzi/oracle.hpp"

namespace fs = std::filesystem;
using namespace mzi;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  int nodes = 64;
  int scan_samples = 16;
  long grid_n = 1 << 16;
  double grid_width = 0;  // 0: 1024 pitches
  std::string distribution;
  std::string table;
  double N = 1.0;
  double dkx_over_ki = 0.0;
  double ratio = -1;
  std::string ratios;
  std::string mode = "numerical";
  // carpet
  double y_min = 0, y_max = -1, x_half_width = 3e-6;
  int y_steps = 256;
  // propagation
  int steps_per_arm = 8;
  double absorber = 0.25;
};

std::string read_text(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PhysicalSetup load_setup(const Options& o)
{
  return o.config.empty() ? sodium_setup() : load_config(o.config);
}

Grid1D<double> grid_for(const Options& o, const PhysicalSetup& s)
{
  const double width = o.grid_width > 0 ? o.grid_width : s.d / 64 * double(o.grid_n);
  return Grid1D<double>::centered(width, o.grid_n);
}

PropagationOptions propagation_for(const Options& o)
{
  PropagationOptions p;
  p.steps_per_arm = o.steps_per_arm;
  p.absorber_fraction = o.absorber;
  return p;
}

std::vector<double> ratio_list(const Options& o, std::vector<double> fallback)
{
  if (!o.ratios.empty()) {
    double a = 0, b = 0;
    long n = 0;
    char c1 = 0, c2 = 0, extra = 0;
    std::istringstream ss(o.ratios);
    if (!(ss >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || (ss >> extra) || n < 1)
      throw std::invalid_argument("--ratios expects start:stop:count");
    std::vector<double> r(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) r[std::size_t(i)] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return r;
  }
  if (o.ratio >= 0) return {o.ratio};
  return fallback;
}

MomentumDistribution distribution_for(const Options& o, double k_i, const std::string& fallback)
{
  const std::string d = o.distribution.empty() ? fallback : o.distribution;
  if (d == "point") return PointLaw{o.dkx_over_ki * k_i};
  if (d == "uniform") return UniformLaw{};
  if (d == "mw") return MandelWolfLaw{};
  if (d == "gauss") return TruncatedGaussianLaw{o.N};
  if (d == "table") {
    if (o.table.empty()) throw std::invalid_argument("--distribution table needs --table <csv>");
    return load_tabulated(o.table);
  }
  throw std::invalid_argument("unknown distribution '" + d + "'");
}

RunManifest manifest_for(const std::string& sub, const PhysicalSetup& s, std::map<std::string, std::string> opts)
{
  RunManifest m;
  m.subcommand = sub;
  m.config_json = config_json(s);
  m.options = std::move(opts);
  return m;
}

void finish(RunManifest& m, const Options& o, const std::chrono::steady_clock::time_point t0)
{
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path p = fs::path(o.out) / (m.subcommand + ".manifest.json");
  write_file(p.string(), m.json());
  for (const auto& f : m.outputs) std::cout << "wrote " << f << "\n";
  std::cout << "wrote " << p.string() << "\n";
}

std::string g(double v) { return format_double(v); }

std::map<std::string, std::string> common_opts(const Options& o)
{
  return {{"grid_n", std::to_string(o.grid_n)},
          {"grid_width", g(o.grid_width)},
          {"steps_per_arm", std::to_string(o.steps_per_arm)},
          {"absorber", g(o.absorber)}};
}

void add_distribution_opts(std::map<std::string, std::string>& m, const Options& o, const std::string& dist)
{
  m["distribution"] = dist;
  m["nodes"] = std::to_string(o.nodes);
  if (dist == "point") m["dkx_over_ki"] = g(o.dkx_over_ki);
  if (dist == "gauss") m["N"] = g(o.N);
  if (dist == "table") {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(read_text(o.table))));
    m["table_fnv1a"] = buf;
  }
}

int cmd_derive(const Options& o)
{
  const auto s = load_setup(o);
  const auto q = derive(s);
  auto m = manifest_for("derive", s, {});
  std::ostringstream r;
  r << manifest_comment(m) << "\n";
  char buf[256];
  auto line = [&](const char* fmt, double v) {
    std::snprintf(buf, sizeof buf, fmt, v);
    r << buf << "\n";
  };
  line("lambda_m          = %.6e", q.lambda);
  line("lambda_i_m        = %.6e", q.lambda_i);
  line("talbot_length_mm  = %.4f", q.talbot_length * 1e3);
  line("dp_per_y12p       = %.6e", q.dp_per_y12prime);
  line("near_field_bound_mm = %.4f", q.near_field_bound * 1e3);
  line("y12p_at_0.3_mm    = %.4f", dp_ratio_to_y12prime(0.3, s) * 1e3);
  line("y12p_at_2_mm      = %.4f", dp_ratio_to_y12prime(2.0, s) * 1e3);
  std::cout << r.str();
  if (!o.out.empty() && o.out != "-") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = (fs::path(o.out) / "derive.txt").string();
    write_file(p, r.str());
    m.outputs.push_back(p);
    finish(m, o, t0);
  }
  return 0;
}

int cmd_carpet(const Options& o)
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = load_setup(o);
  CarpetRequest req;
  req.y_min = o.y_min;
  req.y_max = o.y_max >= 0 ? o.y_max : s.y12 + s.y23;
  req.y_steps = o.y_steps;
  req.dkx = o.dkx_over_ki * s.k_i;
  req.y12prime = dp_ratio_to_y12prime(o.ratio >= 0 ? o.ratio : 0.3, s);
  req.x_half_width = o.x_half_width;
  const auto c = carpet(s, grid_for(o, s), req, propagation_for(o));

  auto opts = common_opts(o);
  opts["y_min"] = g(req.y_min);
  opts["y_max"] = g(req.y_max);
  opts["y_steps"] = std::to_string(req.y_steps);
  opts["dkx_over_ki"] = g(o.dkx_over_ki);
  opts["y12prime"] = g(req.y12prime);
  opts["x_half_width"] = g(req.x_half_width);
  auto m = manifest_for("carpet", s, opts);

  std::string csv = manifest_comment(m) + "\ny_m";
  for (Eigen::Index j = 0; j < c.x.size(); ++j) csv += "," + g(c.x[j]);
  csv += "\n";
  for (Eigen::Index r = 0; r < c.density.rows(); ++r) {
    csv += g(c.y[r]);
    for (Eigen::Index j = 0; j < c.density.cols(); ++j) csv += "," + g(c.density(r, j));
    csv += "\n";
  }
  const auto pc = (fs::path(o.out) / "carpet.csv").string();
  const auto pp = (fs::path(o.out) / "carpet.pgm").string();
  write_file(pc, csv);
  write_file(pp, pgm_p2(c.density, manifest_comment(m)));
  m.outputs = {pc, pp};
  finish(m, o, t0);
  return 0;
}

int cmd_fringe(const Options& o)
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = load_setup(o);
  const std::string dist_name = o.distribution.empty() ? "point" : o.distribution;
  PipelineConfig c;
  c.setup = s;
  c.grid = grid_for(o, s);
  c.y12prime = dp_ratio_to_y12prime(o.ratio >= 0 ? o.ratio : 0.3, s);
  c.distribution = distribution_for(o, s.k_i, "point");
  c.node_count = o.nodes;
  c.scan_samples = o.scan_samples;
  c.propagation = propagation_for(o);
  validate(c);
  const Interferometer ifm(c.setup, c.grid, c.propagation);
  const auto scan = ifm.scan_fringe(c.y12prime, quadrature_nodes(c.distribution, c.node_count, s.k_i), c.scan_samples);
  const auto& off = ifm.baseline(c.scan_samples);

  auto opts = common_opts(o);
  add_distribution_opts(opts, o, dist_name);
  opts["ratio"] = g(y12prime_to_dp_ratio(c.y12prime, s));
  opts["scan_samples"] = std::to_string(o.scan_samples);
  auto m = manifest_for("fringe", s, opts);

  std::string csv = manifest_comment(m) + "\ndx3_m,T\n";
  for (Eigen::Index i = 0; i < scan.T.size(); ++i) csv += g(scan.shifts[i]) + "," + g(scan.T[i]) + "\n";
  // phase relative to the laser-off fringe; the raw phase also includes the
  // offset of the grating lattice
  const double rel = std::arg(scan.fit.c1 / off.c1);
  csv += "# a_prime=" + g(scan.fit.mean) + "\n";
  csv += "# A=" + g(scan.fit.amplitude) + "\n";
  csv += "# phi_rad=" + g(scan.fit.phase) + "\n";
  csv += "# r=" + g(scan.fit.residual) + "\n";
  csv += "# A_off=" + g(off.amplitude) + "\n";
  csv += "# phi_rel_rad=" + g(rel) + "\n";
  csv += "# A_over_A_off=" + g(scan.fit.amplitude / off.amplitude) + "\n";
  const auto p = (fs::path(o.out) / "fringe.csv").string();
  write_file(p, csv);
  m.outputs = {p};
  finish(m, o, t0);
  return 0;
}

AnalyticVisibility analytic_for(const MomentumDistribution& d, double dp, const PhysicalSetup& s)
{
  if (std::holds_alternative<UniformLaw>(d)) return visibility_uniform(dp, s.k_i);
  if (std::holds_alternative<MandelWolfLaw>(d)) return visibility_mandel_wolf(dp, two_pi / s.k_i);
  if (const auto* gl = std::get_if<TruncatedGaussianLaw>(&d)) return visibility_gaussian(dp, s.k_i, gl->N);
  if (const auto* p = std::get_if<PointLaw>(&d)) return {1.0, dp * p->dkx};
  throw std::invalid_argument("analytic mode has no closed form for a tabulated distribution");
}

int cmd_visibility(const Options& o)
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = load_setup(o);
  const std::string dist_name = o.distribution.empty() ? "uniform" : o.distribution;
  if (o.mode != "numerical" && o.mode != "analytic" && o.mode != "both")
    throw std::invalid_argument("--mode must be numerical, analytic or both");
  if (o.mode != "numerical" && dist_name == "table")
    throw std::invalid_argument("unsupported combination: analytic mode with a tabulated distribution");
  const auto dist = distribution_for(o, s.k_i, "uniform");
  std::vector<double> def(20);
  for (int i = 0; i < 20; ++i) def[std::size_t(i)] = 2.0 * i / 19;
  const auto ratios = ratio_list(o, def);
  const double lambda_i = two_pi / s.k_i;

  auto opts = common_opts(o);
  add_distribution_opts(opts, o, dist_name);
  opts["mode"] = o.mode;
  opts["scan_samples"] = std::to_string(o.scan_samples);
  std::string rl;
  for (double r : ratios) rl += (rl.empty() ? "" : ";") + g(r);
  opts["ratios"] = rl;
  auto m = manifest_for("visibility", s, opts);
  const std::string head = manifest_comment(m) + "\n";
  std::string nparam = dist_name == "gauss" ? g(o.N) : "";

  if (o.mode == "analytic") {
    std::string csv = head + "dp_over_lambda_i,V,phi_rad,distribution,N\n";
    for (double r : ratios) {
      const auto a = analytic_for(dist, r * lambda_i, s);
      csv += g(r) + "," + g(a.V) + "," + g(a.phi) + "," + dist_name + "," + nparam + "\n";
    }
    const auto p = (fs::path(o.out) / "analytic.csv").string();
    write_file(p, csv);
    m.outputs = {p};
    finish(m, o, t0);
    return 0;
  }

  PipelineConfig c;
  c.setup = s;
  c.grid = grid_for(o, s);
  c.distribution = dist;
  c.node_count = o.nodes;
  c.scan_samples = o.scan_samples;
  c.propagation = propagation_for(o);
  validate(c);
  const Interferometer ifm(c.setup, c.grid, c.propagation);
  const auto pts = visibility_curve(ifm, dist, ratios, c.node_count, c.scan_samples);

  std::string csv = head + "dp_over_lambda_i,V_rel,abs_V,phi_rad,residual,A_on,A_off";
  if (o.mode == "both") csv += ",V_analytic,phi_analytic_rad,dV,dphi_rad";
  csv += "\n";
  for (const auto& p : pts) {
    csv += g(p.ratio) + "," + g(p.V_rel) + "," + g(p.abs_V) + "," + g(p.phi) + "," + g(p.residual) + "," +
           g(p.A_on) + "," + g(p.A_off);
    if (o.mode == "both") {
      const auto a = analytic_for(dist, p.ratio * lambda_i, s);
      const double dphi = std::remainder(p.phi - a.phi, two_pi);
      csv += "," + g(a.V) + "," + g(a.phi) + "," + g(p.V_rel - a.V) + "," + g(dphi);
    }
    csv += "\n";
  }
  const auto p = (fs::path(o.out) / "visibility.csv").string();
  write_file(p, csv);
  m.outputs = {p};
  finish(m, o, t0);
  return 0;
}

int cmd_check(const Options& o)
{
  const auto s = load_setup(o);
  std::vector<oracle::CheckResult> all;
  for (auto&& v : {oracle::check_propagators(s), oracle::check_kick_routes(s), oracle::check_analytic(s, o.N)})
    all.insert(all.end(), v.begin(), v.end());
  int failed = 0;
  for (const auto& r : all) {
    std::printf("%s  %-52s %.3e (tol %.1e)  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value, r.tolerance,
                r.detail.c_str());
    failed += !r.pass;
  }
  std::printf("%d of %zu checks passed\n", int(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Three-grating matter-wave interferometer with photon scattering"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "flat JSON config (default: built-in sodium setup)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
  };
  auto grid_flags = [&](CLI::App* sub) {
    sub->add_option("--grid-n", o.grid_n, "grid points (power of two)");
    sub->add_option("--grid-width", o.grid_width, "grid width in m (default: grid-n * d/64)");
    sub->add_option("--steps-per-arm", o.steps_per_arm, "split steps per free flight");
    sub->add_option("--absorber", o.absorber, "absorber taper fraction of each half window (0 = off)");
  };
  auto dist_flags = [&](CLI::App* sub) {
    sub->add_option("--distribution", o.distribution, "momentum law")
        ->check(CLI::IsMember({"point", "uniform", "mw", "gauss", "table"}));
    sub->add_option("--table", o.table, "CSV dkx_over_ki,density for --distribution table");
    sub->add_option("--N", o.N, "truncated-Gaussian width in units of k_i");
    sub->add_option("--dkx-over-ki", o.dkx_over_ki, "kick for the point law, in units of k_i");
    sub->add_option("--nodes", o.nodes, "Gauss-Legendre nodes");
    sub->add_option("--scan-samples", o.scan_samples, "grating-3 shifts per period");
  };

  auto* derive_cmd = app.add_subcommand("derive", "derived lengths of the setup");
  common(derive_cmd);

  auto* carpet_cmd = app.add_subcommand("carpet", "|psi|^2 density map, CSV + PGM");
  common(carpet_cmd);
  grid_flags(carpet_cmd);
  carpet_cmd->add_option("--dkx-over-ki", o.dkx_over_ki, "kick in units of k_i (0 = no scattering)");
  carpet_cmd->add_option("--ratio", o.ratio, "scattering location as d_p/lambda_i (default 0.3)");
  carpet_cmd->add_option("--y-min", o.y_min, "first row station, m");
  carpet_cmd->add_option("--y-max", o.y_max, "last row station, m (default y12 + y23)");
  carpet_cmd->add_option("--y-steps", o.y_steps, "number of rows");
  carpet_cmd->add_option("--x-half-width", o.x_half_width, "columns kept: |x| <= this, m");

  auto* fringe_cmd = app.add_subcommand("fringe", "transmission vs grating-3 shift");
  common(fringe_cmd);
  grid_flags(fringe_cmd);
  dist_flags(fringe_cmd);
  fringe_cmd->add_option("--ratio", o.ratio, "d_p/lambda_i (default 0.3)");

  auto* vis_cmd = app.add_subcommand("visibility", "relative visibility vs d_p/lambda_i");
  common(vis_cmd);
  grid_flags(vis_cmd);
  dist_flags(vis_cmd);
  auto* r1 = vis_cmd->add_option("--ratio", o.ratio, "single d_p/lambda_i");
  auto* r2 = vis_cmd->add_option("--ratios", o.ratios, "start:stop:count (default 0:2:20)");
  r1->excludes(r2);
  vis_cmd->add_option("--mode", o.mode, "numerical, analytic or both");

  auto* check_cmd = app.add_subcommand("check", "oracle suites");
  common(check_cmd);
  check_cmd->add_option("--N", o.N, "truncated-Gaussian width for the analytic suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!o.out.empty() && o.out != "-") fs::create_directories(o.out);
    if (*derive_cmd) return cmd_derive(o);
    if (*carpet_cmd) return cmd_carpet(o);
    if (*fringe_cmd) return cmd_fringe(o);
    if (*vis_cmd) return cmd_visibility(o);
    if (*check_cmd) return cmd_check(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
