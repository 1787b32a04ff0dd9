#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args)
{
  const std::string cmd = std::string("\"") + MZI_CLI_PATH + "\" " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  Run r{-1, {}};
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name)
{
  const auto p = fs::temp_directory_path() / ("mzi_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

const std::string config = std::string(" --config \"") + MZI_SOURCE_DIR + "/configs/sodium.json\"";

}  // namespace

TEST(Cli, DerivePrintsLengths)
{
  const auto r = run("derive --out -" + config);
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("talbot_length_mm  = 6.48"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("y12p_at_0.3_mm    = 2.86"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.rfind("# manifest ", 0), 0u);
}

TEST(Cli, AnalyticVisibilityIsDeterministic)
{
  const auto a = scratch("va"), b = scratch("vb");
  const std::string args = " visibility --mode analytic --distribution mw --ratios 0:2:41" + config;
  ASSERT_EQ(run(args + " --out " + a.string()).status, 0);
  ASSERT_EQ(run(args + " --out " + b.string()).status, 0);
  const auto ta = slurp(a / "analytic.csv"), tb = slurp(b / "analytic.csv");
  EXPECT_EQ(ta, tb);
  EXPECT_EQ(ta.rfind("# manifest ", 0), 0u);
  std::istringstream in(ta);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line, "dp_over_lambda_i,V,phi_rad,distribution,N");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  EXPECT_EQ(rows, 41);
  EXPECT_TRUE(fs::exists(a / "visibility.manifest.json"));
  // a different option changes the manifest hash
  const auto c = scratch("vc");
  ASSERT_EQ(run(" visibility --mode analytic --distribution uniform --ratios 0:2:41" + config + " --out " +
                c.string())
                .status,
            0);
  EXPECT_NE(first_line(slurp(c / "analytic.csv")), first_line(ta));
  for (const auto& p : {a, b, c}) fs::remove_all(p);
}

TEST(Cli, FringeRerunIsByteIdentical)
{
  const auto a = scratch("fa"), b = scratch("fb");
  const std::string args = " fringe --distribution point --dkx-over-ki 1.5 --ratio 0.3" + config;
  ASSERT_EQ(run(args + " --out " + a.string()).status, 0);
  ASSERT_EQ(run(args + " --out " + b.string()).status, 0);
  const auto t = slurp(a / "fringe.csv");
  EXPECT_EQ(t, slurp(b / "fringe.csv"));
  EXPECT_NE(t.find("\ndx3_m,T\n"), std::string::npos);
  EXPECT_NE(t.find("# A_over_A_off="), std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, CarpetWritesCsvAndPgm)
{
  const auto a = scratch("ca");
  const auto r = run(" carpet --grid-n 8192 --y-max 0.01 --y-steps 8 --x-half-width 2e-6" + config +
                     " --out " + a.string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto pgm = slurp(a / "carpet.pgm");
  std::istringstream in(pgm);
  std::string magic, comment;
  std::getline(in, magic);
  std::getline(in, comment);
  EXPECT_EQ(magic, "P2");
  EXPECT_EQ(comment.rfind("# manifest ", 0), 0u);
  int cols = 0, rows = 0, maxval = 0;
  in >> cols >> rows >> maxval;
  EXPECT_EQ(rows, 8);
  EXPECT_EQ(maxval, 255);
  int v, count = 0, top = 0;
  while (in >> v) {
    EXPECT_GE(v, 0);
    EXPECT_LE(v, 255);
    top = std::max(top, v);
    ++count;
  }
  EXPECT_EQ(count, cols * rows);
  EXPECT_EQ(top, 255);
  const auto csv = slurp(a / "carpet.csv");
  EXPECT_EQ(first_line(csv), comment);
  fs::remove_all(a);
}

TEST(Cli, ErrorsExitNonZero)
{
  const auto dir = scratch("err");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << R"({"k": 5.09e11, "k_i": 1.0e7, "d": 2e-7, "delta": 1e-7, "n": 24,
 "y12": 0.65, "y23": 0.65, "colour": 1})";
  }
  auto r = run("derive --out - --config " + (dir / "bad.json").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("colour"), std::string::npos);

  r = run("visibility --mode analytic --distribution table --table \"" + std::string(MZI_SOURCE_DIR) +
          "/configs/example_table.csv\" --out " + dir.string() + config);
  EXPECT_EQ(r.status, 2);

  r = run("visibility --mode analytic --distribution gauss --N 0 --out " + dir.string() + config);
  EXPECT_EQ(r.status, 2);
  fs::remove_all(dir);
}
