#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pseudolin/cli.hpp"
#include "support.hpp"

using namespace pseudolin;
using pseudolin::cli::JobConfig;
using pseudolin::cli::run;

namespace {

JobConfig job(const std::string& command) {
  JobConfig c;
  c.command = command;
  return c;
}

int exit_status(const std::string& args) {
  const std::string cmd = std::string(PSEUDOLIN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST(Cli, OrderTable) {
  JobConfig c = job("order");
  c.curve = "0 0 1 -1 0";
  c.x = 5;
  c.format = "csv";
  const auto r = run(c);
  ASSERT_EQ(r.status, 0) << r.error;
  EXPECT_EQ(r.output, "p,N_p\n2,5\n3,7\n5,8\n");
  c.format = "text";
  EXPECT_EQ(run(c).output, "p=2 N_p=5\np=3 N_p=7\np=5 N_p=8\n");
}

TEST(Cli, ConstructPrintsLx) {
  JobConfig c = job("construct");
  c.curve = "0 0 1 -1 0";
  c.gamma = "trivial";
  c.x = 5;
  const auto r = run(c);
  ASSERT_EQ(r.status, 0) << r.error;
  EXPECT_NE(r.output.find("L_x=280\n"), std::string::npos);
  EXPECT_NE(r.output.find("R_min=0,0\n"), std::string::npos);
  EXPECT_NE(r.output.find("hhat(Q_min)=["), std::string::npos);
}

TEST(Cli, ExitCodes) {
  JobConfig c = job("order");
  c.curve = "0 0 1 -1";
  c.x = 5;
  EXPECT_EQ(run(c).status, cli::kExitParse);
  c.curve = "0 0 x -1 0";
  EXPECT_EQ(run(c).status, cli::kExitParse);
  c.curve = "0 0 0 0 0";
  EXPECT_EQ(run(c).status, cli::kExitDomain);  // singular
  c = job("construct");
  c.curve = "0 0 0 0 1";
  c.x = 3;
  EXPECT_EQ(run(c).status, cli::kExitDomain);  // no good prime
  c = job("frobnicate");
  EXPECT_EQ(run(c).status, cli::kExitParse);

  EXPECT_EQ(exit_status("order --curve \"0 0 1 -1 0\" --x 5"), 0);
  EXPECT_EQ(exit_status("order --curve \"0 0 1 -1\" --x 5"), 2);
  EXPECT_EQ(exit_status("order --curve \"0 0 1 -1 0\" --x five"), 2);
  EXPECT_EQ(exit_status("order --curve \"0 0 0 0 0\" --x 5"), 1);
  EXPECT_EQ(exit_status("nonsense"), 2);
}

TEST(Cli, WitnessNoneIsSuccess) {
  JobConfig c = job("witness");
  c.gamma = fixtures::data_path("37a_gamma_3P.txt");
  c.point = "-1,-1";  // 3P, a member
  c.pmax = 50;
  auto r = run(c);
  ASSERT_EQ(r.status, 0) << r.error;
  EXPECT_NE(r.output.find("witness: none <= 50"), std::string::npos);
  c.point = "0,0";
  r = run(c);
  EXPECT_NE(r.output.find("witness: 7\n"), std::string::npos);
}

TEST(Cli, VerifyAndScan) {
  JobConfig c = job("verify");
  c.gamma = fixtures::data_path("389a_gamma.txt");
  c.basis = fixtures::data_path("389a_basis.txt");
  c.x = 30;
  auto r = run(c);
  ASSERT_EQ(r.status, 0) << r.error;
  EXPECT_NE(r.output.find("result: pass"), std::string::npos);
  c.format = "csv";
  r = run(c);
  EXPECT_EQ(r.output.rfind("p,N_p,T_p,member\n", 0), 0u);

  c = job("scan");
  c.gamma = fixtures::data_path("c5_gamma_torsion.txt");
  c.basis = fixtures::data_path("c5_basis.txt");
  c.grid = "20:40:10";
  r = run(c);
  ASSERT_EQ(r.status, 0) << r.error;
  std::istringstream is(r.output);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) ++n;
  EXPECT_EQ(n, 4);
  EXPECT_NE(r.output.find(",yes,NA\n"), std::string::npos);
}

TEST(Cli, BoundsAndDeterminism) {
  JobConfig c = job("bounds");
  c.basis = fixtures::data_path("37a_basis.txt");
  c.gamma = "trivial";
  c.grid = "50:100:50";
  const auto a = run(c);
  const auto b = run(c);
  ASSERT_EQ(a.status, 0) << a.error;
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.output.rfind(BoundReport::kHeader, 0), 0u);
}

TEST(Cli, CurveMismatchIsRejected) {
  JobConfig c = job("order");
  c.curve = "0 0 1 -1 0";
  c.gamma = fixtures::data_path("389a_gamma.txt");
  c.x = 5;
  EXPECT_EQ(run(c).status, cli::kExitDomain);
}

TEST(Cli, StructureAndOutFile) {
  const std::string path = ::testing::TempDir() + "pseudolin_structure.csv";
  EXPECT_EQ(exit_status("structure --curve \"0 0 0 1 0\" --p 7 --format csv --out " + path), 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "p,N_p,d1,d2\n7,8,1,8\n");
}

TEST(Io, Parsers) {
  EXPECT_EQ(io::parse_rational("-6/4"), mpq_class(-3, 2));
  EXPECT_THROW(io::parse_rational("1/0"), ParseError);
  EXPECT_THROW(io::parse_rational("1.5"), ParseError);
  EXPECT_TRUE(io::parse_point(" inf ").is_infinity());
  EXPECT_EQ(io::parse_point("1/4,-5/8"), PointQ(mpq_class(1, 4), mpq_class(-5, 8)));
  EXPECT_THROW(io::parse_point("1,2,3"), ParseError);
  EXPECT_EQ(io::parse_grid("50:200:50"), (std::vector<double>{50, 100, 150, 200}));
  EXPECT_THROW(io::parse_grid("50:20:5"), ParseError);
  std::istringstream in("# comment\n0 0 1 -1 0  # 37a\n\nfree 0,0\ntorsion inf\n");
  const auto f = io::parse_subgroup(in);
  EXPECT_EQ(f.free_gens.size(), 1u);
  EXPECT_EQ(f.torsion_gens.size(), 1u);
  std::istringstream bad("0 0 1 -1 0\nfree 1,1\n");
  EXPECT_THROW(io::parse_subgroup(bad), NotOnCurve);
}
