#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "certhom/io.hpp"

namespace certhom {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ =
        fs::temp_directory_path() /
        ("certhom_cli_" +
         std::string(
             ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }
  fs::path dir_;
};

TEST_F(CliTest, OptimizeR) {
  const Outcome o = run({"optimize-r", "--degrees", "2,2"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("r_star 0.746119"), std::string::npos) << o.out;
}

TEST_F(CliTest, MuOfFeketeQuartic) {
  ASSERT_EQ(
      run({"--out", path("fekete.sys"), "system", "--kind", "fekete"}).code, 0);
  const Outcome o = run({"mu", "--file", path("fekete.sys"), "--all-roots"});
  EXPECT_EQ(o.code, 0) << o.err;
  for (int i = 0; i < 4; ++i)
    EXPECT_NE(o.out.find("mu_root " + std::to_string(i) + " 1.22474"),
              std::string::npos)
        << o.out;
  EXPECT_NE(o.out.find("mu 1.22474"), std::string::npos);
}

TEST_F(CliTest, TrackPrintsSteps) {
  ASSERT_EQ(run({"--seed", "3", "--out", path("pair.sys"), "system", "--kind",
                 "random-pair", "--degrees", "2,2"})
                .code,
            0);
  ASSERT_EQ(run({"--seed", "4", "--out", path("target.sys"), "system", "--kind",
                 "random", "--degrees", "2,2"})
                .code,
            0);
  const Outcome cert = run(
      {"track", "--target", path("target.sys"), "--start", path("pair.sys")});
  ASSERT_EQ(cert.code, 0) << cert.err;
  EXPECT_NE(cert.out.find("NumberOfSteps "), std::string::npos);
  EXPECT_NE(cert.out.find("Status converged"), std::string::npos) << cert.out;

  const Outcome traced = run({"--trace", "track", "--target",
                              path("target.sys"), "--start", path("pair.sys")});
  EXPECT_NE(traced.out.find("step 0 s 0"), std::string::npos) << traced.out;
  EXPECT_NE(traced.out.find(" phi "), std::string::npos);
}

TEST_F(CliTest, SystemSolveRoundTrip) {
  ASSERT_EQ(run({"--seed", "9", "--out", path("q.sys"), "system", "--kind",
                 "random", "--degrees", "4"})
                .code,
            0);
  const Outcome o = run({"--out", path("solved.sys"), "solve", "--target",
                         path("q.sys"), "--r-opt"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("roots 4"), std::string::npos);
  const SystemFile solved = read_system_file(path("solved.sys"));
  EXPECT_EQ(solved.system, read_system_file(path("q.sys")).system);
  ASSERT_EQ(solved.roots.size(), 4u);

  // The written roots are accepted as start roots by mu.
  const Outcome mu = run({"mu", "--file", path("solved.sys")});
  EXPECT_EQ(mu.code, 0) << mu.err;
  EXPECT_NE(mu.out.find("mu "), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"optimize-r", "--degrees", "x"}).code, 2);
  EXPECT_EQ(run({"optimize-r", "--degrees", "2", "--digits", "many"}).code, 2);
  EXPECT_EQ(run({"search", "--degrees", "2,2", "--include", "fekete"}).code, 2);
}

TEST_F(CliTest, FailuresExitOneWithErrorLine) {
  const Outcome missing = run({"mu", "--file", path("nope.sys")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.err.rfind("error kind=", 0), 0u) << missing.err;
  EXPECT_NE(missing.err.find("message=\""), std::string::npos);

  std::ofstream(path("bad.sys")) << "certhom-system 1\nvariables 2\n"
                                    "degrees 2\npoly 0 terms 1\n1 1 x 0\nend\n";
  const Outcome bad = run({"mu", "--file", path("bad.sys")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.err.rfind("error kind=parse", 0), 0u) << bad.err;
  EXPECT_NE(bad.err.find("5"), std::string::npos);
}

TEST_F(CliTest, SearchIsDeterministic) {
  const std::vector<std::string> args = {
      "--seed", "5", "search",    "--degrees", "4",         "--candidates", "8",
      "--keep", "2", "--targets", "4",         "--include", "total_r1"};
  auto with_prefix = [&](const std::string& prefix, int threads) {
    std::vector<std::string> a = {"--out", path(prefix), "--threads",
                                  std::to_string(threads)};
    a.insert(a.end(), args.begin(), args.end());
    return run(a);
  };
  const Outcome one = with_prefix("a", 1);
  const Outcome two = with_prefix("b", 2);
  ASSERT_EQ(one.code, 0) << one.err;
  ASSERT_EQ(two.code, 0) << two.err;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_NE(slurp(path("a.json")).find("\"seed\": 5"), std::string::npos);
  EXPECT_EQ(slurp(path("a.csv")).rfind("row,g_1,g_2,g_total_r1\n", 0), 0u);
}

TEST_F(CliTest, Selftest) {
  const Outcome o = run({"selftest"});
  EXPECT_NE(o.out.find("[1]"), std::string::npos);
  EXPECT_NE(o.out.find("[8]"), std::string::npos);
  EXPECT_NE(o.out.find(o.code == 0 ? "selftest passed" : "selftest failed"),
            std::string::npos);
}

}  // namespace
}  // namespace certhom
