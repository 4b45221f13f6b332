#include <catenoid/cli.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace catenoid;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<const char*> args) {
  args.insert(args.begin(), "catenoid");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kSamples = CATENOID_SAMPLES_DIR;

}  // namespace

TEST(Cli, ConstantsText) {
  const auto r = invoke({"constants"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("T = 1.19967864026\n"), std::string::npos);
  EXPECT_NE(r.out.find("8 pi / T = 20.949561312\n"), std::string::npos);
}

TEST(Cli, IndexJsonExample) {
  const auto r = invoke({"index", "--grid-n", "1024", "--modes", "10", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["per_mode"], json({2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(j["total"], 4);
  EXPECT_EQ(j["converged"], true);
}

TEST(Cli, JsonRoundTripIsByteIdentical) {
  for (const char* cmd : {"constants", "index", "spectrum", "verify"}) {
    const auto r = invoke({cmd, "--grid-n", "256", "--modes", "3", "--format", "json"});
    EXPECT_EQ(canonical_dump(json::parse(r.out)), r.out) << cmd;
  }
}

TEST(Cli, CanonicalDumpRules) {
  const json j = json{{"b", 1.5}, {"a", {1, 2}}, {"c", std::numeric_limits<double>::quiet_NaN()}};
  EXPECT_EQ(canonical_dump(j), "{\n  \"a\": [1, 2],\n  \"b\": 1.500000000000e+00,\n  \"c\": null\n}\n");
}

TEST(Cli, OutputIsDeterministicAcrossThreads) {
  const auto a = invoke({"verify", "--format", "json", "--threads", "1"});
  const auto b = invoke({"verify", "--format", "json", "--threads", "4"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifyDefaultPasses) {
  const auto r = invoke({"verify"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("all criteria passed"), std::string::npos);
}

TEST(Cli, CoarseVerifyIsNotConverged) {
  EXPECT_EQ(invoke({"verify", "--grid-n", "64", "--modes", "3"}).code, 3);
  EXPECT_EQ(invoke({"index", "--grid-n", "64"}).code, 3);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"index", "--grid-n", "63"}).code, 2);
  EXPECT_EQ(invoke({"index", "--modes", "1"}).code, 2);
  EXPECT_EQ(invoke({"index", "--tol", "0"}).code, 2);
  EXPECT_EQ(invoke({"index", "--tol", "0.2"}).code, 2);
  EXPECT_EQ(invoke({"index", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"index", "--chart", "radial"}).code, 2);
  EXPECT_EQ(invoke({"index", "--grid-n", "abc"}).code, 2);
  EXPECT_EQ(invoke({"dirichlet"}).code, 2);
  const auto r = invoke({"index", "--grid-n", "10"});
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, 0); }

TEST(Cli, DirichletSample) {
  const std::string path = kSamples + "/boundary_data.csv";
  const auto r = invoke({"dirichlet", "--input", path.c_str(), "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("mode,cos_or_sin,value_at_plusT,value_at_minusT,", 0), 0u);
  EXPECT_NE(r.out.find("# flux = "), std::string::npos);
  const auto j = json::parse(invoke({"dirichlet", "--input", path.c_str(), "--format", "json"}).out);
  EXPECT_EQ(j["modes"].size(), 3u);
  EXPECT_LE(std::abs(j["flux"].get<double>()), 1e-8 * j["flux_scale"].get<double>());
}

TEST(Cli, DirichletNotSolvableAndBadInput) {
  const std::string dir = ::testing::TempDir();
  const std::string bad_mean = dir + "/mean.csv";
  std::ofstream(bad_mean) << "mode,cos_or_sin,value_at_plusT,value_at_minusT\n0,cos,1,1\n";
  const auto r = invoke({"dirichlet", "--input", bad_mean.c_str()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("NOT_SOLVABLE"), std::string::npos);
  const std::string malformed = dir + "/malformed.csv";
  std::ofstream(malformed) << "mode,cos_or_sin,value_at_plusT,value_at_minusT\n1,tan,1,1\n";
  EXPECT_EQ(invoke({"dirichlet", "--input", malformed.c_str()}).code, 2);
  EXPECT_EQ(invoke({"dirichlet", "--input", "/nonexistent/file.csv"}).code, 2);
}

TEST(Cli, BoundaryCsvParser) {
  std::istringstream ok("# comment\nmode,cos_or_sin,value_at_plusT,value_at_minusT\n\n2, sin ,0.5,-1e-1\n");
  const auto rows = parse_boundary_csv(ok);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mode, 2);
  EXPECT_EQ(rows[0].angular, Angular::sin);
  EXPECT_EQ(rows[0].minus, -0.1);
  for (const char* text : {"", "mode,cos_or_sin,value_at_plusT,value_at_minusT\n",
                           "mode,cos_or_sin,value_at_plusT,value_at_minusT\n1,cos,1\n",
                           "mode,cos_or_sin,value_at_plusT,value_at_minusT\n-1,cos,1,1\n",
                           "mode,cos_or_sin,value_at_plusT,value_at_minusT\n1,cos,1x,1\n", "1,cos,1,1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(parse_boundary_csv(in), std::invalid_argument) << text;
  }
}

TEST(Cli, CsvLayouts) {
  EXPECT_EQ(invoke({"index", "--format", "csv", "--grid-n", "256"}).out.rfind("mode,negative,near_zero,lowest_1,lowest_2\n", 0), 0u);
  EXPECT_EQ(invoke({"spectrum", "--format", "csv", "--grid-n", "256", "--modes", "2"}).out.rfind("mode,problem,k,value\n", 0), 0u);
  EXPECT_EQ(invoke({"verify", "--format", "csv"}).out.rfind("criterion,check,pass,actual,expected,tolerance\n", 0), 0u);
}

TEST(Cli, ReportCombinesSections) {
  const std::string path = kSamples + "/boundary_data.csv";
  const auto r = invoke({"report", "--format", "json", "--input", path.c_str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  for (const char* key : {"constants", "spectrum", "index", "dirichlet", "verify"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Cli, BinaryExitCode) {
  const std::string exe = CATENOID_CLI_PATH;
  EXPECT_EQ(std::system((exe + " constants > /dev/null").c_str()), 0);
  const int status = std::system((exe + " index --grid-n 5 > /dev/null 2>&1").c_str());
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
}
