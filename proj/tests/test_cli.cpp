#include "bibasis/cli.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

using namespace bibasis;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args)
{
    args.insert(args.begin(), "bibasis");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

int count_lines(const std::string& s)
{
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST(Cli, SystemHaarCsv)
{
    const CliRun r = run({"system", "haar", "--p", "2", "--level", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "Lp_dyadic,2,2\n1,1,1,1\n1,1,-1,-1\n1,-1,0,0\n0,0,1,-1\n");
}

TEST(Cli, SystemHadamard)
{
    const CliRun r = run({"system", "hadamard", "--n", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1,1\n1,-1\n");
}

TEST(Cli, SystemJson)
{
    const CliRun r = run({"system", "rademacher", "--p", "inf", "--m", "2", "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["space"]["p"], "inf");
    EXPECT_EQ(j["vectors"].size(), 2u);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({"system", "nosuch"}).code, 2);
    EXPECT_EQ(run({"system", "haar"}).code, 2);
    EXPECT_EQ(run({"check", "unknown"}).code, 2);
    EXPECT_EQ(run({"constant", "--system", "haar", "--level", "1", "--bogus"}).code, 2);
    EXPECT_EQ(run({"constant", "--system", "haar", "--level", "1", "--budget", "0"}).code, 2);
    EXPECT_EQ(run({"constant", "--system", "haar", "--level", "1", "--kind", "nope"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ConstantDifferenceBasis)
{
    const CliRun r = run({"constant", "--system", "diff-basis", "--m", "5", "--kind", "bibasis",
                       "--strategy", "exhaustive-signs"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    const auto& e = j["estimates"][0];
    EXPECT_DOUBLE_EQ(e["lower"].get<double>(), 5.0);
    EXPECT_EQ(e["witness"], std::vector<double>(5, 1.0));
    EXPECT_TRUE(j["outcomes"].empty());
}

TEST(Cli, ConstantUnitVectorsAndHaar)
{
    const CliRun u = run({"constant", "--system", "unit-vectors", "--n", "4", "--p", "3"});
    ASSERT_EQ(u.code, 0) << u.err;
    EXPECT_DOUBLE_EQ(nlohmann::json::parse(u.out)["estimates"][0]["lower"].get<double>(), 1.0);
    const CliRun h = run({"constant", "--system", "haar", "--p", "2", "--level", "3"});
    ASSERT_EQ(h.code, 0) << h.err;
    const double lower = nlohmann::json::parse(h.out)["estimates"][0]["lower"].get<double>();
    EXPECT_GE(lower, 1.2247 - 1e-6);
    EXPECT_LE(lower, 2.0 + 1e-9);
}

TEST(Cli, ConstantCsv)
{
    const CliRun r = run({"constant", "--system", "summing-basis", "--n", "3", "--csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_lines(r.out), 2);
}

TEST(Cli, CheckPassAndExitCodes)
{
    const CliRun r = run({"check", "diff-basis", "--m", "5"});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["outcomes"].size(), 1u);
    EXPECT_EQ(j["outcomes"][0]["passed"], true);
    EXPECT_EQ(j["invocation"], "bibasis check diff-basis --m 5");
    // An impossible tolerance makes the check fail: exit 1, report still emitted.
    const CliRun f = run({"check", "haar-two-vector", "--budget", "9", "--tol", "0"});
    EXPECT_EQ(f.code, 1);
    EXPECT_FALSE(nlohmann::json::parse(f.out)["outcomes"][0]["passed"].get<bool>());
}

TEST(Cli, ByteIdenticalApartFromRuntime)
{
    const std::vector<std::string> args{"suite", "--only", "walsh", "lattice-identities",
                                        "--seed", "7"};
    const std::regex runtime("\"runtime_ms\": [0-9]+");
    const CliRun a = run(args);
    const CliRun b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(std::regex_replace(a.out, runtime, ""), std::regex_replace(b.out, runtime, ""));
}

TEST(Cli, SystemCsvRoundTripsThroughConstant)
{
    const std::string path = ::testing::TempDir() + "/diff.csv";
    ASSERT_EQ(run({"system", "diff-basis", "--n", "4", "--out", path}).code, 0);
    const CliRun r = run({"constant", "--in", path, "--kind", "bibasis", "--strategy",
                       "exhaustive-signs"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_DOUBLE_EQ(nlohmann::json::parse(r.out)["estimates"][0]["lower"].get<double>(), 4.0);
}
