#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
    const std::string cmd = std::string(NFAMB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("nfamb_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST(Cli, AfWritesCurvesAndSummary)
{
    const auto dir = scratch("af");
    ASSERT_EQ(run("--out-dir " + dir.string() + " af --kind UCA --d-prime 80 --step 0.1"), 0);
    const auto csv = slurp(dir / "af_curves.csv");
    EXPECT_EQ(csv.rfind("# config_hash=", 0), 0u);
    EXPECT_NE(csv.find("label,d_lambda,value_linear,value_db,provenance"), std::string::npos);
    EXPECT_NE(csv.find(",exact\n"), std::string::npos);
    EXPECT_NE(csv.find(",af_only\n"), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "af_summary.json"));
    EXPECT_TRUE(j.at("curves").contains("UCA"));
}

TEST(Cli, OutputIsDeterministic)
{
    const auto a = scratch("det_a"), b = scratch("det_b");
    ASSERT_EQ(run("--out-dir " + a.string() + " metrics --table alpha --table sizing"), 0);
    ASSERT_EQ(run("--out-dir " + b.string() + " metrics --table alpha --table sizing"), 0);
    EXPECT_EQ(slurp(a / "table_alpha.csv"), slurp(b / "table_alpha.csv"));
    EXPECT_EQ(slurp(a / "table_sizing.csv"), slurp(b / "table_sizing.csv"));
}

TEST(Cli, HashChangesWithParameters)
{
    const auto a = scratch("hash_a"), b = scratch("hash_b");
    ASSERT_EQ(run("--out-dir " + a.string() + " af --kind ULA --d-prime 80 --step 0.5"), 0);
    ASSERT_EQ(run("--out-dir " + b.string() + " af --kind ULA --d-prime 81 --step 0.5"), 0);
    const auto ha = slurp(a / "af_curves.csv").substr(0, 31);
    const auto hb = slurp(b / "af_curves.csv").substr(0, 31);
    EXPECT_NE(ha, hb);
}

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("af"), 2);
    EXPECT_EQ(run("af --d-prime 80 --bogus 1"), 2);
    EXPECT_EQ(run("af --kind hexagon --d-prime 80"), 2);
    EXPECT_EQ(run("--out-dir " + scratch("nyq").string() + " af --d-prime 80 --spacing 0.7"), 2);
    EXPECT_EQ(run("--out-dir " + scratch("nope").string() + " metrics --table nope"), 2);
}

TEST(Cli, ConfigFileRejectsUnknownKeys)
{
    const auto dir = scratch("cfg");
    fs::create_directories(dir);
    {
        std::ofstream(dir / "good.ini") << "[af]\nkind=[\"URA\"]\nd-prime=90\nstep=0.5\n";
        std::ofstream(dir / "bad.ini") << "[af]\nd-prime=90\ncolour=red\n";
    }
    EXPECT_EQ(run("--out-dir " + (dir / "out").string() + " --config " + (dir / "good.ini").string() + " af"), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "af_curves.csv"));
    EXPECT_EQ(run("--out-dir " + (dir / "out2").string() + " --config " + (dir / "bad.ini").string() + " af"), 2);
    EXPECT_FALSE(fs::exists(dir / "out2" / "af_curves.csv"));
}

TEST(Cli, UnwritableDestinationExitsOne)
{
    const auto dir = scratch("blocked");
    fs::create_directories(dir);
    std::ofstream(dir / "file") << "x";
    EXPECT_EQ(run("--out-dir " + (dir / "file" / "sub").string() + " metrics --table alpha"), 1);
}

TEST(Cli, MetricsTablesAndCurves)
{
    const auto dir = scratch("metrics");
    ASSERT_EQ(run("--out-dir " + dir.string() + " metrics --table constraint --table boundary --curve bd "
                  "--curve fig6 --n-points 5"),
              0);
    for (const char* f : {"table_constraint.csv", "table_boundary.csv", "curve_bd.csv", "curve_fig6.csv"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    const auto fig6 = slurp(dir / "curve_fig6.csv");
    EXPECT_NE(fig6.find("eta,bf_d_product"), std::string::npos);
}

TEST(Cli, CompareAndSweep)
{
    const auto dir = scratch("compare");
    ASSERT_EQ(run("--out-dir " + dir.string() + " compare --kind ULA --d-ap 20 --k 256 --step 0.2"), 0);
    const auto j = nlohmann::json::parse(slurp(dir / "compare_summary.json"));
    EXPECT_EQ(j.at("panels").size(), 3u);
    ASSERT_EQ(run("--out-dir " + dir.string() + " sweep --metric res --kind UPCA --d-ap 20 --n-points 4"), 0);
    EXPECT_TRUE(fs::exists(dir / "sweep_res.csv"));
}
