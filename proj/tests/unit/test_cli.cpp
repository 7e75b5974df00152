#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "nasinit_cli_test";

int run(const std::string& args) {
    const std::string cmd = "cd '" + kWork.string() + "' && '" NASINIT_CLI_PATH "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};

} // namespace

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("--strategy greedy search"), 1);
    EXPECT_EQ(run("--budget 50 search"), 1);
    EXPECT_EQ(run("--no-such-flag sample"), 1);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, SampleThenCalibrateAndGridErrors) {
    EXPECT_EQ(run("--n-samples 80 --out s sample"), 0);
    EXPECT_EQ(line_count(kWork / "s" / "samples.jsonl"), 80u);
    EXPECT_EQ(run("--out s --k-grid '' calibrate"), 1);
    EXPECT_EQ(run("--out s --component-grid 2,x calibrate"), 1);
    EXPECT_EQ(run("--out s --component-grid 2 --k-grid 5,10 --cluster kmeans calibrate"), 0);
    EXPECT_EQ(line_count(kWork / "s" / "sweep_clusters.csv"), 1u + 8u);
    EXPECT_EQ(run("--out missing calibrate"), 2);
}

TEST_F(Cli, DataErrors) {
    EXPECT_EQ(run("--dataset nowhere.jsonl --out d sample"), 2);
    std::ofstream(kWork / "bad.jsonl") << "{\"adjacency\": [[0,1],[0,0]], \"ops\": []}\n";
    EXPECT_EQ(run("--dataset bad.jsonl --n-samples 1 --out d sample"), 2);
    EXPECT_EQ(run("--n-samples 30 --out small sample"), 0);
    EXPECT_EQ(run("--dataset small/samples.jsonl --n-samples 31 --out d sample"), 1);
}

TEST_F(Cli, ConfigFileAndFlagOverride) {
    std::ofstream(kWork / "run.cfg") << "strategy = rs\nruns = 2\nevaluations = 10\npopulation = 5\n"
                                        "tournament = 2\nout = from_config\n";
    EXPECT_EQ(run("--config run.cfg search"), 0);
    EXPECT_EQ(line_count(kWork / "from_config" / "trace.csv"), 1u + 20u);
    EXPECT_EQ(run("--config run.cfg --runs 3 --out overridden search"), 0);
    EXPECT_EQ(line_count(kWork / "overridden" / "trace.csv"), 1u + 30u);
    EXPECT_EQ(run("--config run.cfg --strategy ae --out ae search"), 0);
    EXPECT_EQ(run("--out rep report from_config ae"), 0);
    EXPECT_TRUE(fs::exists(kWork / "rep" / "comparison.csv"));
    EXPECT_EQ(run("--out rep2 report from_config overridden"), 2);
}
