#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "topometric/io.hpp"

namespace fs = std::filesystem;
using topometric::io::read_file;
using topometric::io::write_file;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TOPOMETRIC_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("topometric_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, RunSucceedsAndWritesReports) {
    const fs::path dir = scratch("run");
    write_file(dir / "exp.cfg", "kind = loop\nlength = 100\nseed = 2\n");
    ASSERT_EQ(run_cli("run --spec " + quoted(dir / "exp.cfg") + " --out " + quoted(dir / "out")), 0);
    const auto imp = nlohmann::json::parse(read_file(dir / "out" / "improvement.json"));
    EXPECT_TRUE(imp.contains("translation_ratio"));
    EXPECT_TRUE(fs::exists(dir / "out" / "report_topometric.csv"));
}

TEST(Cli, ConfigErrorExitCode) {
    const fs::path dir = scratch("cfg");
    write_file(dir / "exp.cfg", "kind = loop\nwat = 1\n");
    EXPECT_EQ(run_cli("run --spec " + quoted(dir / "exp.cfg") + " --out " + quoted(dir / "out")), 2);
    const auto err = nlohmann::json::parse(read_file(dir / "out" / "error.json"));
    EXPECT_EQ(err["error"]["exit_code"], 2);
    EXPECT_EQ(run_cli("run --spec " + quoted(dir / "missing.cfg") + " --out " + quoted(dir / "out")), 2);
    EXPECT_EQ(run_cli("sweep --spec " + quoted(dir / "exp.cfg") + " --param wat --values 1 --out " +
                      quoted(dir / "out")),
              2);
}

TEST(Cli, ScenarioErrorExitCode) {
    const fs::path dir = scratch("scn");
    ASSERT_EQ(run_cli("gen --kind loop --length 60 --seed 4 --out " + quoted(dir / "bundle")), 0);
    write_file(dir / "bundle" / "detections.txt", "5 100000 0.99\n");
    write_file(dir / "exp.cfg", "bundle = bundle\n");
    EXPECT_EQ(run_cli("run --spec " + quoted(dir / "exp.cfg") + " --out " + quoted(dir / "out")), 3);
}

TEST(Cli, IoErrorExitCode) {
    const fs::path dir = scratch("io");
    write_file(dir / "exp.cfg", "bundle = nowhere\n");
    EXPECT_EQ(run_cli("run --spec " + quoted(dir / "exp.cfg") + " --out " + quoted(dir / "out")), 4);
    write_file(dir / "ok.cfg", "kind = loop\nlength = 60\n");
    write_file(dir / "blocker", "x");
    EXPECT_EQ(run_cli("run --spec " + quoted(dir / "ok.cfg") + " --out " + quoted(dir / "blocker" / "sub")), 4);
}

TEST(Cli, GenThenRunBundle) {
    const fs::path dir = scratch("gen");
    ASSERT_EQ(run_cli("gen --kind figure-eight --length 150 --seed 9 --out " + quoted(dir / "bundle")), 0);
    for (const char* f : {"truth.txt", "map.txt", "motions.txt", "detections.txt"}) {
        EXPECT_TRUE(fs::exists(dir / "bundle" / f)) << f;
    }
    write_file(dir / "exp.cfg", "bundle = bundle\n");
    EXPECT_EQ(run_cli("run --spec " + quoted(dir / "exp.cfg") + " --out " + quoted(dir / "out")), 0);
}

TEST(Cli, SweepWritesTable) {
    const fs::path dir = scratch("sweep");
    write_file(dir / "exp.cfg", "kind = loop\nlength = 80\n");
    ASSERT_EQ(run_cli("sweep --spec " + quoted(dir / "exp.cfg") + " --param delta --values 0.5,0.9 --out " +
                      quoted(dir / "out")),
              0);
    EXPECT_EQ(read_file(dir / "out" / "sweep.csv").substr(0, 30), "value,trans_pct,rot_deg_per_m\n");
}

TEST(Cli, RerunIsBitIdentical) {
    const fs::path dir = scratch("rerun");
    write_file(dir / "exp.cfg", "kind = random-walk\nlength = 120\nseed = 11\n");
    ASSERT_EQ(run_cli("run --spec " + quoted(dir / "exp.cfg") + " --out " + quoted(dir / "a")), 0);
    ASSERT_EQ(run_cli("run --spec " + quoted(dir / "exp.cfg") + " --out " + quoted(dir / "b")), 0);
    for (const auto& e : fs::directory_iterator(dir / "a")) {
        EXPECT_EQ(read_file(e.path()), read_file(dir / "b" / e.path().filename())) << e.path();
    }
}
