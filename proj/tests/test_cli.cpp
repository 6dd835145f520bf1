// End-to-end checks of the installed CLI binary. The binary path comes from
// the DYNSOLOW_CLI compile definition set by CMake.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
    const std::string cmd = std::string(DYNSOLOW_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate writes trajectory and manifest; rerun from manifest is byte-identical") {
    TempDir dir("dynsolow_cli_sim");
    const fs::path cfg = dir.path / "run.cfg";
    std::ofstream(cfg) << "t_end = 5000\nseed = 12\nregime_mode = forced_demand\n";

    REQUIRE(run("simulate --config " + cfg.string() + " --out " + (dir.path / "a").string()) == 0);
    CHECK(fs::exists(dir.path / "a" / "trajectory.csv"));
    CHECK(fs::exists(dir.path / "a" / "manifest.txt"));

    REQUIRE(run("simulate --config " + (dir.path / "a" / "manifest.txt").string() + " --out " +
                (dir.path / "b").string()) == 0);
    CHECK(slurp(dir.path / "a" / "trajectory.csv") == slurp(dir.path / "b" / "trajectory.csv"));
}

TEST_CASE("validation failures exit with the config code and a named field") {
    TempDir dir("dynsolow_cli_bad");
    const fs::path cfg = dir.path / "bad.cfg";
    std::ofstream(cfg) << "rho = 1.5\n";
    CHECK(run("simulate --config " + cfg.string() + " --out " + (dir.path / "out").string()) == 2);

    const fs::path unknown = dir.path / "unknown.cfg";
    std::ofstream(unknown) << "foo = 1\n";
    CHECK(run("simulate --config " + unknown.string() + " --out " + (dir.path / "out2").string()) == 2);
}

TEST_CASE("equilibria prints three classified rows for the base case") {
    TempDir dir("dynsolow_cli_eq");
    const std::string out_file = (dir.path / "eq.txt").string();
    const std::string cmd = std::string(DYNSOLOW_CLI) + " equilibria > " + out_file + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const std::string text = slurp(out_file);
    CHECK(text.find("focus,stable") != std::string::npos);
    CHECK(text.find("saddle,unstable") != std::string::npos);
}

TEST_CASE("sweep: empty grid exits cleanly, ensemble kind is parallel-invariant") {
    TempDir dir("dynsolow_cli_sweep");
    REQUIRE(run("sweep --out " + (dir.path / "empty").string()) == 0);

    const fs::path cfg = dir.path / "run.cfg";
    std::ofstream(cfg) << "t_end = 12500\nregime_mode = general\nseed = 5\n";
    const std::string grid = " --grid run=0:3 --kind ensemble --config " + cfg.string();
    REQUIRE(run("sweep" + grid + " --parallel 1 --out " + (dir.path / "p1").string()) == 0);
    REQUIRE(run("sweep" + grid + " --parallel 4 --out " + (dir.path / "p4").string()) == 0);
    CHECK(slurp(dir.path / "p1" / "summary.csv") == slurp(dir.path / "p4" / "summary.csv"));
    CHECK(slurp(dir.path / "p1" / "point_0002" / "trajectory.csv") ==
          slurp(dir.path / "p4" / "point_0002" / "trajectory.csv"));
}

TEST_CASE("analyze reads a stored run back") {
    TempDir dir("dynsolow_cli_analyze");
    const fs::path cfg = dir.path / "run.cfg";
    std::ofstream(cfg) << "t_end = 100000\nseed = 3\nregime_mode = general\n";
    REQUIRE(run("simulate --config " + cfg.string() + " --out " + (dir.path / "run").string()) == 0);
    REQUIRE(run("analyze --traj " + (dir.path / "run" / "trajectory.csv").string() + " --out " +
                (dir.path / "analysis").string()) == 0);
    const std::string report = slurp(dir.path / "analysis" / "report.txt");
    CHECK(report.find("y_slope_per_day") != std::string::npos);
    CHECK(report.find("regime_fraction") != std::string::npos);
}

TEST_CASE("unknown reproduce scenario lists valid names and exits nonzero") {
    CHECK(run("reproduce not_a_scenario") == 2);
}
