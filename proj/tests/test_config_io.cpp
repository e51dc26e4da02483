/// @file test_config_io.cpp
/// @brief Config parsing, CSV formatting, snapshot round trips, and CLI
///        end-to-end exit codes / determinism via the built binary.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polytherm/config.hpp"
#include "polytherm/csv.hpp"
#include "polytherm/snapshot.hpp"

using namespace polytherm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("polytherm_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(POLYTHERM_BIN) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

const char* kMiniConfig =
    "grid.d = 2\n"
    "grid.N = 16\n"
    "run.T = 0.05\n"
    "run.frame_stride = 5\n"
    "verify.pairs = 400\n"
    "seed = 7\n";

}  // namespace

TEST_CASE("config: parsing, defaults, comments, overrides") {
    RunConfig cfg = RunConfig::from_string(
        "# a comment\n"
        "grid.N = 32   # trailing comment\n"
        "law.alpha = 2.5\n"
        "experiment.ladder = 1e-2, 5e-3,2.5e-3\n"
        "\n");
    CHECK(cfg.get_int("grid.N", 0) == 32);
    CHECK(cfg.get_double("law.alpha", 0) == 2.5);
    CHECK(cfg.get_double("law.beta", 1.0) == 1.0);  // default
    const auto ladder = cfg.get_list("experiment.ladder");
    REQUIRE(ladder.size() == 3);
    CHECK(ladder[1] == 5e-3);

    cfg.apply_override("grid.N=64");
    CHECK(cfg.get_int("grid.N", 0) == 64);
    CHECK_THROWS_AS(cfg.apply_override("no-equals-sign"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_string("just a line\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_string("law.alpha = abc\n").get_double("law.alpha", 0),
                    ConfigError);
}

TEST_CASE("config: typed builders validate their ranges") {
    RunConfig cfg = RunConfig::from_string("grid.d = 3\ngrid.N = 64\n");
    CHECK_THROWS_AS(grid_from_config(cfg), ConfigError);  // 3-d beyond demo scale
    cfg.apply_override("grid.N=16");
    CHECK(grid_from_config(cfg).d == 3);

    RunConfig bad_law = RunConfig::from_string("law.kind = cubic\n");
    CHECK_THROWS_AS(law_from_config(bad_law), ConfigError);
    RunConfig bad_coeff = RunConfig::from_string("coeffs.mu0 = -1\n");
    CHECK_THROWS_AS(coeffs_from_config(bad_coeff), ConfigError);
    RunConfig bad_init = RunConfig::from_string("init.kind = vortex\n");
    CHECK_THROWS_AS(initial_from_config(bad_init), ConfigError);
}

TEST_CASE("format_double round-trips and CSV layout is stable") {
    for (double v : {0.0, 1.0, -1.5, 1e-17, 3.141592653589793, 2.5e-3, 1e300}) {
        double back = 0.0;
        std::sscanf(format_double(v).c_str(), "%lf", &back);
        CHECK(back == v);
    }
    CsvTable t;
    t.columns = {"a", "b"};
    t.add_row({"1", "2"});
    CHECK(t.to_string() == "a,b\n1,2\n");
    CHECK_THROWS_AS(t.add_row({"only-one"}), std::invalid_argument);
}

TEST_CASE("snapshot: bit-exact round trip and header validation") {
    TempDir tmp;
    Snapshot snap;
    snap.d = 2;
    snap.n = 8;
    snap.t = 0.12345678901234567;
    snap.fields.assign(3, Field(64, 0.0));
    std::mt19937_64 eng(5);
    for (auto& f : snap.fields)
        for (auto& x : f) x = std::uniform_real_distribution<double>(-1, 1)(eng);

    const std::string path = (tmp.path / "snap.bin").string();
    write_snapshot(path, snap);
    const Snapshot back = read_snapshot(path);
    CHECK(back.d == snap.d);
    CHECK(back.n == snap.n);
    CHECK(back.t == snap.t);
    REQUIRE(back.fields.size() == snap.fields.size());
    for (std::size_t f = 0; f < snap.fields.size(); ++f)
        for (std::size_t c = 0; c < snap.fields[f].size(); ++c)
            CHECK(back.fields[f][c] == snap.fields[f][c]);

    write_file(tmp.path / "garbage.bin", "NOT A SNAPSHOT\n");
    CHECK_THROWS_AS(read_snapshot((tmp.path / "garbage.bin").string()), std::runtime_error);
}

TEST_CASE("cli: exit codes for verify") {
    TempDir tmp;
    write_file(tmp.path / "mini.cfg", kMiniConfig);
    const std::string base =
        "verify --config " + (tmp.path / "mini.cfg").string() + " --out " + tmp.path.string();
    CHECK(run_cli(base + " --quiet") == 0);
    CHECK(fs::exists(tmp.path / "verify_report.csv"));
    // degenerate law: scientific failure
    CHECK(run_cli(base + " --quiet --override law.alpha=0") == 1);
    // missing config: usage error
    CHECK(run_cli("verify --config /nonexistent.cfg --quiet") == 2);
    // bad usage: no subcommand
    CHECK(run_cli("") == 2);
}

TEST_CASE("cli: simulate writes deterministic diagnostics and snapshots") {
    TempDir tmp;
    write_file(tmp.path / "mini.cfg",
               std::string(kMiniConfig) + "init.kind = sine-shear\ncoeffs.mu0 = 1e-2\n" +
                   "coeffs.k0 = 1e-2\n");
    const fs::path out1 = tmp.path / "run1";
    const fs::path out2 = tmp.path / "run2";
    const std::string cfg = (tmp.path / "mini.cfg").string();
    CHECK(run_cli("simulate --config " + cfg + " --out " + out1.string() + " --quiet") == 0);
    CHECK(run_cli("simulate --config " + cfg + " --out " + out2.string() + " --quiet") == 0);
    REQUIRE(fs::exists(out1 / "diagnostics.csv"));
    CHECK(slurp(out1 / "diagnostics.csv") == slurp(out2 / "diagnostics.csv"));
    CHECK(fs::exists(out1 / "snapshot_0000.bin"));
    const std::string head = slurp(out1 / "diagnostics.csv").substr(0, 80);
    CHECK(head.find("t,E_total,S_total,S_production_cum,constraint_drift,involution_drift,"
                    "theta_min,dt") == 0);
}

TEST_CASE("cli: sweep emits csv, summary, plot script and honors exit codes") {
    TempDir tmp;
    write_file(tmp.path / "mini.cfg",
               std::string(kMiniConfig) +
                   "experiment.kind = adiabatic-limit\n"
                   "experiment.ladder = 1e-2,5e-3,2.5e-3\n"
                   "init.kind = sine-shear\n");
    const std::string cfg = (tmp.path / "mini.cfg").string();
    const fs::path out1 = tmp.path / "s1";
    const fs::path out2 = tmp.path / "s2";
    CHECK(run_cli("sweep --config " + cfg + " --out " + out1.string() + " --quiet") == 0);
    CHECK(run_cli("sweep --config " + cfg + " --out " + out2.string() + " --quiet") == 0);
    REQUIRE(fs::exists(out1 / "sweep.csv"));
    CHECK(slurp(out1 / "sweep.csv") == slurp(out2 / "sweep.csv"));
    CHECK(fs::exists(out1 / "summary.txt"));
    CHECK(fs::exists(out1 / "plot_sweep.gp"));
    CHECK(fs::exists(out1 / "relentropy_rung00.csv"));
    const std::string csv = slurp(out1 / "sweep.csv");
    CHECK(csv.find("rung,mu0,k0,eps,sup_I,driver_integral,slope_window_pass") == 0);
    // three data rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    // empty ladder is a usage error
    CHECK(run_cli("sweep --config " + cfg + " --out " + out1.string() +
                  " --quiet --override experiment.ladder=,") == 2);
}
