#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "isowall/scenario.hpp"

#include <nlohmann/json.hpp>

using namespace isowall;
using nlohmann::ordered_json;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json jread(const std::string& path) { return ordered_json::parse(slurp(path)); }

void wipe(const char* cmd) {
    if (std::system(cmd) != 0) {}  // best-effort scratch cleanup
}

const char* kSech = R"(
[lattice]
V0 = 0.0
a = 6.283185307179586
E0 = -1.0

[susy]
alpha = 1.0

[grid]
x_min = -256.0
x_max = 256.0
n_points = 4096

[bands]
n_bands = 2
n_k = 17

[packet]
x0 = -40.0
w = 10.0
k0 = 1.5

[evolve]
dt = 0.02
t_final = 60.0
snapshot_stride = 1000
baseline = false

[outputs]
x_stride = 32
)";
}  // namespace

TEST_CASE("config parser: values, defaults, comments") {
    ScenarioConfig cfg = ScenarioConfig::from_text(
        "# comment line\n"
        "[lattice]\n"
        "V0 = 0.2   # inline values are plain numbers\n"
        "a = 6.28\n"
        "E0 = -0.08\n"
        "\n"
        "[evolve]\n"
        "baseline = false\n"
        "snapshot_stride = 12\n");
    CHECK(cfg.num("lattice", "V0") == 0.2);
    CHECK(cfg.num("lattice", "E0") == -0.08);
    CHECK(cfg.boolean_or("evolve", "baseline", true) == false);
    CHECK(cfg.integer_or("evolve", "snapshot_stride", 1) == 12);
    CHECK(cfg.has("lattice", "a"));
    CHECK(!cfg.has("susy", "alpha"));
    CHECK(cfg.num_or("susy", "alpha", 3.5) == 3.5);
    CHECK(cfg.str_or("susy", "normalization", "unit-max") == "unit-max");
}

TEST_CASE("config parser rejects malformed input") {
    CHECK_THROWS_AS(ScenarioConfig::from_text("[nosuch]\nx = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(ScenarioConfig::from_text("[lattice]\nbogus = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(ScenarioConfig::from_text("[lattice]\nV0 = twelve\n"), std::invalid_argument);
    CHECK_THROWS_AS(ScenarioConfig::from_text("[lattice]\nV0 = 1\nV0 = 2\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ScenarioConfig::from_text("V0 = 1\n"), std::invalid_argument);  // no section
    CHECK_THROWS_AS(ScenarioConfig::from_text("[grid]\nn_points = 2.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(ScenarioConfig::from_text("[evolve]\nbaseline = maybe\n"),
                    std::invalid_argument);
}

TEST_CASE("synthesis pipeline resolves alpha and records the calibration") {
    ScenarioConfig cfg = ScenarioConfig::from_text(
        "[lattice]\nV0 = 0.2\na = 6.283185307179586\nE0 = -0.0818\n"
        "[susy]\nalpha0_target = 117.45\nalpha = 150.0\n");
    SynthesisPipeline pipe = build_synthesis(cfg);
    CHECK(pipe.mu.real() == doctest::Approx(0.25712410875177).epsilon(1e-9));
    CHECK(pipe.mu.imag() == 0.0);
    CHECK(pipe.alpha0 == doctest::Approx(117.45).epsilon(1e-12));
    CHECK(pipe.alpha == 150.0);
    CHECK(pipe.scale_factor ==
          doctest::Approx(std::sqrt(117.45 / pipe.alpha0_raw)).epsilon(1e-12));
    CHECK(cfg.str_or("susy", "normalization", "") == "unit-max");

    // without alpha the default is 1.25 * alpha0
    ScenarioConfig c2 = ScenarioConfig::from_text(
        "[lattice]\nV0 = 0.2\na = 6.283185307179586\nE0 = -0.0818\n");
    SynthesisPipeline p2 = build_synthesis(c2);
    CHECK(p2.alpha == doctest::Approx(1.25 * p2.alpha0).epsilon(1e-12));
    CHECK(c2.num("susy", "alpha") == p2.alpha);  // resolved value written back

    ScenarioConfig bad = ScenarioConfig::from_text(
        "[lattice]\nV0 = 0.2\na = 6.283185307179586\nE0 = -0.0818\n"
        "[susy]\nnormalization = unit-norm\n");
    CHECK_THROWS_AS(build_synthesis(bad), std::invalid_argument);
}

TEST_CASE("bands command writes dispersion, potential, manifest") {
    ScenarioConfig cfg = ScenarioConfig::from_text(kSech);
    wipe("rm -rf out_test_bands");
    CHECK(cmd_bands(cfg, "out_test_bands") == 0);

    std::string bands = slurp("out_test_bands/bands.csv");
    CHECK(bands.substr(0, 10) == "k,E_0,E_1\n");
    ordered_json man = jread("out_test_bands/manifest.json");
    CHECK(man["artifact"]["name"] == "isowall");
    CHECK(man["invocation"]["subcommand"] == "bands");
    CHECK(man["derived"]["period"] == doctest::Approx(6.283185307179586));
    std::vector<std::string> outs = man["outputs"].get<std::vector<std::string>>();
    CHECK(outs == std::vector<std::string>{"bands.csv", "potential.csv"});
}

TEST_CASE("synth command: wall profile files and derived block") {
    ScenarioConfig cfg = ScenarioConfig::from_text(kSech);
    wipe("rm -rf out_test_synth");
    CHECK(cmd_synth(cfg, "out_test_synth") == 0);
    ordered_json man = jread("out_test_synth/manifest.json");
    CHECK(man["derived"]["mu_R"] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(man["derived"]["alpha"] == 1.0);
    CHECK(man["derived"]["antiperiodic"] == false);
    CHECK(slurp("out_test_synth/wall.csv").substr(0, 21) == "x,v3,f,surface_state\n");
}

TEST_CASE("manifest serialization is byte-stable") {
    ScenarioConfig cfg = ScenarioConfig::from_text(kSech);
    wipe("rm -rf out_det_a out_det_b");
    REQUIRE(cmd_bands(cfg, "out_det_a") == 0);
    ScenarioConfig cfg2 = ScenarioConfig::from_text(kSech);
    REQUIRE(cmd_bands(cfg2, "out_det_b") == 0);
    CHECK(slurp("out_det_a/bands.csv") == slurp("out_det_b/bands.csv"));
    CHECK(slurp("out_det_a/potential.csv") == slurp("out_det_b/potential.csv"));
    ordered_json a = jread("out_det_a/manifest.json"), b = jread("out_det_b/manifest.json");
    a.erase("timings_ms");
    b.erase("timings_ms");
    CHECK(a.dump() == b.dump());
    // stable top-level key order
    std::vector<std::string> keys;
    for (auto it = a.begin(); it != a.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"artifact", "command", "invocation", "config",
                                           "derived", "outputs"});
}

namespace {
// recursive numeric comparison: every number in b within tol of its peer in a
void check_json_close(const ordered_json& a, const ordered_json& b, double tol) {
    REQUIRE(a.type() == b.type());
    if (a.is_number()) {
        CHECK(std::abs(a.get<double>() - b.get<double>()) <= tol);
    } else if (a.is_object()) {
        REQUIRE(a.size() == b.size());
        for (auto it = a.begin(); it != a.end(); ++it) {
            REQUIRE(b.contains(it.key()));
            check_json_close(it.value(), b[it.key()], tol);
        }
    } else if (a.is_array()) {
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) check_json_close(a[i], b[i], tol);
    } else {
        CHECK(a == b);
    }
}
}  // namespace

TEST_CASE("re-running from a manifest reproduces the report") {
    ScenarioConfig cfg = ScenarioConfig::from_text(kSech);
    wipe("rm -rf out_rt_a out_rt_b");
    REQUIRE(cmd_scatter(cfg, "out_rt_a", false) == 0);
    // the manifest itself is a valid config input; replay from it
    ScenarioConfig replay = ScenarioConfig::from_file("out_rt_a/manifest.json");
    REQUIRE(cmd_scatter(replay, "out_rt_b", false) == 0);
    check_json_close(jread("out_rt_a/report.json"), jread("out_rt_b/report.json"), 1e-12);
    CHECK(slurp("out_rt_a/snapshots.csv") == slurp("out_rt_b/snapshots.csv"));
    ordered_json a = jread("out_rt_a/manifest.json"), b = jread("out_rt_b/manifest.json");
    a.erase("timings_ms");
    b.erase("timings_ms");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("scatter command on the sech wall reports transparency") {
    ScenarioConfig cfg = ScenarioConfig::from_text(kSech);
    wipe("rm -rf out_test_scatter");
    CHECK(cmd_scatter(cfg, "out_test_scatter", false) == 0);
    ordered_json rep = jread("out_test_scatter/report.json");
    CHECK(rep["raw_reflected_norm"].get<double>() < 1e-6);
    CHECK(rep["partition_sum"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep["baseline_referenced"] == false);
    CHECK(rep["clearance"]["group_velocity"] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(jread("out_test_scatter/manifest.json")["invocation"]["control"] == false);
    CHECK(slurp("out_test_scatter/snapshots.csv").size() > 0);
}

TEST_CASE("scatter --control runs the abrupt step instead") {
    // the sech case: left and right lattices are both V = 1, so the "step"
    // control is transparent too and finishes without tripping the guard
    ScenarioConfig cfg = ScenarioConfig::from_text(kSech);
    wipe("rm -rf out_test_control");
    CHECK(cmd_scatter(cfg, "out_test_control", true) == 0);
    ordered_json man = jread("out_test_control/manifest.json");
    CHECK(man["invocation"]["control"] == true);
}

TEST_CASE("surface command measures stationarity") {
    ScenarioConfig cfg = ScenarioConfig::from_text(
        "[lattice]\nV0 = 0.0\na = 6.283185307179586\nE0 = -1.0\n"
        "[susy]\nalpha = 1.0\n"
        "[grid]\nx_min = -64.0\nx_max = 64.0\nn_points = 1024\n"
        "[evolve]\ndt = 0.001\nt_final = 10.0\n");
    wipe("rm -rf out_test_surface");
    CHECK(cmd_surface(cfg, "out_test_surface") == 0);
    ordered_json rep = jread("out_test_surface/report.json");
    CHECK(rep["max_amplitude_drift"].get<double>() < 1e-6);
    CHECK(rep["max_overlap_deficit"].get<double>() < 1e-6);
    CHECK(std::abs(rep["energy_expectation"].get<double>()) < 1e-8);
    CHECK(slurp("out_test_surface/surface_state.csv").substr(0, 31) ==
          "x,surface_state,abs_psi_final\n-");
}

TEST_CASE("verify command passes on the sech configuration") {
    ScenarioConfig cfg = ScenarioConfig::from_text(kSech);
    CHECK(cmd_verify(cfg) == 0);
}

TEST_CASE("verify stops at the alpha precondition when alpha <= alpha0") {
    // sech case: alpha0 = 1/(2 mu) = 0.5, so alpha = 0.45 undercuts it
    ScenarioConfig cfg = ScenarioConfig::from_text(
        "[lattice]\nV0 = 0.0\na = 6.283185307179586\nE0 = -1.0\n"
        "[susy]\nalpha = 0.45\n");
    CHECK(cmd_verify(cfg) == 1);
}

TEST_CASE("binary: exit codes and error reporting") {
    // the test working directory is the build tree; the binary and the
    // shipped configs are both here
    CHECK(std::system("./isowall bands --config configs/mathieu_set1_bands.ini "
                      "--out out_bin_bands > /dev/null") == 0);
    CHECK(std::system("./isowall --help > /dev/null 2>&1") == 0);
    CHECK(std::system("./isowall bands --config /nonexistent.ini --out out_bin_x "
                      "> /dev/null 2> out_bin_err.txt") != 0);
    std::string err = slurp("out_bin_err.txt");
    CHECK(err.find("error:") != std::string::npos);
    CHECK(std::system("./isowall bogus-subcommand > /dev/null 2>&1") != 0);
    CHECK(std::system("./isowall bands > /dev/null 2>&1") != 0);  // --config required

    // --seed is accepted and lands in the manifest
    CHECK(std::system("./isowall bands --config configs/mathieu_set1_bands.ini "
                      "--out out_bin_seed --seed 42 > /dev/null") == 0);
    ordered_json man = jread("out_bin_seed/manifest.json");
    CHECK(man["invocation"]["seed"] == 42);
}

TEST_CASE("guard trip surfaces as exit code 2 with partial output") {
    // shrink the window so the transmitted packet hits the edge mid-run
    ScenarioConfig cfg = ScenarioConfig::from_text(
        "[lattice]\nV0 = 0.0\na = 6.283185307179586\nE0 = -1.0\n"
        "[susy]\nalpha = 1.0\n"
        "[grid]\nx_min = -64.0\nx_max = 64.0\nn_points = 1024\n"
        "[packet]\nx0 = -20.0\nw = 6.0\nk0 = 1.5\n"
        "[evolve]\ndt = 0.02\nt_final = 200.0\nsnapshot_stride = 100\nbaseline = false\n");
    wipe("rm -rf out_test_guard");
    CHECK(cmd_scatter(cfg, "out_test_guard", false) == 2);
    ordered_json man = jread("out_test_guard/manifest.json");
    CHECK(man["derived"]["guard"]["tripped"] == true);
    CHECK(slurp("out_test_guard/snapshots.csv").size() > 0);
}
