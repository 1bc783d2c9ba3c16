#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "maggeo/cli.hpp"

using namespace maggeo::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "maggeo_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("simulate writes a CSV whose curvature column is constant") {
    const auto r = run({"simulate", "-E", "0.125", "-T", "2"});
    REQUIRE(r.code == kExitOk);
    std::istringstream in(r.out);
    const auto rows = read_trajectory_csv(in);
    REQUIRE(rows.size() == 2001);
    CHECK(r.out.rfind("t,re,im,p_x,p_y,energy,k_g\n", 0) == 0);
    for (const auto& row : rows) {
        CHECK(row.k_g == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(row.energy == doctest::Approx(0.125).epsilon(1e-10));
    }
}

TEST_CASE("simulate rejects bad arguments") {
    CHECK(run({"simulate", "-E", "0.125", "-T", "0"}).code == kExitUsage);
    CHECK(run({"simulate", "-E", "-1"}).code == kExitUsage);
    CHECK(run({"simulate", "-E", "0.125", "--z0", "1.5", "0"}).code == kExitUsage);
    CHECK(run({"simulate"}).code == kExitUsage);
    CHECK(run({"simulate", "-E", "0.125", "--format", "xml"}).code == kExitUsage);
    CHECK(run({"bogus"}).code == kExitUsage);
    const auto r = run({"simulate", "-E", "0.125", "-T", "0"});
    CHECK_FALSE(r.err.empty());
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("JSON output carries the same records as CSV") {
    const auto csv = run({"simulate", "-E", "2", "-T", "1", "--z0", "0.1", "-0.2", "--direction", "0.5"});
    const auto json = run({"simulate", "-E", "2", "-T", "1", "--z0", "0.1", "-0.2", "--direction", "0.5", "--format",
                           "json", "--seed", "9"});
    REQUIRE(csv.code == kExitOk);
    REQUIRE(json.code == kExitOk);
    std::istringstream a(csv.out);
    std::istringstream b(json.out);
    const auto rows_csv = read_trajectory_csv(a);
    const auto rows_json = read_trajectory_json(b);
    REQUIRE(rows_csv.size() == rows_json.size());
    for (std::size_t i = 0; i < rows_csv.size(); ++i) {
        CHECK(rows_csv[i].t == rows_json[i].t);
        CHECK(rows_csv[i].re == rows_json[i].re);
        CHECK(rows_csv[i].im == rows_json[i].im);
        CHECK(rows_csv[i].p_x == rows_json[i].p_x);
        CHECK(rows_csv[i].p_y == rows_json[i].p_y);
        CHECK(rows_csv[i].energy == rows_json[i].energy);
        CHECK(rows_csv[i].k_g == rows_json[i].k_g);
    }
    CHECK(json.out.find("\"schema_version\": 1") != std::string::npos);
    CHECK(json.out.find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("quotient trajectories stay in the fundamental domain") {
    const auto r = run({"simulate", "-E", "0.5", "-T", "20", "--quotient"});
    REQUIRE(r.code == kExitOk);
    std::istringstream in(r.out);
    const auto& group = maggeo::genus2_octagon_group();
    for (const auto& row : read_trajectory_csv(in)) CHECK(group.in_domain({row.re, row.im}, 1e-12));
}

TEST_CASE("classify") {
    CHECK(run({"classify", "-E", "0.5"}).out == "Horocycle, k_g = 1\n");
    CHECK(run({"classify", "-E", "2"}).out == "Hypercycle, k_g = 0.5\n");
    CHECK(run({"classify", "-E", "0.125"}).out == "HyperbolicCircle, k_g = 2\n");
    CHECK(run({"classify", "-E", "0"}).code == kExitUsage);
}

TEST_CASE("conserve") {
    const auto ok = run({"conserve", "-E", "0.125"});
    REQUIRE(ok.code == kExitOk);
    // Last line: dt, I_f drift, center drift, energy drift.
    const auto last = ok.out.substr(ok.out.rfind('\n', ok.out.size() - 2) + 1);
    std::istringstream fields(last);
    double dt = 0.0, integral = 1.0, center = 1.0;
    fields >> dt >> integral >> center;
    CHECK(dt == 1e-3);
    CHECK(integral < 1e-7);
    CHECK(center < 1e-7);

    const auto refused = run({"conserve", "-E", "0.75"});
    CHECK(refused.code == kExitOutOfRegime);
    CHECK(refused.err.find("out of regime") != std::string::npos);

    const auto sweep = run({"conserve", "-E", "0.125", "--f", "re", "--dt-sweep"});
    REQUIRE(sweep.code == kExitOk);
    CHECK(count(sweep.out, "order\t") == 3);
    const auto pos = sweep.out.rfind("order\t");
    CHECK(std::stod(sweep.out.substr(pos + 6)) == doctest::Approx(4.0).epsilon(0.5 / 4.0));
}

TEST_CASE("report has one row per energy") {
    const auto r = run({"report", "--energies", "0.125,0.5,2.0", "--lyapunov-time", "30", "--coverage-time", "30",
                        "--grid", "10"});
    REQUIRE(r.code == kExitOk);
    CHECK(count(r.out, "\n") == 4);
    CHECK(r.out.find("HyperbolicCircle") != std::string::npos);
    CHECK(r.out.find("Horocycle") != std::string::npos);
    CHECK(r.out.find("Hypercycle") != std::string::npos);
    CHECK(run({"report", "--energies", "a,b"}).code == kExitUsage);
}

TEST_CASE("coverage column is monotone") {
    const auto r = run({"coverage", "-E", "0.5", "-T", "60", "--grid", "20"});
    REQUIRE(r.code == kExitOk);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,fraction");
    double previous = -1.0;
    int rows = 0;
    while (std::getline(in, line)) {
        const double f = std::stod(line.substr(line.find(',') + 1));
        CHECK(f >= previous);
        previous = f;
        ++rows;
    }
    CHECK(rows >= 60);
}

TEST_CASE("SVG of a closed orbit") {
    const fs::path dir = scratch_dir();
    const auto traj = dir / "closed.csv";
    REQUIRE(run({"simulate", "-E", "0.125", "-T", "8", "-o", traj.string()}).code == kExitOk);
    const auto svg = run({"export-svg", "--trajectory", traj.string(), "--tiling-depth", "1"});
    REQUIRE(svg.code == kExitOk);
    CHECK(svg.out.find("<svg") != std::string::npos);
    REQUIRE(count(svg.out, "<circle class=\"orbit\"") == 1);

    // The orbit circle lies strictly inside the boundary circle (center 500, r 500).
    const auto at = svg.out.find("<circle class=\"orbit\"");
    auto attr = [&](const std::string& name) {
        const auto p = svg.out.find(name + "=\"", at) + name.size() + 2;
        return std::stod(svg.out.substr(p));
    };
    const double cx = attr("cx") - 500.0;
    const double cy = attr("cy") - 500.0;
    CHECK(std::hypot(cx, cy) + attr("r") < 500.0);

    CHECK(run({"export-svg", "--tiling-depth", "7"}).code == kExitUsage);
    CHECK(run({"export-svg", "--trajectory", (dir / "missing.csv").string()}).code == kExitUsage);
}

TEST_CASE("outputs are byte-identical across runs") {
    const fs::path dir = scratch_dir();
    for (int pass = 0; pass < 2; ++pass) {
        const std::string tag = std::to_string(pass);
        REQUIRE(run({"simulate", "-E", "0.5", "-T", "5", "--quotient", "-o", (dir / ("a" + tag + ".csv")).string()})
                    .code == kExitOk);
        REQUIRE(run({"simulate", "-E", "0.5", "-T", "5", "--format", "json", "--seed", "3", "-o",
                     (dir / ("a" + tag + ".json")).string()})
                    .code == kExitOk);
        REQUIRE(run({"export-svg", "--trajectory", (dir / ("a" + tag + ".csv")).string(), "--tiling-depth", "2", "-o",
                     (dir / ("a" + tag + ".svg")).string()})
                    .code == kExitOk);
    }
    for (const char* ext : {".csv", ".json", ".svg"}) {
        const auto first = slurp(dir / (std::string("a0") + ext));
        CHECK_FALSE(first.empty());
        CHECK(first == slurp(dir / (std::string("a1") + ext)));
    }
}
