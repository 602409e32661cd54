#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhn/commands.hpp"
#include "fhn/config.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kConfigs = std::string(FHN_SOURCE_DIR) + "/configs/";

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "fhnsync");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = fhn::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("fhn_cli_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path small_config(const fs::path& dir, void (*tweak)(nlohmann::json&) = nullptr) {
    auto j = nlohmann::json::parse(fhn::to_json(fhn::paper_tables_config()));
    j["nx"] = 8;
    j["ny"] = 8;
    j["n_steps"] = 400;
    j["record_every"] = 20;
    j["transient"] = 0.025;
    if (tweak) tweak(j);
    const fs::path file = dir / "small.json";
    std::ofstream(file) << j.dump(2);
    return file;
}

}  // namespace

TEST_CASE("help and usage errors") {
    const Outcome help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("reproduce-paper") != std::string::npos);

    const Outcome none = run({});
    CHECK(none.code == 2);
    CHECK(none.out.empty());
    CHECK_FALSE(none.err.empty());

    const Outcome bogus = run({"frobnicate"});
    CHECK(bogus.code == 2);
    CHECK(bogus.out.empty());

    const Outcome missing = run({"constants"});
    CHECK(missing.code == 2);
    CHECK(missing.out.empty());
}

TEST_CASE("constants on the bundled config") {
    TempDir dir("constants");
    const Outcome r = run({"constants", "--config", kConfigs + "paper.json", "--out",
                           dir.path.string()});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out.find("437.5") != std::string::npos);
    CHECK(r.out.find("0.175") != std::string::npos);
    CHECK(r.out.find("0.35") != std::string::npos);
    CHECK(r.out.find("synchronization guaranteed") != std::string::npos);
    const std::string csv = slurp(dir.path / "constants.csv");
    REQUIRE(csv.rfind("name,value\nC1,", 0) == 0);
    CHECK(std::stod(csv.substr(14)) == doctest::Approx(437.5).epsilon(1e-14));
}

TEST_CASE("config errors exit 2 with diagnostics on stderr only") {
    TempDir dir("badconfig");
    const fs::path file = small_config(dir.path, [](nlohmann::json& j) { j["etaa"] = 1.0; });
    const Outcome r = run({"simulate", "--config", file.string()});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("etaa") != std::string::npos);

    const Outcome absent = run({"constants", "--config", (dir.path / "nope.json").string()});
    CHECK(absent.code == 2);
    CHECK(absent.out.empty());
}

TEST_CASE("simulate writes metrics and snapshots deterministically") {
    TempDir dir("simulate");
    const fs::path file = small_config(dir.path, [](nlohmann::json& j) { j["snapshot_every"] = 200; });
    const Outcome a = run({"simulate", "--config", file.string(), "--out", (dir.path / "a").string()});
    REQUIRE(a.code == 0);
    CHECK(a.err.empty());
    CHECK(a.out.find("surrogate") != std::string::npos);
    const Outcome b = run({"simulate", "--config", file.string(), "--out", (dir.path / "b").string()});
    REQUIRE(b.code == 0);
    CHECK(slurp(dir.path / "a" / "metrics.csv") == slurp(dir.path / "b" / "metrics.csv"));
    CHECK(fs::exists(dir.path / "a" / "snapshots" / "snapshot_000400.fhn"));

    const Outcome seeded = run({"simulate", "--config", file.string(), "--out",
                                (dir.path / "c").string(), "--seed", "7"});
    REQUIRE(seeded.code == 0);
    CHECK(slurp(dir.path / "a" / "metrics.csv") != slurp(dir.path / "c" / "metrics.csv"));

    const fs::path svg_a = dir.path / "a.svg";
    const fs::path svg_b = dir.path / "b.svg";
    CHECK(run({"plot", (dir.path / "a" / "metrics.csv").string(), "--columns",
               "D_1_2,D_2_3", "--log-y", "--out", svg_a.string()})
              .code == 0);
    CHECK(run({"plot", (dir.path / "b" / "metrics.csv").string(), "--columns",
               "D_1_2,D_2_3", "--log-y", "--out", svg_b.string()})
              .code == 0);
    CHECK(slurp(svg_a) == slurp(svg_b));
    CHECK(slurp(svg_a).find("<polyline") != std::string::npos);
}

TEST_CASE("numerical blow-up exits 1 and keeps the partial CSV") {
    TempDir dir("blowup");
    const fs::path file = small_config(dir.path, [](nlohmann::json& j) {
        j["amplitude"] = 1e60;
        j["record_every"] = 1;
    });
    const Outcome r = run({"simulate", "--config", file.string(), "--out", dir.path.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("step") != std::string::npos);
    const std::string csv = slurp(dir.path / "metrics.csv");
    CHECK(csv.rfind("t,u_norm_1", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 2);  // header plus the t = 0 row
}

TEST_CASE("plot errors") {
    TempDir dir("plot");
    std::ofstream(dir.path / "x.csv") << "t,y\n0,1\n1,2\n";
    const Outcome unknown = run({"plot", (dir.path / "x.csv").string(), "--columns", "z", "--out",
                                 (dir.path / "p.svg").string()});
    CHECK(unknown.code == 2);
    CHECK(unknown.out.empty());
    CHECK(unknown.err.find("'z'") != std::string::npos);
    CHECK(run({"plot", (dir.path / "x.csv").string()}).code == 2);
    CHECK(run({"plot", (dir.path / "missing.csv").string(), "--columns", "y"}).code == 2);
}

TEST_CASE("verify passes on a clean build") {
    const Outcome r = run({"verify"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("all checks passed") != std::string::npos);
}

TEST_CASE("reproduce-paper") {
    TempDir dir("reproduce");
    const Outcome r = run({"reproduce-paper", "--out", dir.path.string()});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("u at grid index (10, 10)") != std::string::npos);
    CHECK(r.out.find("rho at grid index (10, 10)") != std::string::npos);
    for (const char* f : {"metrics.csv", "constants.csv", "fig1_u_norm.svg", "fig2_w_norm.svg",
                          "fig3_rho_norm.svg", "fig4_g_norm_sq.svg", "fig5_pair_differences.svg"}) {
        CHECK(fs::exists(dir.path / f));
    }
}
