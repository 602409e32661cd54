#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fhn/config.hpp"
#include "fhn/io.hpp"
#include "fhn/network.hpp"

using namespace fhn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fhn_io_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
                std::to_string(::time(nullptr)));
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

RunConfig small_run(long steps = 60) {
    RunConfig cfg = paper_tables_config().run;
    cfg.grid = Grid2D{8, 8, 1.0};
    cfg.n_steps = steps;
    cfg.record_every = 5;
    return cfg;
}

}  // namespace

TEST_CASE("metrics CSV round trip and layout") {
    TempDir dir;
    const MetricsSeries series = integrate(small_run()).metrics;
    const fs::path file = dir.path / "m.csv";
    write_metrics_csv(series, file);

    const std::string text = slurp(file);
    const std::string header = text.substr(0, text.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') + 1 == 1 + 4 * 4 + 2 + 6);
    CHECK(header.rfind("t,u_norm_1,u_norm_2", 0) == 0);
    CHECK(header.find("D_1_2,D_1_3,D_1_4,D_2_3,D_2_4,D_3_4") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);

    const MetricsSeries back = read_metrics_csv(file);
    CHECK(back == series);

    write_metrics_csv(series, dir.path / "again.csv");
    CHECK(slurp(dir.path / "again.csv") == text);
}

TEST_CASE("two-neuron CSV has twelve columns") {
    TempDir dir;
    RunConfig cfg = small_run(1);
    cfg.params.m = 2;
    cfg.record_initial = false;
    const MetricsSeries series = integrate(cfg).metrics;
    REQUIRE(series.size() == 1);
    write_metrics_csv(series, dir.path / "m2.csv");
    const Table t = read_csv_table(dir.path / "m2.csv");
    CHECK(t.names.size() == 12);
    CHECK(t.rows() == 1);
    CHECK(t.has("D_1_2"));
    CHECK_FALSE(t.has("D_1_3"));
}

TEST_CASE("streaming writer matches the batch writer") {
    TempDir dir;
    const RunConfig cfg = small_run();
    CsvMetricsWriter sink(dir.path / "stream.csv", cfg.params.m);
    const MetricsSeries series = integrate(cfg, Sinks{&sink, nullptr}).metrics;
    write_metrics_csv(series, dir.path / "batch.csv");
    CHECK(slurp(dir.path / "stream.csv") == slurp(dir.path / "batch.csv"));
}

TEST_CASE("CSV error paths") {
    TempDir dir;
    CHECK_THROWS_AS(write_metrics_csv(MetricsSeries(2), dir.path / "e.csv"), IoError);
    CHECK_THROWS_AS(read_metrics_csv(dir.path / "missing.csv"), IoError);
    std::ofstream(dir.path / "bad.csv") << "t,x\n0,abc\n";
    CHECK_THROWS_AS(read_csv_table(dir.path / "bad.csv"), IoError);
    std::ofstream(dir.path / "ragged.csv") << "t,x\n0,1,2\n";
    CHECK_THROWS_AS(read_csv_table(dir.path / "ragged.csv"), IoError);
    std::ofstream(dir.path / "plain.csv") << "t,x\n0,1\n1,2\n";
    CHECK_NOTHROW(read_csv_table(dir.path / "plain.csv"));
    CHECK_THROWS_AS(read_metrics_csv(dir.path / "plain.csv"), IoError);
}

TEST_CASE("snapshot round trip is bit exact") {
    TempDir dir;
    RunConfig cfg = paper_tables_config().run;
    cfg.n_steps = 3;
    const NetworkState s = integrate(cfg).final_state;
    const fs::path file = dir.path / "s.fhn";
    write_snapshot(s, file);
    const NetworkState back = read_snapshot(file);
    CHECK(back == s);
    CHECK(back.neurons() == 4);
    CHECK(back.grid.nx == 32);
    CHECK(back.grid.ny == 32);
    CHECK(back.grid.dx == 1.0);
    CHECK(back.t == s.t);
}

TEST_CASE("snapshot payload mismatch is a load error") {
    TempDir dir;
    const NetworkState s(Grid2D{4, 4, 0.5}, 2, 0.25);
    const fs::path file = dir.path / "s.fhn";
    write_snapshot(s, file);
    std::string bytes = slurp(file);
    std::ofstream(dir.path / "short.fhn", std::ios::binary) << bytes.substr(0, bytes.size() - 8);
    CHECK_THROWS_AS(read_snapshot(dir.path / "short.fhn"), IoError);
    std::ofstream(dir.path / "long.fhn", std::ios::binary) << bytes << "xxxxxxxx";
    CHECK_THROWS_AS(read_snapshot(dir.path / "long.fhn"), IoError);

    std::string header = bytes;
    const auto pos = header.find("\nnx 4\n");
    REQUIRE(pos != std::string::npos);
    header.replace(pos, 6, "\nnx 5\n");
    std::ofstream(dir.path / "dims.fhn", std::ios::binary) << header;
    CHECK_THROWS_AS(read_snapshot(dir.path / "dims.fhn"), IoError);
    std::ofstream(dir.path / "junk.fhn", std::ios::binary) << "hello\n";
    CHECK_THROWS_AS(read_snapshot(dir.path / "junk.fhn"), IoError);
}

TEST_CASE("snapshot writer names files by step") {
    TempDir dir;
    RunConfig cfg = small_run(6);
    cfg.snapshot_every = 3;
    SnapshotWriter writer(dir.path / "snaps");
    (void)integrate(cfg, Sinks{nullptr, &writer});
    for (const char* name : {"snapshot_000000.fhn", "snapshot_000003.fhn", "snapshot_000006.fhn"}) {
        CHECK(fs::exists(dir.path / "snaps" / name));
    }
    CHECK(read_snapshot(dir.path / "snaps" / "snapshot_000006.fhn").t ==
          doctest::Approx(6 * cfg.dt));
}

TEST_CASE("svg plots") {
    const Table table = to_table(integrate(small_run()).metrics);
    const std::vector<std::string> cols{"u_norm_1", "u_norm_2", "u_norm_3", "u_norm_4"};
    const std::string svg = render_plot_svg(table, cols);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::size_t lines = 0;
    for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) {
        ++lines;
    }
    CHECK(lines == 4);
    for (const auto& c : cols) CHECK(svg.find(c) != std::string::npos);
    CHECK(render_plot_svg(table, cols) == svg);

    PlotOptions log;
    log.log_y = true;
    log.title = "a < b & c";
    const std::string logged = render_plot_svg(table, {"D_1_2", "D_3_4"}, log);
    CHECK(logged.find("a &lt; b &amp; c") != std::string::npos);
    CHECK(logged != render_plot_svg(table, {"D_1_2", "D_3_4"}));

    CHECK_THROWS_AS(render_plot_svg(table, {}), IoError);
    CHECK_THROWS_AS(render_plot_svg(table, {"u_norm_9"}), IoError);
}

TEST_CASE("log plot skips nonpositive samples") {
    Table t;
    t.names = {"t", "y"};
    t.columns = {{0, 1, 2, 3, 4}, {1.0, 0.1, 0.0, 0.01, 0.001}};
    PlotOptions o;
    o.log_y = true;
    const std::string svg = render_plot_svg(t, {"y"}, o);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
}
