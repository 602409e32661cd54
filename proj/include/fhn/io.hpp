#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhn/metrics.hpp"
#include "fhn/model.hpp"
#include "fhn/network.hpp"

namespace fhn {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Named numeric columns of equal length.
struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    [[nodiscard]] std::size_t rows() const noexcept {
        return columns.empty() ? 0 : columns.front().size();
    }
    [[nodiscard]] bool has(const std::string& name) const;
    /// Throws IoError on an unknown name.
    [[nodiscard]] const std::vector<double>& column(const std::string& name) const;
};

[[nodiscard]] Table to_table(const MetricsSeries& series);

// ---- metrics CSV -----------------------------------------------------------
//
// Header row with MetricsSeries::column_names(), then one row per sample.
// Every value is printed with 17 significant digits, lines end in LF.

/// Streams rows to disk as they are recorded; each row is flushed so a
/// failed run leaves every completed row behind.
class CsvMetricsWriter final : public MetricsSink {
public:
    CsvMetricsWriter(const std::filesystem::path& path, int neurons);
    void on_metrics(const MetricsSeries& series, const MetricsRow& row) override;

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

/// Throws IoError when the series is empty or the file cannot be written.
void write_metrics_csv(const MetricsSeries& series, const std::filesystem::path& path);

[[nodiscard]] MetricsSeries read_metrics_csv(const std::filesystem::path& path);

/// Any numeric CSV with a header row.
[[nodiscard]] Table read_csv_table(const std::filesystem::path& path);

// ---- snapshots -------------------------------------------------------------
//
// Text header, one "key value" per line:
//   FHNSNAP 1 / m / nx / ny / dx / t / order / payload / end
// followed by 3 m nx ny little-endian float64 values in the order
// u_1..u_m, w_1..w_m, rho_1..rho_m, each field row-major.

void write_snapshot(const NetworkState& state, const std::filesystem::path& path);

/// Throws IoError on a malformed header or a payload whose length does not
/// match it.
[[nodiscard]] NetworkState read_snapshot(const std::filesystem::path& path);

/// Writes snapshot_<step>.fhn files into a directory.
class SnapshotWriter final : public SnapshotSink {
public:
    explicit SnapshotWriter(std::filesystem::path dir);
    void on_snapshot(const NetworkState& state, long step) override;

private:
    std::filesystem::path dir_;
};

// ---- SVG plots -------------------------------------------------------------

struct PlotOptions {
    bool log_y = false;
    std::string title;
    std::string x_column = "t";
    std::string x_label = "t";
    std::string y_label;
    int width = 800;
    int height = 480;
};

/// SVG 1.1 line chart with one polyline per selected column. In log-y mode
/// nonpositive samples are dropped and break the line. Throws IoError on an
/// empty selection or an unknown column.
[[nodiscard]] std::string render_plot_svg(const Table& table,
                                          const std::vector<std::string>& columns,
                                          const PlotOptions& options = {});

void render_plot_svg(const Table& table, const std::vector<std::string>& columns,
                     const std::filesystem::path& path, const PlotOptions& options = {});

}  // namespace fhn
