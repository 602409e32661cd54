#include <algorithm>
#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "fhn/io.hpp"

namespace fhn {

bool Table::has(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& Table::column(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw IoError(fmt::format("unknown column '{}'", name));
    return columns[static_cast<std::size_t>(it - names.begin())];
}

Table to_table(const MetricsSeries& series) {
    Table table;
    table.names = series.column_names();
    table.columns.assign(table.names.size(), {});
    for (const MetricsRow& row : series.rows()) {
        const auto flat = series.flatten(row);
        for (std::size_t c = 0; c < flat.size(); ++c) table.columns[c].push_back(flat[c]);
    }
    return table;
}

namespace {

std::string csv_line(const std::vector<double>& values) {
    std::string line;
    for (std::size_t c = 0; c < values.size(); ++c) {
        if (c) line += ',';
        line += fmt::format("{:.17g}", values[c]);
    }
    line += '\n';
    return line;
}

std::string header_line(const std::vector<std::string>& names) {
    std::string line;
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c) line += ',';
        line += names[c];
    }
    line += '\n';
    return line;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& text, std::size_t line_no) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw IoError(fmt::format("line {}: '{}' is not a number", line_no, text));
    }
    return v;
}

}  // namespace

CsvMetricsWriter::CsvMetricsWriter(const std::filesystem::path& path, int neurons)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out_ << header_line(MetricsSeries(neurons).column_names());
    out_.flush();
}

void CsvMetricsWriter::on_metrics(const MetricsSeries& series, const MetricsRow& row) {
    out_ << csv_line(series.flatten(row));
    out_.flush();
    if (!out_) throw IoError(fmt::format("write to '{}' failed", path_.string()));
}

void write_metrics_csv(const MetricsSeries& series, const std::filesystem::path& path) {
    if (series.empty()) throw IoError("refusing to write an empty metrics series");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out << header_line(series.column_names());
    for (const MetricsRow& row : series.rows()) out << csv_line(series.flatten(row));
    out.flush();
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

Table read_csv_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line)) throw IoError(fmt::format("'{}' is empty", path.string()));
    Table table;
    table.names = split(line);
    table.columns.assign(table.names.size(), {});
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.names.size()) {
            throw IoError(fmt::format("line {}: expected {} fields, found {}", line_no,
                                      table.names.size(), cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            table.columns[c].push_back(parse_number(cells[c], line_no));
        }
    }
    return table;
}

MetricsSeries read_metrics_csv(const std::filesystem::path& path) {
    const Table table = read_csv_table(path);
    const auto m = static_cast<int>(std::count_if(
        table.names.begin(), table.names.end(),
        [](const std::string& n) { return n.rfind("u_norm_", 0) == 0; }));
    MetricsSeries series(m);
    if (m < 2 || series.column_names() != table.names) {
        throw IoError(fmt::format("'{}' does not have the metrics column layout", path.string()));
    }
    const auto mm = static_cast<std::size_t>(m);
    for (std::size_t r = 0; r < table.rows(); ++r) {
        std::size_t c = 0;
        auto next = [&] { return table.columns[c++][r]; };
        MetricsRow row;
        row.t = next();
        for (auto* stack : {&row.u_norm, &row.w_norm, &row.rho_norm, &row.g_norm_sq}) {
            for (std::size_t i = 0; i < mm; ++i) stack->push_back(next());
        }
        row.total_energy = next();
        row.u_l4_total = next();
        for (std::size_t p = 0; p < pair_count(m); ++p) row.pair_d.push_back(next());
        series.push(std::move(row));
    }
    return series;
}

}  // namespace fhn
