#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fhn/io.hpp"

namespace fhn {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    [[nodiscard]] bool valid() const { return lo <= hi; }
    void widen() {
        if (!valid()) {
            lo = 0.0;
            hi = 1.0;
        } else if (hi == lo) {
            const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
};

}  // namespace

std::string render_plot_svg(const Table& table, const std::vector<std::string>& columns,
                            const PlotOptions& opt) {
    if (columns.empty()) throw IoError("plot selection is empty");
    const std::vector<double>& xs = table.column(opt.x_column);
    std::vector<const std::vector<double>*> series;
    for (const auto& name : columns) series.push_back(&table.column(name));

    auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
    auto usable = [&](double v) { return std::isfinite(v) && (!opt.log_y || v > 0.0); };

    Range xr;
    Range yr;
    for (double x : xs) {
        if (std::isfinite(x)) xr.include(x);
    }
    for (const auto* ys : series) {
        for (double y : *ys) {
            if (usable(y)) yr.include(ty(y));
        }
    }
    xr.widen();
    if (opt.log_y && yr.valid()) {
        yr.lo = std::floor(yr.lo);
        yr.hi = std::ceil(yr.hi);
    }
    yr.widen();

    const double left = 80.0;
    const double right = 180.0;
    const double top = 40.0;
    const double bottom = 60.0;
    const double pw = opt.width - left - right;
    const double ph = opt.height - top - bottom;
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

    std::string svg = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        opt.width, opt.height);
    if (!opt.title.empty()) {
        svg += fmt::format(
            "<text x=\"{:.2f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
            "text-anchor=\"middle\">{}</text>\n",
            left + pw / 2.0, escape(opt.title));
    }

    // axes and ticks
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
        "stroke=\"black\"/>\n",
        left, top, pw, ph);
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double x = xr.lo + (xr.hi - xr.lo) * i / kTicks;
        svg += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n"
            "<text x=\"{0:.2f}\" y=\"{3:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
            "text-anchor=\"middle\">{4:.4g}</text>\n",
            px(x), top + ph, top + ph + 5.0, top + ph + 20.0, x);
    }
    std::vector<double> y_marks;
    if (opt.log_y) {
        const double stride = std::max(1.0, std::ceil((yr.hi - yr.lo) / 10.0));
        for (double e = std::ceil(yr.lo); e <= yr.hi; e += stride) y_marks.push_back(e);
    } else {
        for (int i = 0; i <= kTicks; ++i) y_marks.push_back(yr.lo + (yr.hi - yr.lo) * i / kTicks);
    }
    for (double y : y_marks) {
        const std::string label =
            opt.log_y ? fmt::format("1e{:.0f}", y) : fmt::format("{:.4g}", y);
        svg += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n"
            "<text x=\"{3:.2f}\" y=\"{4:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
            "text-anchor=\"end\">{5}</text>\n",
            left - 5.0, py(y), left, left - 8.0, py(y) + 4.0, label);
    }
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"13\" "
        "text-anchor=\"middle\">{}</text>\n",
        left + pw / 2.0, static_cast<double>(opt.height) - 15.0, escape(opt.x_label));
    const std::string y_label =
        opt.y_label.empty() ? (opt.log_y ? std::string("value (log scale)") : std::string("value"))
                            : opt.y_label;
    svg += fmt::format(
        "<text x=\"20\" y=\"{0:.2f}\" font-family=\"sans-serif\" font-size=\"13\" "
        "text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">{1}</text>\n",
        top + ph / 2.0, escape(y_label));

    // curves
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ys = *series[s];
        const char* color = kPalette[s % std::size(kPalette)];
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                svg += fmt::format(
                    "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                    color, points);
                points.clear();
            }
        };
        for (std::size_t n = 0; n < ys.size() && n < xs.size(); ++n) {
            if (!usable(ys[n]) || !std::isfinite(xs[n])) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += fmt::format("{:.2f},{:.2f}", px(xs[n]), py(ty(ys[n])));
        }
        flush();

        const double ly = top + 10.0 + 18.0 * static_cast<double>(s);
        svg += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" "
            "stroke-width=\"2\"/>\n"
            "<text x=\"{4:.2f}\" y=\"{5:.2f}\" font-family=\"sans-serif\" font-size=\"12\">{6}"
            "</text>\n",
            left + pw + 15.0, ly, left + pw + 40.0, color, left + pw + 45.0, ly + 4.0,
            escape(columns[s]));
    }
    svg += "</svg>\n";
    return svg;
}

void render_plot_svg(const Table& table, const std::vector<std::string>& columns,
                     const std::filesystem::path& path, const PlotOptions& options) {
    const std::string svg = render_plot_svg(table, columns, options);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out << svg;
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace fhn
