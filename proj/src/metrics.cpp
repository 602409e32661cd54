#include "fhn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace fhn {

double l2_norm_sq(const Field2D& field) noexcept {
    double sum = 0.0;
    for (double v : field.values()) sum += v * v;
    return field.grid().dx * field.grid().dx * sum;
}

double l4_norm_4(const Field2D& field) noexcept {
    double sum = 0.0;
    for (double v : field.values()) {
        const double v2 = v * v;
        sum += v2 * v2;
    }
    return field.grid().dx * field.grid().dx * sum;
}

namespace {

double diff_norm_sq(const Field2D& x, const Field2D& y) noexcept {
    const auto a = x.values();
    const auto b = y.values();
    double sum = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double d = a[n] - b[n];
        sum += d * d;
    }
    return x.grid().dx * x.grid().dx * sum;
}

}  // namespace

std::vector<double> pairwise_differences(const NetworkState& state) {
    const int m = state.neurons();
    if (m < 2) throw MetricsError("pairwise differences need at least two neurons");
    std::vector<double> d(pair_count(m));
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            d[pair_index(i, j, m)] = diff_norm_sq(state.u[i], state.u[j]) +
                                     diff_norm_sq(state.w[i], state.w[j]) +
                                     diff_norm_sq(state.rho[i], state.rho[j]);
        }
    }
    return d;
}

MetricsRow measure(const NetworkState& state) {
    const int m = state.neurons();
    MetricsRow row;
    row.t = state.t;
    row.u_norm.resize(m);
    row.w_norm.resize(m);
    row.rho_norm.resize(m);
    row.g_norm_sq.resize(m);
    for (int i = 0; i < m; ++i) {
        const double uu = l2_norm_sq(state.u[i]);
        const double ww = l2_norm_sq(state.w[i]);
        const double rr = l2_norm_sq(state.rho[i]);
        row.u_norm[i] = std::sqrt(uu);
        row.w_norm[i] = std::sqrt(ww);
        row.rho_norm[i] = std::sqrt(rr);
        row.g_norm_sq[i] = uu + ww + rr;
        row.total_energy += row.g_norm_sq[i];
        row.u_l4_total += l4_norm_4(state.u[i]);
    }
    if (m >= 2) row.pair_d = pairwise_differences(state);
    return row;
}

void MetricsSeries::push(MetricsRow row) {
    const auto m = static_cast<std::size_t>(m_);
    if (row.u_norm.size() != m || row.w_norm.size() != m || row.rho_norm.size() != m ||
        row.g_norm_sq.size() != m || row.pair_d.size() != pair_count(m_)) {
        throw MetricsError(fmt::format("metrics row does not match a {}-neuron series", m_));
    }
    if (!rows_.empty() && !(row.t > rows_.back().t)) {
        throw MetricsError(fmt::format("metrics times must strictly increase ({} after {})",
                                       row.t, rows_.back().t));
    }
    rows_.push_back(std::move(row));
}

std::size_t MetricsSeries::column_count() const noexcept {
    return 1 + 4 * static_cast<std::size_t>(m_) + 2 + pair_count(m_);
}

std::vector<std::string> MetricsSeries::column_names() const {
    std::vector<std::string> names;
    names.reserve(column_count());
    names.emplace_back("t");
    for (const char* stem : {"u_norm", "w_norm", "rho_norm", "g_norm_sq"}) {
        for (int i = 1; i <= m_; ++i) names.push_back(fmt::format("{}_{}", stem, i));
    }
    names.emplace_back("total_energy");
    names.emplace_back("u_l4_total");
    for (int i = 1; i <= m_; ++i) {
        for (int j = i + 1; j <= m_; ++j) names.push_back(fmt::format("D_{}_{}", i, j));
    }
    return names;
}

std::vector<double> MetricsSeries::flatten(const MetricsRow& row) const {
    std::vector<double> out;
    out.reserve(column_count());
    out.push_back(row.t);
    for (const auto* stack : {&row.u_norm, &row.w_norm, &row.rho_norm, &row.g_norm_sq}) {
        out.insert(out.end(), stack->begin(), stack->end());
    }
    out.push_back(row.total_energy);
    out.push_back(row.u_l4_total);
    out.insert(out.end(), row.pair_d.begin(), row.pair_d.end());
    return out;
}

std::vector<double> MetricsSeries::column(const std::string& name) const {
    const auto names = column_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw MetricsError(fmt::format("unknown metrics column '{}'", name));
    const auto idx = static_cast<std::size_t>(it - names.begin());
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const MetricsRow& row : rows_) out.push_back(flatten(row)[idx]);
    return out;
}

std::vector<double> MetricsSeries::times() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const MetricsRow& row : rows_) out.push_back(row.t);
    return out;
}

std::vector<double> MetricsSeries::pair_series(int i, int j) const {
    if (i < 0 || j <= i || j >= m_) {
        throw MetricsError(fmt::format("invalid neuron pair ({}, {}) for m = {}", i, j, m_));
    }
    const std::size_t idx = pair_index(i, j, m_);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const MetricsRow& row : rows_) out.push_back(row.pair_d[idx]);
    return out;
}

std::vector<double> MetricsSeries::total_pair_series() const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const MetricsRow& row : rows_) {
        double s = 0.0;
        for (double d : row.pair_d) s += d;
        out.push_back(s);
    }
    return out;
}

namespace {

std::size_t tail_start(std::size_t n, double fraction) {
    const auto tail = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    return n - std::min(n, std::max<std::size_t>(tail, 1));
}

}  // namespace

double asynchronous_degree_estimate(const MetricsSeries& series, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw MetricsError("tail fraction must lie in (0, 1]");
    }
    if (series.empty()) throw MetricsError("asynchronous degree needs a nonempty series tail");
    const auto& rows = series.rows();
    const std::size_t first = tail_start(rows.size(), tail_fraction);
    std::vector<double> worst(pair_count(series.neurons()), 0.0);
    for (std::size_t n = first; n < rows.size(); ++n) {
        for (std::size_t p = 0; p < worst.size(); ++p) {
            worst[p] = std::max(worst[p], rows[n].pair_d[p]);
        }
    }
    double sum = 0.0;
    for (double v : worst) sum += v;
    return sum;
}

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values,
                        TimeWindow window) {
    if (times.size() != values.size()) throw MetricsError("times and values differ in length");
    if (!(window.t1 > window.t0)) throw MetricsError("fit window needs t1 > t0");

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t n = 0; n < times.size(); ++n) {
        if (times[n] < window.t0 || times[n] > window.t1) continue;
        if (!(values[n] > 0.0)) {
            throw MetricsError(fmt::format(
                "nonpositive value {} at t = {}; truncate the fit window before it", values[n],
                times[n]));
        }
        xs.push_back(times[n]);
        ys.push_back(std::log(values[n]));
    }
    if (xs.size() < 10) {
        throw MetricsError(
            fmt::format("fit window [{}, {}] holds {} samples, need >= 10", window.t0, window.t1,
                        xs.size()));
    }

    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;

    DecayFit fit;
    fit.window = window;
    fit.rate = -slope;
    fit.intercept = my - slope * mx;
    fit.samples = xs.size();
    // A flat series is fitted exactly by a zero slope.
    fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return fit;
}

DecayFit fit_decay_rate(const MetricsSeries& series, PairSelection pair, TimeWindow window) {
    const auto t = series.times();
    const auto d = pair ? series.pair_series(pair->first, pair->second)
                        : series.total_pair_series();
    return fit_decay_rate(t, d, window);
}

AbsorbingReport absorbing_check(const MetricsSeries& series, double K) {
    AbsorbingReport report;
    for (const MetricsRow& row : series.rows()) {
        if (!report.entry_time) {
            if (row.total_energy <= K) {
                report.entry_time = row.t;
                report.max_energy_after_entry = row.total_energy;
            }
            continue;
        }
        report.max_energy_after_entry = std::max(report.max_energy_after_entry, row.total_energy);
        if (row.total_energy > K && !report.excursion_time) report.excursion_time = row.t;
    }
    report.passed = report.entry_time.has_value() && !report.excursion_time.has_value();
    return report;
}

BoundReport l4_bound_check(const MetricsSeries& series, double Q) {
    BoundReport report;
    report.bound = 1.0 + Q;
    report.passed = true;
    const auto& rows = series.rows();
    for (std::size_t n = tail_start(rows.size(), 0.2); n < rows.size(); ++n) {
        report.max_value = std::max(report.max_value, rows[n].u_l4_total);
        if (!(rows[n].u_l4_total < report.bound) && report.passed) {
            report.passed = false;
            report.violation_time = rows[n].t;
        }
    }
    return report;
}

EnvelopeReport sync_envelope_check(const MetricsSeries& series, double alpha, double transient,
                                   double slack) {
    const auto& rows = series.rows();
    if (rows.empty() || transient < rows.front().t || transient > rows.back().t) {
        throw MetricsError(fmt::format("transient t = {} lies outside the recorded range",
                                       transient));
    }
    const auto ref = std::find_if(rows.begin(), rows.end(),
                                  [&](const MetricsRow& r) { return r.t >= transient; });

    EnvelopeReport report;
    report.reference_time = ref->t;
    report.passed = true;
    const int m = series.neurons();
    for (auto it = std::next(ref); it != rows.end(); ++it) {
        const double decay = std::exp(-alpha * (it->t - ref->t));
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                const std::size_t p = pair_index(i, j, m);
                const double d = it->pair_d[p];
                const double envelope = ref->pair_d[p] * decay;
                double ratio = 0.0;
                if (envelope > 0.0) {
                    ratio = d / envelope;
                } else if (d > 0.0) {
                    ratio = std::numeric_limits<double>::infinity();
                }
                if (ratio > report.worst_ratio) {
                    report.worst_ratio = ratio;
                    report.worst_pair = std::pair{i, j};
                    report.worst_time = it->t;
                }
            }
        }
    }
    report.passed = report.worst_ratio <= slack;
    return report;
}

}  // namespace fhn
