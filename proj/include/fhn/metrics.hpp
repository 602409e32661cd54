#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fhn/grid.hpp"
#include "fhn/model.hpp"

namespace fhn {

/// dx^2 * sum v^2
[[nodiscard]] double l2_norm_sq(const Field2D& field) noexcept;

/// dx^2 * sum v^4
[[nodiscard]] double l4_norm_4(const Field2D& field) noexcept;

/// Position of pair (i, j), i < j, in lexicographic order (0-based indices).
[[nodiscard]] constexpr std::size_t pair_index(int i, int j, int m) noexcept {
    // Pairs before row i: i*m - i*(i+1)/2
    return static_cast<std::size_t>(i * m - i * (i + 1) / 2 + (j - i - 1));
}

[[nodiscard]] constexpr std::size_t pair_count(int m) noexcept {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(m - 1) / 2;
}

/// D_ij = ||u_i - u_j||^2 + ||w_i - w_j||^2 + ||rho_i - rho_j||^2 for all
/// i < j, in pair_index order.
[[nodiscard]] std::vector<double> pairwise_differences(const NetworkState& state);

/// One recorded sample of the network.
struct MetricsRow {
    double t = 0.0;
    std::vector<double> u_norm;     ///< ||u_i||
    std::vector<double> w_norm;     ///< ||w_i||
    std::vector<double> rho_norm;   ///< ||rho_i||
    std::vector<double> g_norm_sq;  ///< ||u_i||^2 + ||w_i||^2 + ||rho_i||^2
    double total_energy = 0.0;      ///< sum_i ||g_i||^2
    double u_l4_total = 0.0;        ///< sum_i ||u_i||^4_{L4}
    std::vector<double> pair_d;     ///< D_ij, i < j

    friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

[[nodiscard]] MetricsRow measure(const NetworkState& state);

class MetricsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time-indexed metrics. Column names follow the CSV layout:
/// t, u_norm_1..m, w_norm_1..m, rho_norm_1..m, g_norm_sq_1..m,
/// total_energy, u_l4_total, D_i_j (1-based, i < j, lexicographic).
class MetricsSeries {
public:
    MetricsSeries() = default;
    explicit MetricsSeries(int neurons) : m_(neurons) {}

    /// Appends a row; throws MetricsError if its width does not match or
    /// the time does not strictly increase.
    void push(MetricsRow row);

    [[nodiscard]] int neurons() const noexcept { return m_; }
    [[nodiscard]] bool empty() const noexcept { return rows_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] const std::vector<MetricsRow>& rows() const noexcept { return rows_; }
    [[nodiscard]] const MetricsRow& back() const { return rows_.back(); }

    [[nodiscard]] std::vector<std::string> column_names() const;
    [[nodiscard]] std::size_t column_count() const noexcept;
    /// Throws MetricsError on an unknown column.
    [[nodiscard]] std::vector<double> column(const std::string& name) const;
    /// Flattened row in column_names() order.
    [[nodiscard]] std::vector<double> flatten(const MetricsRow& row) const;

    [[nodiscard]] std::vector<double> times() const;
    [[nodiscard]] std::vector<double> pair_series(int i, int j) const;  ///< 0-based i < j
    [[nodiscard]] std::vector<double> total_pair_series() const;        ///< sum_{i<j} D_ij

    friend bool operator==(const MetricsSeries&, const MetricsSeries&) = default;

private:
    int m_ = 0;
    std::vector<MetricsRow> rows_;
};

/// Finite-horizon surrogate of the asynchronous degree: sum over pairs of
/// the largest D_ij seen in the trailing tail_fraction of the samples. The
/// true quantity takes a sup over all initial data and a limsup in time.
[[nodiscard]] double asynchronous_degree_estimate(const MetricsSeries& series,
                                                  double tail_fraction);

struct TimeWindow {
    double t0 = 0.0;
    double t1 = 0.0;
};

struct DecayFit {
    TimeWindow window;
    double rate = 0.0;       ///< negated slope of log D against t
    double intercept = 0.0;  ///< log D at t = 0 of the fitted line
    double r_squared = 0.0;
    std::size_t samples = 0;
};

/// Least-squares fit of log(values) against times over samples with
/// t0 <= t <= t1. Needs at least 10 samples, all strictly positive; a
/// nonpositive sample raises MetricsError naming its time.
[[nodiscard]] DecayFit fit_decay_rate(std::span<const double> times,
                                      std::span<const double> values, TimeWindow window);

/// Pair selection for fitting: a 0-based pair, or nullopt for sum_{i<j} D_ij.
using PairSelection = std::optional<std::pair<int, int>>;

[[nodiscard]] DecayFit fit_decay_rate(const MetricsSeries& series, PairSelection pair,
                                      TimeWindow window);

struct AbsorbingReport {
    bool passed = false;
    std::optional<double> entry_time;      ///< first t with energy <= K
    std::optional<double> excursion_time;  ///< first t after entry with energy > K
    double max_energy_after_entry = 0.0;
};

/// Empirical absorbing-ball check for total energy against radius K.
[[nodiscard]] AbsorbingReport absorbing_check(const MetricsSeries& series, double K);

struct BoundReport {
    bool passed = false;
    std::optional<double> violation_time;
    double max_value = 0.0;
    double bound = 0.0;
};

/// Passes when sum_i ||u_i||^4_{L4} stays below 1 + Q over the trailing 20%
/// of the samples.
[[nodiscard]] BoundReport l4_bound_check(const MetricsSeries& series, double Q);

struct EnvelopeReport {
    bool passed = false;
    double reference_time = 0.0;  ///< first recorded t >= transient
    /// Largest D_ij(t) / (D_ij(t_ref) e^{-alpha (t - t_ref)}) seen; the check
    /// passes while this stays <= slack.
    double worst_ratio = 0.0;
    std::optional<std::pair<int, int>> worst_pair;
    double worst_time = 0.0;
};

/// Verifies D_ij(t) <= slack * D_ij(t_ref) * exp(-alpha (t - t_ref)) for all
/// recorded t > t_ref. Throws MetricsError if the transient lies outside the
/// recorded range.
[[nodiscard]] EnvelopeReport sync_envelope_check(const MetricsSeries& series, double alpha,
                                                 double transient, double slack = 1.5);

}  // namespace fhn
