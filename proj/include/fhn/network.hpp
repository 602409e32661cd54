#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhn/grid.hpp"
#include "fhn/metrics.hpp"
#include "fhn/model.hpp"

namespace fhn {

enum class Integrator { Euler, Rk4 };

struct RunConfig {
    NetworkParams params;
    NonlinearityBounds bounds;
    Grid2D grid;
    double dt = 0.0;
    long n_steps = 1;
    std::uint64_t seed = 0;
    double amplitude = 0.05;
    int record_every = 1;
    int snapshot_every = 0;  ///< 0 disables snapshots
    Integrator integrator = Integrator::Euler;
    /// Emit a metrics row for the initial state (t = 0) before stepping.
    bool record_initial = true;
};

/// explicit-Euler stability bound for the network's diffusion term
[[nodiscard]] inline double cfl_max_dt(const NetworkParams& params, const Grid2D& grid,
                                       double safety) {
    return cfl_max_dt(params.eta, grid, safety);
}

/// One message per violated invariant, including dt above cfl_max_dt(., ., 1).
[[nodiscard]] std::vector<std::string> validate(const RunConfig& cfg);

/// Raised on NaN/Inf in the state, naming where it first appeared.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string field, int neuron, int ix, int iy,
                   std::optional<long> step = std::nullopt);

    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] int neuron() const noexcept { return neuron_; }
    [[nodiscard]] int ix() const noexcept { return ix_; }
    [[nodiscard]] int iy() const noexcept { return iy_; }
    [[nodiscard]] std::optional<long> step() const noexcept { return step_; }

    [[nodiscard]] NumericalError at_step(long step) const {
        return NumericalError(field_, neuron_, ix_, iy_, step);
    }

private:
    std::string field_;
    int neuron_;
    int ix_;
    int iy_;
    std::optional<long> step_;
};

/// Time derivatives of every field of a NetworkState.
struct StateRates {
    std::vector<Field2D> du;
    std::vector<Field2D> dw;
    std::vector<Field2D> drho;
};

/// Right-hand side of the network equations. The all-to-all coupling
/// P * sum_j (u_j - u_i) is evaluated in O(m) per point as
/// P * (S - m (u_i - u_1)) with S = sum_j (u_j - u_1) accumulated in
/// ascending neuron order; identical neurons give an exactly zero coupling.
/// Throws NumericalError on non-finite input.
[[nodiscard]] StateRates rhs(const NetworkState& state, const NetworkParams& params,
                             const NonlinearityBounds& bounds);

/// Forward Euler: state + dt * rhs(state), t advanced by dt.
[[nodiscard]] NetworkState step_euler(const NetworkState& state, const NetworkParams& params,
                                      const NonlinearityBounds& bounds, double dt);
[[nodiscard]] NetworkState step_euler(const NetworkState& state, const RunConfig& cfg);

/// Classical four-stage Runge-Kutta over the same right-hand side.
[[nodiscard]] NetworkState step_rk4(const NetworkState& state, const NetworkParams& params,
                                    const NonlinearityBounds& bounds, double dt);
[[nodiscard]] NetworkState step_rk4(const NetworkState& state, const RunConfig& cfg);

/// Dispatches on cfg.integrator.
[[nodiscard]] NetworkState step(const NetworkState& state, const RunConfig& cfg);

class MetricsSink {
public:
    virtual ~MetricsSink() = default;
    virtual void on_metrics(const MetricsSeries& series, const MetricsRow& row) = 0;
};

class SnapshotSink {
public:
    virtual ~SnapshotSink() = default;
    virtual void on_snapshot(const NetworkState& state, long step) = 0;
};

struct Sinks {
    MetricsSink* metrics = nullptr;
    SnapshotSink* snapshots = nullptr;
};

struct RunResult {
    NetworkState final_state;
    MetricsSeries metrics;
};

/// Runs cfg.n_steps steps from init_random(cfg.grid, cfg.params, cfg.amplitude,
/// cfg.seed). Rows are recorded every record_every steps and after the last
/// step; sinks see each row as it is recorded, so on failure they already
/// hold everything up to the failing step. Throws std::invalid_argument
/// on an invalid cfg.
[[nodiscard]] RunResult integrate(const RunConfig& cfg, Sinks sinks = {});

/// Same, from an explicit initial state.
[[nodiscard]] RunResult integrate(const RunConfig& cfg, NetworkState initial, Sinks sinks = {});

struct OdeCheckReport {
    double t_end = 0.0;
    double max_abs_deviation = 0.0;
};

/// Spatially constant data keeps Lap(u) = 0, so the network reduces to 3m
/// ODEs. Integrates initial with cfg's integrator and compares every point
/// at t_end = n_steps * dt against an RK4 solve of the reduced system with
/// step dt / 100. Throws std::invalid_argument if initial varies in space.
[[nodiscard]] OdeCheckReport reduce_to_ode_check(const RunConfig& cfg,
                                                 const NetworkState& initial);

}  // namespace fhn
