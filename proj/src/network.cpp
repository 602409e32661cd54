#include "fhn/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace fhn {

NumericalError::NumericalError(std::string field, int neuron, int ix, int iy,
                               std::optional<long> step)
    : std::runtime_error(
          step ? fmt::format("non-finite {}_{} at grid point ({}, {}) in step {}", field,
                             neuron + 1, ix, iy, *step)
               : fmt::format("non-finite {}_{} at grid point ({}, {})", field, neuron + 1, ix,
                             iy)),
      field_(std::move(field)),
      neuron_(neuron),
      ix_(ix),
      iy_(iy),
      step_(step) {}

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> errors;
    if (cfg.grid.nx < 3 || cfg.grid.ny < 3) errors.emplace_back("nx and ny must be at least 3");
    if (!(cfg.grid.dx > 0.0)) errors.emplace_back("dx must be positive");
    if (cfg.params.m < 1) errors.emplace_back("m must be positive");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        errors.emplace_back("dt must be positive and finite");
    } else if (cfg.params.eta > 0.0 && cfg.grid.dx > 0.0) {
        const double limit = cfl_max_dt(cfg.params, cfg.grid, 1.0);
        if (cfg.dt > limit) {
            errors.push_back(fmt::format(
                "dt = {} exceeds the diffusion stability bound cfl_max_dt = dx^2/(4 eta) = {}",
                cfg.dt, limit));
        }
    }
    if (!(cfg.params.eta > 0.0)) errors.emplace_back("eta must be positive");
    if (cfg.n_steps < 1) errors.emplace_back("n_steps must be at least 1");
    if (cfg.record_every < 1) errors.emplace_back("record_every must be at least 1");
    if (cfg.snapshot_every < 0) errors.emplace_back("snapshot_every must be nonnegative");
    if (!(cfg.amplitude >= 0.0)) errors.emplace_back("amplitude must be nonnegative");
    return errors;
}

namespace {

void check_finite(const NetworkState& s) {
    auto scan = [&](const std::vector<Field2D>& stack, const char* name) {
        for (int i = 0; i < static_cast<int>(stack.size()); ++i) {
            const auto v = stack[i].values();
            const auto bad = std::find_if(v.begin(), v.end(),
                                          [](double x) { return !std::isfinite(x); });
            if (bad != v.end()) {
                const auto n = static_cast<int>(bad - v.begin());
                throw NumericalError(name, i, n % s.grid.nx, n / s.grid.nx);
            }
        }
    };
    scan(s.u, "u");
    scan(s.w, "w");
    scan(s.rho, "rho");
}

void check_shape(const NetworkState& s) {
    const auto m = s.u.size();
    if (s.w.size() != m || s.rho.size() != m) {
        throw std::invalid_argument("u, w and rho stacks must hold the same neuron count");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (s.u[i].grid() != s.grid || s.w[i].grid() != s.grid || s.rho[i].grid() != s.grid) {
            throw std::invalid_argument("every field must live on the state's grid");
        }
    }
}

NetworkState shifted(const NetworkState& base, const StateRates& rates, double h) {
    NetworkState out = base;
    const int m = base.neurons();
    const std::size_t points = base.grid.points();
    for (int i = 0; i < m; ++i) {
        auto u = out.u[i].values();
        auto w = out.w[i].values();
        auto rho = out.rho[i].values();
        const auto du = rates.du[i].values();
        const auto dw = rates.dw[i].values();
        const auto drho = rates.drho[i].values();
        for (std::size_t n = 0; n < points; ++n) {
            u[n] += h * du[n];
            w[n] += h * dw[n];
            rho[n] += h * drho[n];
        }
    }
    out.t = base.t + h;
    return out;
}

}  // namespace

StateRates rhs(const NetworkState& state, const NetworkParams& params,
               const NonlinearityBounds& bounds) {
    check_shape(state);
    check_finite(state);

    const int m = state.neurons();
    const Grid2D& grid = state.grid;
    const std::size_t points = grid.points();
    const double md = static_cast<double>(m);

    // S = sum_j (u_j - u_1), fixed ascending order
    std::vector<double> spread(points, 0.0);
    const auto u0 = state.u[0].values();
    for (int j = 1; j < m; ++j) {
        const auto uj = state.u[j].values();
        for (std::size_t n = 0; n < points; ++n) spread[n] += uj[n] - u0[n];
    }

    StateRates rates;
    rates.du.assign(m, Field2D(grid));
    rates.dw.assign(m, Field2D(grid));
    rates.drho.assign(m, Field2D(grid));
    Field2D lap(grid);

    for (int i = 0; i < m; ++i) {
        laplacian_neumann(state.u[i], lap);
        const auto u = state.u[i].values();
        const auto w = state.w[i].values();
        const auto rho = state.rho[i].values();
        const auto l = lap.values();
        auto du = rates.du[i].values();
        auto dw = rates.dw[i].values();
        auto drho = rates.drho[i].values();
        for (std::size_t n = 0; n < points; ++n) {
            const double coupling = params.P * (spread[n] - md * (u[n] - u0[n]));
            du[n] = params.eta * l[n] + f_eval(u[n], bounds) - params.sigma * w[n] + params.J -
                    params.k * std::tanh(rho[n]) * u[n] + coupling;
            dw[n] = params.a * u[n] + params.c - params.b * w[n];
            drho[n] = params.q * u[n] - params.r * rho[n];
        }
    }
    return rates;
}

NetworkState step_euler(const NetworkState& state, const NetworkParams& params,
                        const NonlinearityBounds& bounds, double dt) {
    NetworkState next = shifted(state, rhs(state, params, bounds), dt);
    check_finite(next);
    return next;
}

NetworkState step_euler(const NetworkState& state, const RunConfig& cfg) {
    return step_euler(state, cfg.params, cfg.bounds, cfg.dt);
}

NetworkState step_rk4(const NetworkState& state, const NetworkParams& params,
                      const NonlinearityBounds& bounds, double dt) {
    const StateRates k1 = rhs(state, params, bounds);
    const StateRates k2 = rhs(shifted(state, k1, 0.5 * dt), params, bounds);
    const StateRates k3 = rhs(shifted(state, k2, 0.5 * dt), params, bounds);
    const StateRates k4 = rhs(shifted(state, k3, dt), params, bounds);

    NetworkState next = state;
    const int m = state.neurons();
    const std::size_t points = state.grid.points();
    const double w6 = dt / 6.0;
    auto combine = [&](std::vector<Field2D>& target, const std::vector<Field2D>& a,
                       const std::vector<Field2D>& b, const std::vector<Field2D>& c,
                       const std::vector<Field2D>& d) {
        for (int i = 0; i < m; ++i) {
            auto x = target[i].values();
            for (std::size_t n = 0; n < points; ++n) {
                x[n] += w6 * (a[i][n] + 2.0 * b[i][n] + 2.0 * c[i][n] + d[i][n]);
            }
        }
    };
    combine(next.u, k1.du, k2.du, k3.du, k4.du);
    combine(next.w, k1.dw, k2.dw, k3.dw, k4.dw);
    combine(next.rho, k1.drho, k2.drho, k3.drho, k4.drho);
    next.t = state.t + dt;
    check_finite(next);
    return next;
}

NetworkState step_rk4(const NetworkState& state, const RunConfig& cfg) {
    return step_rk4(state, cfg.params, cfg.bounds, cfg.dt);
}

NetworkState step(const NetworkState& state, const RunConfig& cfg) {
    return cfg.integrator == Integrator::Rk4 ? step_rk4(state, cfg) : step_euler(state, cfg);
}

RunResult integrate(const RunConfig& cfg, Sinks sinks) {
    if (const auto errors = validate(cfg); !errors.empty()) {
        throw std::invalid_argument("invalid run configuration: " + errors.front());
    }
    return integrate(cfg, init_random(cfg.grid, cfg.params, cfg.amplitude, cfg.seed), sinks);
}

RunResult integrate(const RunConfig& cfg, NetworkState initial, Sinks sinks) {
    if (const auto errors = validate(cfg); !errors.empty()) {
        throw std::invalid_argument("invalid run configuration: " + errors.front());
    }
    if (initial.grid != cfg.grid || initial.neurons() != cfg.params.m) {
        throw std::invalid_argument("initial state does not match the run configuration");
    }

    RunResult result{std::move(initial), MetricsSeries(cfg.params.m)};
    NetworkState& state = result.final_state;
    const double t0 = state.t;

    auto record = [&] {
        result.metrics.push(measure(state));
        if (sinks.metrics) sinks.metrics->on_metrics(result.metrics, result.metrics.back());
    };
    auto snapshot = [&](long n) {
        if (sinks.snapshots && cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0) {
            sinks.snapshots->on_snapshot(state, n);
        }
    };

    if (cfg.record_initial) record();
    snapshot(0);
    for (long n = 1; n <= cfg.n_steps; ++n) {
        try {
            state = step(state, cfg);
        } catch (const NumericalError& e) {
            throw e.at_step(n);
        }
        // Multiplying instead of accumulating keeps sample times free of drift.
        state.t = t0 + static_cast<double>(n) * cfg.dt;
        if (n % cfg.record_every == 0 || n == cfg.n_steps) record();
        snapshot(n);
    }
    return result;
}

namespace {

bool spatially_constant(const std::vector<Field2D>& stack) {
    return std::all_of(stack.begin(), stack.end(), [](const Field2D& f) {
        const auto v = f.values();
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    });
}

// Reduced 3m-dimensional system, layout [u_1..u_m, w_1..w_m, rho_1..rho_m].
std::vector<double> reduced_rhs(const std::vector<double>& y, const NetworkParams& p,
                                const NonlinearityBounds& bounds) {
    const int m = p.m;
    std::vector<double> dy(y.size());
    for (int i = 0; i < m; ++i) {
        const double u = y[i];
        const double w = y[m + i];
        const double rho = y[2 * m + i];
        double coupling = 0.0;
        for (int j = 0; j < m; ++j) coupling += p.P * (y[j] - u);
        dy[i] = f_eval(u, bounds) - p.sigma * w + p.J - p.k * std::tanh(rho) * u + coupling;
        dy[m + i] = p.a * u + p.c - p.b * w;
        dy[2 * m + i] = p.q * u - p.r * rho;
    }
    return dy;
}

}  // namespace

OdeCheckReport reduce_to_ode_check(const RunConfig& cfg, const NetworkState& initial) {
    if (!spatially_constant(initial.u) || !spatially_constant(initial.w) ||
        !spatially_constant(initial.rho)) {
        throw std::invalid_argument("ODE reduction needs spatially constant initial data");
    }
    const int m = initial.neurons();

    NetworkState pde = initial;
    for (long n = 1; n <= cfg.n_steps; ++n) pde = step(pde, cfg);

    NetworkParams p = cfg.params;
    p.m = m;
    std::vector<double> y(3 * static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        y[i] = initial.u[i][0];
        y[m + i] = initial.w[i][0];
        y[2 * m + i] = initial.rho[i][0];
    }
    const double h = cfg.dt / 100.0;
    const long steps = cfg.n_steps * 100;
    auto axpy = [](const std::vector<double>& a, const std::vector<double>& b, double s) {
        std::vector<double> out(a.size());
        for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] + s * b[n];
        return out;
    };
    for (long n = 0; n < steps; ++n) {
        const auto k1 = reduced_rhs(y, p, cfg.bounds);
        const auto k2 = reduced_rhs(axpy(y, k1, 0.5 * h), p, cfg.bounds);
        const auto k3 = reduced_rhs(axpy(y, k2, 0.5 * h), p, cfg.bounds);
        const auto k4 = reduced_rhs(axpy(y, k3, h), p, cfg.bounds);
        for (std::size_t v = 0; v < y.size(); ++v) {
            y[v] += h / 6.0 * (k1[v] + 2.0 * k2[v] + 2.0 * k3[v] + k4[v]);
        }
    }

    OdeCheckReport report;
    report.t_end = static_cast<double>(cfg.n_steps) * cfg.dt;
    auto compare = [&](const std::vector<Field2D>& stack, std::size_t offset) {
        for (int i = 0; i < m; ++i) {
            for (double v : stack[i].values()) {
                report.max_abs_deviation =
                    std::max(report.max_abs_deviation, std::abs(v - y[offset + i]));
            }
        }
    };
    compare(pde.u, 0);
    compare(pde.w, static_cast<std::size_t>(m));
    compare(pde.rho, 2 * static_cast<std::size_t>(m));
    return report;
}

}  // namespace fhn
