#include "fhn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "fhn/config.hpp"
#include "fhn/oracles.hpp"

namespace fhn::verify {

namespace {

Field2D random_field(const Grid2D& grid, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field2D f(grid);
    for (double& v : f.values()) v = dist(gen);
    return f;
}

double fitted_slope(const std::vector<double>& hs, const std::vector<double>& errs) {
    const auto n = static_cast<double>(hs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        mx += std::log(hs[i]);
        my += std::log(errs[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double dx = std::log(hs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(errs[i]) - my);
    }
    return sxy / sxx;
}

RunConfig shrunk_paper_run() {
    RunConfig cfg = paper_config().run;
    cfg.grid = Grid2D{8, 8, 1.0};
    return cfg;
}

NetworkState run_steps(NetworkState state, const RunConfig& cfg, long steps) {
    for (long n = 0; n < steps; ++n) state = step(state, cfg);
    return state;
}

}  // namespace

double stencil_deviation(int random_fields, std::uint64_t seed) {
    const Grid2D grid{33, 33, 1.0};
    const Field2D mode = oracle::cosine_mode(grid);
    double worst = oracle::max_abs_diff(laplacian_neumann(mode), oracle::padded_laplacian(mode));
    std::mt19937_64 gen(seed);
    for (int n = 0; n < random_fields; ++n) {
        const Field2D f = random_field(Grid2D{17, 11, 0.5}, gen);
        worst = std::max(worst,
                         oracle::max_abs_diff(laplacian_neumann(f), oracle::padded_laplacian(f)));
    }
    return worst;
}

double zero_flux_ratio(int random_fields, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    double worst = 0.0;
    for (int n = 0; n < random_fields; ++n) {
        const Grid2D grid{32, 32, 1.0};
        const Field2D f = random_field(grid, gen);
        const double scale = f.max_abs() * grid.nx * grid.ny;
        worst = std::max(worst, std::abs(zero_flux_sum(f)) / scale);
    }
    return worst;
}

OrderEstimate spatial_order() {
    OrderEstimate est;
    for (int refine : {1, 2, 4}) {
        const Grid2D grid{33 * refine, 33 * refine, 1.0 / refine};
        const Field2D mode = oracle::cosine_mode(grid);
        const Field2D lap = laplacian_neumann(mode);
        const double lambda = oracle::cosine_mode_eigenvalue(grid);
        double err = 0.0;
        for (std::size_t n = 0; n < mode.size(); ++n) {
            err = std::max(err, std::abs(lap[n] - lambda * mode[n]));
        }
        est.steps.push_back(grid.dx);
        est.errors.push_back(err);
    }
    est.order = fitted_slope(est.steps, est.errors);
    return est;
}

double coupling_deviation(const RunConfig& base, int m, int states, std::uint64_t seed) {
    NetworkParams params = base.params;
    params.m = m;
    double worst = 0.0;
    for (int n = 0; n < states; ++n) {
        const NetworkState s = init_random(base.grid, params, 1.0, seed + static_cast<std::uint64_t>(n));
        const StateRates fast = rhs(s, params, base.bounds);
        const StateRates slow = oracle::naive_rhs(s, params, base.bounds);
        for (int i = 0; i < m; ++i) {
            worst = std::max({worst, oracle::max_abs_diff(fast.du[i], slow.du[i]),
                              oracle::max_abs_diff(fast.dw[i], slow.dw[i]),
                              oracle::max_abs_diff(fast.drho[i], slow.drho[i])});
        }
    }
    return worst;
}

OdeCheckReport ode_reduction(Integrator integrator) {
    RunConfig cfg = shrunk_paper_run();
    cfg.grid = Grid2D{4, 4, 1.0};
    cfg.integrator = integrator;
    cfg.n_steps = 4000;  // t = 1 at dt = 0.00025
    NetworkState init(cfg.grid, cfg.params.m);
    for (int i = 0; i < cfg.params.m; ++i) {
        for (double& v : init.u[i].values()) v = 0.01 + 0.012 * i;
        for (double& v : init.w[i].values()) v = 0.045 - 0.01 * i;
        for (double& v : init.rho[i].values()) v = 0.02 + 0.007 * i;
    }
    return reduce_to_ode_check(cfg, init);
}

OrderEstimate temporal_order(Integrator integrator, const std::vector<double>& dts,
                             double t_end) {
    RunConfig cfg = shrunk_paper_run();
    const NetworkState init = init_random(cfg.grid, cfg.params, cfg.amplitude, cfg.seed);

    RunConfig ref_cfg = cfg;
    ref_cfg.integrator = Integrator::Rk4;
    ref_cfg.dt = 1e-5;
    const NetworkState reference =
        run_steps(init, ref_cfg, std::lround(t_end / ref_cfg.dt));

    OrderEstimate est;
    for (double dt : dts) {
        RunConfig c = cfg;
        c.integrator = integrator;
        c.dt = dt;
        const NetworkState end = run_steps(init, c, std::lround(t_end / dt));
        est.steps.push_back(dt);
        est.errors.push_back(oracle::max_abs_diff(end, reference));
    }
    est.order = fitted_slope(est.steps, est.errors);
    return est;
}

double identical_neuron_drift(const RunConfig& cfg) {
    NetworkParams one = cfg.params;
    one.m = 1;
    const NetworkState seed_state = init_random(cfg.grid, one, cfg.amplitude, cfg.seed);
    NetworkState state(cfg.grid, cfg.params.m);
    for (int i = 0; i < cfg.params.m; ++i) {
        state.u[i] = seed_state.u[0];
        state.w[i] = seed_state.w[0];
        state.rho[i] = seed_state.rho[0];
    }
    state = run_steps(std::move(state), cfg, cfg.n_steps);
    double worst = 0.0;
    for (int i = 1; i < cfg.params.m; ++i) {
        worst = std::max({worst, oracle::max_abs_diff(state.u[i], state.u[0]),
                          oracle::max_abs_diff(state.w[i], state.w[0]),
                          oracle::max_abs_diff(state.rho[i], state.rho[0])});
    }
    return worst;
}

double permutation_drift(const RunConfig& cfg) {
    const NetworkState init = init_random(cfg.grid, cfg.params, cfg.amplitude, cfg.seed);
    NetworkState swapped = init;
    std::reverse(swapped.u.begin(), swapped.u.end());
    std::reverse(swapped.w.begin(), swapped.w.end());
    std::reverse(swapped.rho.begin(), swapped.rho.end());

    NetworkState a = run_steps(init, cfg, cfg.n_steps);
    NetworkState b = run_steps(std::move(swapped), cfg, cfg.n_steps);
    std::reverse(b.u.begin(), b.u.end());
    std::reverse(b.w.begin(), b.w.end());
    std::reverse(b.rho.begin(), b.rho.end());
    return oracle::max_abs_diff(a, b);
}

std::vector<CheckResult> run_suite() {
    std::vector<CheckResult> out;
    auto add = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };

    const auto assumption =
        verify_assumption(NonlinearityBounds::prototype(1.0), {-100.0, 100.0}, 100000);
    add("assumption bounds (kappa = 1, [-100, 100])", assumption.ok(),
        fmt::format("{} samples, {} violations", assumption.samples_checked,
                    assumption.violations.size()));

    const double stencil = stencil_deviation(20, 7);
    add("stencil vs padded brute force", stencil <= 1e-12,
        fmt::format("max deviation {:.3e} (limit 1e-12)", stencil));

    const double flux = zero_flux_ratio(100, 11);
    add("zero-flux sum", flux <= 1e-10, fmt::format("max relative sum {:.3e} (limit 1e-10)", flux));

    const OrderEstimate space = spatial_order();
    add("spatial order (cosine mode)", std::abs(space.order - 2.0) <= 0.2,
        fmt::format("order {:.4f} (expected 2.0 +- 0.2)", space.order));

    const RunConfig coupling_base = [] {
        RunConfig c = paper_config().run;
        c.grid = Grid2D{12, 10, 1.0};
        return c;
    }();
    for (int m : {2, 3, 4, 8}) {
        const double dev = coupling_deviation(coupling_base, m, 20, 100 + m);
        add(fmt::format("coupling vs O(m^2) oracle, m = {}", m), dev <= 1e-12,
            fmt::format("max deviation {:.3e} (limit 1e-12)", dev));
    }

    const OdeCheckReport euler = ode_reduction(Integrator::Euler);
    add("ODE reduction, Euler", euler.max_abs_deviation <= 1e-3,
        fmt::format("max deviation {:.3e} at t = {} (limit 1e-3)", euler.max_abs_deviation,
                    euler.t_end));
    const OdeCheckReport rk4 = ode_reduction(Integrator::Rk4);
    add("ODE reduction, RK4", rk4.max_abs_deviation <= 1e-8,
        fmt::format("max deviation {:.3e} at t = {} (limit 1e-8)", rk4.max_abs_deviation,
                    rk4.t_end));

    const OrderEstimate te = temporal_order(Integrator::Euler, {0.0025, 0.00125, 0.000625});
    add("temporal order, Euler", std::abs(te.order - 1.0) <= 0.2,
        fmt::format("order {:.4f} (expected 1.0 +- 0.2)", te.order));
    const OrderEstimate tr = temporal_order(Integrator::Rk4, {0.01, 0.005, 0.0025});
    add("temporal order, RK4", tr.order >= 3.5, fmt::format("order {:.4f} (expected >= 3.5)", tr.order));

    RunConfig inv = paper_config().run;
    inv.grid = Grid2D{8, 8, 1.0};
    const double same = identical_neuron_drift(inv);
    add("identical neurons stay identical (10000 steps)", same <= 1e-12,
        fmt::format("max drift {:.3e}", same));
    const double perm = permutation_drift(inv);
    add("neuron relabeling commutes with stepping (10000 steps)", perm <= 1e-12,
        fmt::format("max drift {:.3e}", perm));
    return out;
}

}  // namespace fhn::verify
