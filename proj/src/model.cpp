#include "fhn/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace fhn {

std::vector<std::string> validate(const NetworkParams& p) {
    std::vector<std::string> errors;
    auto positive = [&](const char* name, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            errors.push_back(fmt::format("{} must be a positive finite number (got {})", name, v));
        }
    };
    positive("eta", p.eta);
    positive("sigma", p.sigma);
    positive("k", p.k);
    positive("a", p.a);
    positive("b", p.b);
    positive("c", p.c);
    positive("q", p.q);
    positive("r", p.r);
    if (!std::isfinite(p.J)) errors.emplace_back("J must be finite");
    if (!(p.P >= 0.0) || !std::isfinite(p.P)) {
        errors.push_back(fmt::format("P must be a nonnegative finite number (got {})", p.P));
    }
    if (p.m < 2) errors.push_back(fmt::format("m must be at least 2 (got {})", p.m));
    return errors;
}

NonlinearityBounds NonlinearityBounds::prototype(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const double s = 1.0 + kappa;
    return NonlinearityBounds{kappa, 0.25, s * s / 3.0, s * s * s * s / 4.0};
}

AssumptionReport verify_assumption(const NonlinearityBounds& bounds, Interval range,
                                   int n_samples) {
    if (n_samples < 100) throw std::invalid_argument("verify_assumption needs n_samples >= 100");
    if (!(range.hi > range.lo)) throw std::invalid_argument("sample range must be nonempty");

    AssumptionReport report;
    const double argmax = (1.0 + bounds.kappa) / 3.0;
    report.max_derivative = f_derivative(argmax, bounds);

    auto check = [&](double s) {
        const double fs = f_eval(s, bounds) * s;
        const double cap = -bounds.lambda * s * s * s * s + bounds.phi_bar;
        if (fs > cap) report.violations.push_back({AssumptionKind::Dissipation, s, fs, cap});
        const double df = f_derivative(s, bounds);
        if (df > bounds.beta) {
            report.violations.push_back({AssumptionKind::DerivativeBound, s, df, bounds.beta});
        }
        ++report.samples_checked;
    };

    const double step = (range.hi - range.lo) / static_cast<double>(n_samples - 1);
    for (int i = 0; i < n_samples; ++i) check(range.lo + step * i);
    if (argmax >= range.lo && argmax <= range.hi) check(argmax);
    return report;
}

NetworkState::NetworkState(const Grid2D& g, int neurons, double fill) : grid(g) {
    if (neurons < 1) throw std::invalid_argument("network needs at least one neuron");
    u.assign(neurons, Field2D(g, fill));
    w.assign(neurons, Field2D(g, fill));
    rho.assign(neurons, Field2D(g, fill));
}

bool NetworkState::all_finite() const noexcept {
    auto finite = [](const std::vector<Field2D>& stack) {
        return std::all_of(stack.begin(), stack.end(),
                           [](const Field2D& f) { return f.all_finite(); });
    };
    return finite(u) && finite(w) && finite(rho);
}

NetworkState init_random(const Grid2D& grid, const NetworkParams& params, double amplitude,
                         std::uint64_t seed) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw std::invalid_argument("initial amplitude must be nonnegative and finite");
    }
    NetworkState state(grid, params.m);
    std::mt19937_64 gen(seed);
    constexpr double kUnit = 1.0 / 9007199254740992.0;  // 2^-53
    auto fill = [&](std::vector<Field2D>& stack) {
        for (Field2D& f : stack) {
            for (double& v : f.values()) v = amplitude * (static_cast<double>(gen() >> 11) * kUnit);
        }
    };
    fill(state.u);
    fill(state.w);
    fill(state.rho);
    return state;
}

}  // namespace fhn
