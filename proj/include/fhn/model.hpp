#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhn/grid.hpp"

namespace fhn {

/// Coefficients of the coupled memristive FitzHugh-Nagumo network:
///
///   du_i/dt   = eta*Lap(u_i) + f(u_i) - sigma*w_i + J - k*tanh(rho_i)*u_i + P*sum_j (u_j - u_i)
///   dw_i/dt   = a*u_i + c - b*w_i
///   drho_i/dt = q*u_i - r*rho_i
struct NetworkParams {
    double eta = 0.0;    ///< diffusion
    double sigma = 0.0;  ///< recovery feedback into u
    double J = 0.0;      ///< reference potential (any sign)
    double k = 0.0;      ///< memristor coupling strength
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double q = 0.0;
    double r = 0.0;
    double P = 0.0;  ///< synaptic coupling strength, 0 allowed
    int m = 2;       ///< neuron count

    friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

/// One message per violated invariant; empty when the set is admissible.
[[nodiscard]] std::vector<std::string> validate(const NetworkParams& params);

/// Bounds of the dissipativity assumption on f:
///   f(s) s <= -lambda s^4 + phi_bar,   f'(s) <= beta.
/// phi is taken to be the constant phi_bar.
struct NonlinearityBounds {
    double kappa = 1.0;
    double lambda = 0.25;
    double beta = 4.0 / 3.0;
    double phi_bar = 4.0;

    /// Bounds for f(s) = s(s - kappa)(1 - s):
    /// lambda = 1/4, phi_bar = (1+kappa)^4/4, beta = (1+kappa)^2/3.
    [[nodiscard]] static NonlinearityBounds prototype(double kappa);

    friend bool operator==(const NonlinearityBounds&, const NonlinearityBounds&) = default;
};

/// f(s) = s (s - kappa) (1 - s)
[[nodiscard]] inline double f_eval(double s, const NonlinearityBounds& bounds) noexcept {
    return s * (s - bounds.kappa) * (1.0 - s);
}

/// f'(s) = -3 s^2 + 2 (1 + kappa) s - kappa
[[nodiscard]] inline double f_derivative(double s, const NonlinearityBounds& bounds) noexcept {
    return -3.0 * s * s + 2.0 * (1.0 + bounds.kappa) * s - bounds.kappa;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

enum class AssumptionKind { Dissipation, DerivativeBound };

struct AssumptionViolation {
    AssumptionKind kind;
    double s;
    double lhs;  ///< f(s) s or f'(s)
    double rhs;  ///< -lambda s^4 + phi_bar or beta
};

struct AssumptionReport {
    std::vector<AssumptionViolation> violations;
    std::size_t samples_checked = 0;
    double max_derivative = 0.0;  ///< closed-form sup of f', attained at (1+kappa)/3

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Checks both inequalities on n_samples evenly spaced points of the range,
/// plus the analytic argmax of f' when it falls inside the range.
/// Throws std::invalid_argument when n_samples < 100 or the range is empty.
[[nodiscard]] AssumptionReport verify_assumption(const NonlinearityBounds& bounds, Interval range,
                                                 int n_samples);

/// State of all m neurons: u, w and rho stacks share one grid.
struct NetworkState {
    Grid2D grid;
    double t = 0.0;
    std::vector<Field2D> u;
    std::vector<Field2D> w;
    std::vector<Field2D> rho;

    NetworkState() = default;
    NetworkState(const Grid2D& grid, int neurons, double fill = 0.0);

    [[nodiscard]] int neurons() const noexcept { return static_cast<int>(u.size()); }
    [[nodiscard]] bool all_finite() const noexcept;

    friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

/// Fills every one of the 3m fields with independent uniform draws from
/// [0, amplitude], in the order u_1..u_m, w_1..w_m, rho_1..rho_m, row-major.
/// The generator is a 64-bit Mersenne twister mapped to [0, 1) by its top 53
/// bits, so the state is a pure function of (grid, m, amplitude, seed).
[[nodiscard]] NetworkState init_random(const Grid2D& grid, const NetworkParams& params,
                                       double amplitude, std::uint64_t seed);

}  // namespace fhn
