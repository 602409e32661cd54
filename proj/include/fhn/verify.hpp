#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhn/network.hpp"

namespace fhn::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Errors measured at a sequence of step sizes, with the least-squares slope
/// of log(error) against log(step).
struct OrderEstimate {
    std::vector<double> steps;
    std::vector<double> errors;
    double order = 0.0;
};

/// Largest gap between laplacian_neumann and the padded brute-force stencil,
/// over the 33x33 cosine mode and `random_fields` random fields.
[[nodiscard]] double stencil_deviation(int random_fields, std::uint64_t seed);

/// Largest |zero_flux_sum(f)| / (max|f| nx ny) over random fields.
[[nodiscard]] double zero_flux_ratio(int random_fields, std::uint64_t seed);

/// Max error of the discrete Laplacian of the cosine mode against its
/// continuum eigenvalue, for dx = 1, 1/2, 1/4 on a domain of side 33.
[[nodiscard]] OrderEstimate spatial_order();

/// Largest |rhs - naive_rhs| over `states` random states of m neurons.
[[nodiscard]] double coupling_deviation(const RunConfig& base, int m, int states,
                                        std::uint64_t seed);

/// reduce_to_ode_check of the published parameters with distinct,
/// spatially constant per-neuron data, integrated to t = 1.
[[nodiscard]] OdeCheckReport ode_reduction(Integrator integrator);

/// Global error at t_end against an RK4 reference with step 1e-5, on the
/// published parameters shrunk to an 8x8 grid.
[[nodiscard]] OrderEstimate temporal_order(Integrator integrator, const std::vector<double>& dts,
                                           double t_end = 0.25);

/// Runs n_steps from a state whose m neurons are copies of one random
/// neuron; returns the largest difference between any neuron and neuron 1.
[[nodiscard]] double identical_neuron_drift(const RunConfig& cfg);

/// Runs cfg and a copy with neuron labels reversed; returns the largest
/// difference between matching neurons at the end.
[[nodiscard]] double permutation_drift(const RunConfig& cfg);

/// Every oracle check, each with its pass threshold applied.
[[nodiscard]] std::vector<CheckResult> run_suite();

}  // namespace fhn::verify
